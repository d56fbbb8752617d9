#pragma once

#include "zhom/scalar.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace zhom {

/// Sparse vector: (index, value) pairs sorted by index, zeros never stored.
class SparseVector {
public:
  using Entry = std::pair<std::uint32_t, Scalar>;

  SparseVector() = default;

  static SparseVector unit(const Field &f, std::uint32_t i) {
    SparseVector v;
    v.entries_.emplace_back(i, f.one());
    return v;
  }

  bool is_zero() const { return entries_.empty(); }
  std::size_t nnz() const { return entries_.size(); }
  const std::vector<Entry> &entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }
  /// Index of the first nonzero entry; requires !is_zero().
  std::uint32_t leading() const { return entries_.front().first; }

  /// Value at i, or nullptr when the entry is zero.
  const Scalar *find(std::uint32_t i) const;
  Scalar get(std::uint32_t i, const Field &f) const;
  void set(std::uint32_t i, const Scalar &v);
  /// Appends an entry; indices must be pushed in increasing order.
  void push_back(std::uint32_t i, Scalar v);

  /// this += c * other
  void axpy(const Scalar &c, const SparseVector &other);
  SparseVector scaled(const Scalar &c) const;
  /// Shifts every index by `offset` (used to place blocks in direct sums).
  SparseVector shifted(std::int64_t offset) const;
  /// Entries with index in [from, from + len), reindexed to start at 0.
  SparseVector slice(std::uint32_t from, std::uint32_t len) const;

  bool operator==(const SparseVector &o) const;

private:
  std::vector<Entry> entries_;
};

/// Row-major sparse matrix over one field.
class SparseMatrix {
public:
  SparseMatrix(Field f, std::size_t rows, std::size_t cols)
      : field_(f), rows_(rows), cols_(cols), data_(rows) {}

  static SparseMatrix zero(Field f, std::size_t rows, std::size_t cols) { return {f, rows, cols}; }
  static SparseMatrix identity(Field f, std::size_t n);
  /// Builds a matrix whose columns are the given vectors.
  static SparseMatrix from_columns(Field f, std::size_t rows, const std::vector<SparseVector> &cols);
  static SparseMatrix from_rows(Field f, std::size_t cols, std::vector<SparseVector> rows);
  static SparseMatrix from_dense(Field f, const std::vector<std::vector<long long>> &values);

  const Field &field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const;
  bool is_zero() const;

  Scalar at(std::size_t r, std::size_t c) const { return data_[r].get(static_cast<std::uint32_t>(c), field_); }
  void set(std::size_t r, std::size_t c, const Scalar &v) { data_[r].set(static_cast<std::uint32_t>(c), v); }
  void add_to(std::size_t r, std::size_t c, const Scalar &v);
  const SparseVector &row(std::size_t r) const { return data_[r]; }
  SparseVector &row_mut(std::size_t r) { return data_[r]; }
  std::vector<SparseVector> columns() const;

  SparseVector apply(const SparseVector &v) const;
  SparseMatrix operator*(const SparseMatrix &o) const;
  SparseMatrix operator+(const SparseMatrix &o) const;
  SparseMatrix scaled(const Scalar &c) const;
  SparseMatrix transpose() const;
  /// this += c * o
  void axpy(const Scalar &c, const SparseMatrix &o);
  /// Copies `block` into this matrix with its (0,0) at (r0, c0).
  void place(std::size_t r0, std::size_t c0, const SparseMatrix &block);

  bool operator==(const SparseMatrix &o) const;

private:
  Field field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<SparseVector> data_;
};

/// Incrementally maintained reduced row echelon basis of a subspace of k^dim.
/// Rows are fully reduced, so the coordinate of a member vector along row r is
/// simply its entry in the pivot column of r.
class Echelon {
public:
  Echelon(Field f, std::size_t dim) : field_(f), dim_(dim), row_of_col_(dim, -1) {}

  const Field &field() const { return field_; }
  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return rows_.size(); }

  /// Adds v to the spanning set. Returns true if the rank grew.
  bool insert(const SparseVector &v);
  /// v minus its projection onto the span; zero at every pivot column.
  SparseVector reduce(const SparseVector &v) const;
  bool contains(const SparseVector &v) const { return reduce(v).is_zero(); }
  /// Coordinates of v with respect to basis(); v must lie in the span.
  SparseVector coordinates(const SparseVector &v) const;

  /// Basis rows sorted by pivot column (the RREF rows).
  std::vector<SparseVector> basis() const;
  std::vector<std::uint32_t> pivots() const;
  std::vector<std::uint32_t> non_pivots() const;

private:
  std::vector<std::size_t> sorted_order() const;

  Field field_;
  std::size_t dim_;
  std::vector<SparseVector> rows_;
  std::vector<std::uint32_t> row_pivot_;
  std::vector<int> row_of_col_;
};

struct RrefResult {
  SparseMatrix reduced;
  std::vector<std::size_t> pivots;
  std::size_t rank;
};

RrefResult rref(const SparseMatrix &m);
std::size_t rank(const SparseMatrix &m);
/// Basis of the right null space, one vector per non-pivot column in increasing order.
std::vector<SparseVector> kernel_basis(const SparseMatrix &m);
/// A solution of m x = b, or nullopt when b is not in the column space.
std::optional<SparseVector> solve(const SparseMatrix &m, const SparseVector &b);
/// Inverse of a square invertible matrix; nullopt when singular.
std::optional<SparseMatrix> inverse(const SparseMatrix &m);
/// Echelon basis of the column space.
Echelon column_space(const SparseMatrix &m);

/// A subquotient Z/B of k^dim with B contained in Z. Classes are represented by
/// echelon rows of Z reduced modulo B.
class Subquotient {
public:
  Subquotient(const Echelon &cycles, Echelon boundaries);

  std::size_t dim() const { return classes_.rank(); }
  std::size_t ambient_dim() const { return boundaries_.dim(); }
  /// Representative cocycles of a basis of Z/B.
  std::vector<SparseVector> representatives() const { return classes_.basis(); }
  /// Coordinates of the class of a cycle z.
  SparseVector class_of(const SparseVector &z) const;
  bool is_boundary(const SparseVector &z) const { return boundaries_.contains(z); }
  /// Matrix of the map induced on classes by a chain-level map into `target`.
  SparseMatrix induced(const SparseMatrix &chain_map, const Subquotient &target) const;

private:
  Echelon boundaries_;
  Echelon classes_;
};

} // namespace zhom
