#pragma once

#include "zhom/linalg.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace zhom {

/// Finite degree range [lo, hi] on which all data is stored. Degrees in
/// (hi - guard, hi] are not trusted for termination claims.
struct Window {
  int lo = 0;
  int hi = 0;
  int guard = 2;

  int width() const { return hi - lo + 1; }
  bool contains(int d) const { return d >= lo && d <= hi; }
  int reliable_top() const { return hi - guard; }
  void check() const;

  friend bool operator==(const Window &, const Window &) = default;
};

/// Structure constants of one composable triple (i, j, k): for basis elements
/// s of A_ij and t of A_jk, `at(s, t)` is the coordinate vector of st in A_ik.
struct MultTensor {
  std::size_t left = 0;
  std::size_t right = 0;
  std::size_t out = 0;
  std::vector<SparseVector> products;

  const SparseVector &at(std::size_t s, std::size_t t) const { return products[s * right + t]; }
  SparseVector &at(std::size_t s, std::size_t t) { return products[s * right + t]; }

  friend bool operator==(const MultTensor &, const MultTensor &) = default;
};

struct Violation {
  std::string kind; // grading | diagonal | shape | identity | associativity
  std::vector<int> degrees;
  std::vector<std::size_t> basis;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// How a basis element of A_jk decomposes into algebra generators: a linear
/// combination of generator basis elements of A_jk plus products g * t with
/// g a generator of A_jm and t a basis element of A_mk (j < m < k).
struct Recipe {
  struct Product {
    int mid;
    std::uint32_t gen;
    std::uint32_t right;
    Scalar coeff;
  };
  std::vector<std::pair<std::uint32_t, Scalar>> gens;
  std::vector<Product> products;
};

class ZAlgebra;
using AlgebraPtr = std::shared_ptr<const ZAlgebra>;

/// Connected, positively graded Z-algebra truncated to a window. Immutable.
class ZAlgebra : public std::enable_shared_from_this<ZAlgebra> {
public:
  /// Raw structure constants. dims is indexed by pair_index and may hold
  /// (invalid) nonzero entries below the diagonal so that validate can report them.
  struct Data {
    Field field = Field::rationals();
    Window window;
    std::vector<std::size_t> dims;
    std::vector<MultTensor> mult; // indexed by triple_index, used only for i <= j <= k
  };

  static AlgebraPtr create(Data data);
  /// Empty data with every tensor sized by dims; products left zero.
  static Data blank(Field f, Window w, const std::vector<std::size_t> &dims);

  const Data &data() const { return data_; }
  const Field &field() const { return data_.field; }
  const Window &window() const { return data_.window; }
  int lo() const { return data_.window.lo; }
  int hi() const { return data_.window.hi; }

  std::size_t pair_index(int i, int j) const {
    const auto w = static_cast<std::size_t>(data_.window.width());
    return static_cast<std::size_t>(i - lo()) * w + static_cast<std::size_t>(j - lo());
  }
  std::size_t triple_index(int i, int j, int k) const {
    const auto w = static_cast<std::size_t>(data_.window.width());
    return pair_index(i, j) * w + static_cast<std::size_t>(k - lo());
  }

  /// dim A_ij; zero outside the window and for i > j.
  std::size_t dim(int i, int j) const;
  const MultTensor &mult(int i, int j, int k) const { return data_.mult[triple_index(i, j, k)]; }
  /// Product of a in A_ij and b in A_jk.
  SparseVector multiply(int i, int j, int k, const SparseVector &a, const SparseVector &b) const;
  /// Matrix of x -> x * s from A_ij to A_ik, for s a basis element of A_jk.
  SparseMatrix right_mult(int i, int j, int k, std::size_t s) const;
  /// Matrix of x -> s * x from A_jk to A_ik, for s a basis element of A_ij.
  SparseMatrix left_mult(int i, int j, int k, std::size_t s) const;

  /// Basis indices of A_jk (j < k) forming a complement of the decomposables.
  const std::vector<std::uint32_t> &generators(int j, int k) const;
  const Recipe &recipe(int j, int k, std::size_t s) const;

  /// The index-flipped opposite algebra: (A~op)_ij = A_{-j,-i}, f.g = gf.
  AlgebraPtr opposite() const;

  bool same_structure(const ZAlgebra &o) const;

private:
  explicit ZAlgebra(Data d) : data_(std::move(d)) {}
  void build_generators() const;

  Data data_;

  mutable std::once_flag gen_once_;
  mutable std::vector<std::vector<std::uint32_t>> gens_;
  mutable std::vector<std::vector<Recipe>> recipes_;

  mutable std::mutex opp_mutex_;
  mutable AlgebraPtr opposite_;
  mutable std::weak_ptr<const ZAlgebra> parent_;
};

/// Same algebra object, or componentwise identical structure.
bool same_algebra(const AlgebraPtr &a, const AlgebraPtr &b);

struct ValidateOptions {
  std::size_t max_violations = 1000;
};

ValidationReport validate(const ZAlgebra &a, const ValidateOptions &opts = {});

/// The algebra K: K_ii = k, zero elsewhere.
AlgebraPtr make_trivial(const Window &w, Field f = Field::rationals());
/// Z-algebra of k[x_1..x_n]: A_ij = degree (j - i) monomials, graded-lex basis.
AlgebraPtr make_poly(int n, const Window &w, Field f = Field::rationals());

/// Relation space living on the path of degrees from..to (to - from >= 1).
/// Each vector has one coordinate per pure tensor of generator basis
/// elements, first factor most significant.
struct RelationSpace {
  int from;
  int to;
  std::vector<std::vector<Scalar>> vectors;
};

/// Quotient of the free path algebra on adjacent-degree generators by the
/// two-sided ideal of the relations, computed degree by degree.
/// gens maps i to dim V_{i,i+1}; degrees not listed have no generators.
AlgebraPtr make_adjacent_presentation(const std::map<int, std::size_t> &gens,
                                      const std::vector<RelationSpace> &rels, const Window &w,
                                      Field f = Field::rationals());

/// Two generators x, y per step with y (x) x = q x (x) y.
AlgebraPtr make_skew(const Scalar &q, const Window &w);
/// One generator per step with x (x) x = 0.
AlgebraPtr make_nil(const Window &w, Field f = Field::rationals());

class InvalidRelationDegree : public Error {
public:
  using Error::Error;
};
class RelationOutsideTensorSpace : public Error {
public:
  using Error::Error;
};
class IndexOutsideWindow : public Error {
public:
  using Error::Error;
};

} // namespace zhom
