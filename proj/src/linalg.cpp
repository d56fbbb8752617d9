#include "zhom/linalg.hpp"

#include <algorithm>
#include <numeric>

namespace zhom {

// ---------------------------------------------------------------- SparseVector

const Scalar *SparseVector::find(std::uint32_t i) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                             [](const Entry &e, std::uint32_t k) { return e.first < k; });
  if (it != entries_.end() && it->first == i) return &it->second;
  return nullptr;
}

Scalar SparseVector::get(std::uint32_t i, const Field &f) const {
  const Scalar *s = find(i);
  return s ? *s : f.zero();
}

void SparseVector::set(std::uint32_t i, const Scalar &v) {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                             [](const Entry &e, std::uint32_t k) { return e.first < k; });
  if (it != entries_.end() && it->first == i) {
    if (v.is_zero())
      entries_.erase(it);
    else
      it->second = v;
  } else if (!v.is_zero()) {
    entries_.insert(it, Entry{i, v});
  }
}

void SparseVector::push_back(std::uint32_t i, Scalar v) {
  if (!v.is_zero()) entries_.emplace_back(i, std::move(v));
}

void SparseVector::axpy(const Scalar &c, const SparseVector &other) {
  if (c.is_zero() || other.entries_.empty()) return;
  std::vector<Entry> out;
  out.reserve(entries_.size() + other.entries_.size());
  auto a = entries_.begin();
  auto b = other.entries_.begin();
  while (a != entries_.end() || b != other.entries_.end()) {
    if (b == other.entries_.end() || (a != entries_.end() && a->first < b->first)) {
      out.push_back(std::move(*a));
      ++a;
    } else if (a == entries_.end() || b->first < a->first) {
      out.emplace_back(b->first, c * b->second);
      ++b;
    } else {
      Scalar s = a->second + c * b->second;
      if (!s.is_zero()) out.emplace_back(a->first, std::move(s));
      ++a;
      ++b;
    }
  }
  entries_ = std::move(out);
}

SparseVector SparseVector::scaled(const Scalar &c) const {
  SparseVector r;
  if (c.is_zero()) return r;
  r.entries_.reserve(entries_.size());
  for (const auto &[i, v] : entries_) r.entries_.emplace_back(i, v * c);
  return r;
}

SparseVector SparseVector::shifted(std::int64_t offset) const {
  SparseVector r = *this;
  for (auto &e : r.entries_) e.first = static_cast<std::uint32_t>(e.first + offset);
  return r;
}

SparseVector SparseVector::slice(std::uint32_t from, std::uint32_t len) const {
  SparseVector r;
  for (const auto &[i, v] : entries_)
    if (i >= from && i < from + len) r.entries_.emplace_back(i - from, v);
  return r;
}

bool SparseVector::operator==(const SparseVector &o) const {
  if (entries_.size() != o.entries_.size()) return false;
  for (std::size_t k = 0; k < entries_.size(); ++k)
    if (entries_[k].first != o.entries_[k].first || entries_[k].second != o.entries_[k].second) return false;
  return true;
}

// ---------------------------------------------------------------- SparseMatrix

SparseMatrix SparseMatrix::identity(Field f, std::size_t n) {
  SparseMatrix m(f, n, n);
  for (std::size_t i = 0; i < n; ++i) m.data_[i].push_back(static_cast<std::uint32_t>(i), f.one());
  return m;
}

SparseMatrix SparseMatrix::from_columns(Field f, std::size_t rows, const std::vector<SparseVector> &cols) {
  SparseMatrix m(f, rows, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (const auto &[r, v] : cols[c]) m.data_[r].push_back(static_cast<std::uint32_t>(c), v);
  return m;
}

SparseMatrix SparseMatrix::from_rows(Field f, std::size_t cols, std::vector<SparseVector> rows) {
  SparseMatrix m(f, rows.size(), cols);
  m.data_ = std::move(rows);
  return m;
}

SparseMatrix SparseMatrix::from_dense(Field f, const std::vector<std::vector<long long>> &values) {
  std::size_t cols = values.empty() ? 0 : values.front().size();
  SparseMatrix m(f, values.size(), cols);
  for (std::size_t r = 0; r < values.size(); ++r)
    for (std::size_t c = 0; c < cols; ++c) m.data_[r].push_back(static_cast<std::uint32_t>(c), f.from_int(values[r][c]));
  return m;
}

std::size_t SparseMatrix::nnz() const {
  std::size_t n = 0;
  for (const auto &r : data_) n += r.nnz();
  return n;
}

bool SparseMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const SparseVector &r) { return r.is_zero(); });
}

void SparseMatrix::add_to(std::size_t r, std::size_t c, const Scalar &v) {
  if (v.is_zero()) return;
  SparseVector unit;
  unit.push_back(static_cast<std::uint32_t>(c), v);
  data_[r].axpy(field_.one(), unit);
}

std::vector<SparseVector> SparseMatrix::columns() const {
  std::vector<SparseVector> cols(cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (const auto &[c, v] : data_[r]) cols[c].push_back(static_cast<std::uint32_t>(r), v);
  return cols;
}

SparseVector SparseMatrix::apply(const SparseVector &v) const {
  SparseVector out;
  for (std::size_t r = 0; r < rows_; ++r) {
    const auto &row = data_[r];
    if (row.is_zero()) continue;
    Scalar acc = field_.zero();
    auto a = row.begin();
    auto b = v.begin();
    bool any = false;
    while (a != row.end() && b != v.end()) {
      if (a->first < b->first)
        ++a;
      else if (b->first < a->first)
        ++b;
      else {
        acc += a->second * b->second;
        any = true;
        ++a;
        ++b;
      }
    }
    if (any) out.push_back(static_cast<std::uint32_t>(r), std::move(acc));
  }
  return out;
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix &o) const {
  if (cols_ != o.rows_) throw Error("matrix product dimension mismatch");
  SparseMatrix out(field_, rows_, o.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    SparseVector acc;
    for (const auto &[k, v] : data_[r]) acc.axpy(v, o.data_[k]);
    out.data_[r] = std::move(acc);
  }
  return out;
}

SparseMatrix SparseMatrix::operator+(const SparseMatrix &o) const {
  SparseMatrix out = *this;
  out.axpy(field_.one(), o);
  return out;
}

SparseMatrix SparseMatrix::scaled(const Scalar &c) const {
  SparseMatrix out(field_, rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r) out.data_[r] = data_[r].scaled(c);
  return out;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t(field_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (const auto &[c, v] : data_[r]) t.data_[c].push_back(static_cast<std::uint32_t>(r), v);
  return t;
}

void SparseMatrix::axpy(const Scalar &c, const SparseMatrix &o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("matrix sum dimension mismatch");
  for (std::size_t r = 0; r < rows_; ++r) data_[r].axpy(c, o.data_[r]);
}

void SparseMatrix::place(std::size_t r0, std::size_t c0, const SparseMatrix &block) {
  for (std::size_t r = 0; r < block.rows_; ++r) {
    if (block.data_[r].is_zero()) continue;
    data_[r0 + r].axpy(field_.one(), block.data_[r].shifted(static_cast<std::int64_t>(c0)));
  }
}

bool SparseMatrix::operator==(const SparseMatrix &o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

// ---------------------------------------------------------------- Echelon

SparseVector Echelon::reduce(const SparseVector &v) const {
  SparseVector r = v;
  if (rows_.empty()) return r;
  // Coefficients are read off before subtracting: the basis rows vanish on
  // each other's pivot columns, so the reads do not interfere.
  std::vector<std::pair<int, Scalar>> hits;
  for (const auto &[c, val] : v)
    if (c < dim_ && row_of_col_[c] >= 0) hits.emplace_back(row_of_col_[c], val);
  for (const auto &[row, coeff] : hits) r.axpy(-coeff, rows_[static_cast<std::size_t>(row)]);
  return r;
}

bool Echelon::insert(const SparseVector &v) {
  SparseVector r = reduce(v);
  if (r.is_zero()) return false;
  Scalar lead_inv = r.entries().front().second.inv();
  r = r.scaled(lead_inv);
  std::uint32_t p = r.leading();
  for (auto &row : rows_) {
    if (const Scalar *x = row.find(p)) {
      Scalar c = -*x;
      row.axpy(c, r);
    }
  }
  row_of_col_[p] = static_cast<int>(rows_.size());
  rows_.push_back(std::move(r));
  row_pivot_.push_back(p);
  return true;
}

std::vector<std::size_t> Echelon::sorted_order() const {
  std::vector<std::size_t> order(rows_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return row_pivot_[a] < row_pivot_[b]; });
  return order;
}

SparseVector Echelon::coordinates(const SparseVector &v) const {
  auto order = sorted_order();
  std::vector<std::size_t> rank_of(rows_.size());
  for (std::size_t k = 0; k < order.size(); ++k) rank_of[order[k]] = k;
  std::vector<std::pair<std::uint32_t, Scalar>> coords;
  for (const auto &[c, val] : v)
    if (c < dim_ && row_of_col_[c] >= 0)
      coords.emplace_back(static_cast<std::uint32_t>(rank_of[static_cast<std::size_t>(row_of_col_[c])]), val);
  std::sort(coords.begin(), coords.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
  SparseVector out;
  for (auto &[k, val] : coords) out.push_back(k, val);
  return out;
}

std::vector<SparseVector> Echelon::basis() const {
  std::vector<SparseVector> out;
  out.reserve(rows_.size());
  for (std::size_t k : sorted_order()) out.push_back(rows_[k]);
  return out;
}

std::vector<std::uint32_t> Echelon::pivots() const {
  std::vector<std::uint32_t> p = row_pivot_;
  std::sort(p.begin(), p.end());
  return p;
}

std::vector<std::uint32_t> Echelon::non_pivots() const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t c = 0; c < dim_; ++c)
    if (row_of_col_[c] < 0) out.push_back(c);
  return out;
}

// ---------------------------------------------------------------- algorithms

namespace {

Echelon row_space(const SparseMatrix &m) {
  Echelon e(m.field(), m.cols());
  std::vector<std::size_t> order(m.rows());
  std::iota(order.begin(), order.end(), 0);
  // Short rows first keeps fill-in low; the RREF does not depend on the order.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return m.row(a).nnz() < m.row(b).nnz(); });
  for (std::size_t r : order) e.insert(m.row(r));
  return e;
}

} // namespace

RrefResult rref(const SparseMatrix &m) {
  Echelon e = row_space(m);
  auto basis = e.basis();
  SparseMatrix reduced(m.field(), m.rows(), m.cols());
  for (std::size_t k = 0; k < basis.size(); ++k) reduced.row_mut(k) = basis[k];
  auto piv = e.pivots();
  return {std::move(reduced), std::vector<std::size_t>(piv.begin(), piv.end()), e.rank()};
}

std::size_t rank(const SparseMatrix &m) {
  if (m.rows() <= m.cols()) return row_space(m).rank();
  return row_space(m.transpose()).rank();
}

std::vector<SparseVector> kernel_basis(const SparseMatrix &m) {
  Echelon e = row_space(m);
  auto basis = e.basis();
  auto piv = e.pivots();
  std::vector<SparseVector> out;
  const Field &f = m.field();
  for (std::uint32_t free : e.non_pivots()) {
    std::vector<std::pair<std::uint32_t, Scalar>> entries;
    entries.emplace_back(free, f.one());
    for (std::size_t k = 0; k < basis.size(); ++k)
      if (const Scalar *x = basis[k].find(free)) entries.emplace_back(piv[k], -*x);
    std::sort(entries.begin(), entries.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
    SparseVector v;
    for (auto &[i, x] : entries) v.push_back(i, x);
    out.push_back(std::move(v));
  }
  return out;
}

std::optional<SparseVector> solve(const SparseMatrix &m, const SparseVector &b) {
  const Field &f = m.field();
  const auto n = static_cast<std::uint32_t>(m.cols());
  std::vector<SparseVector> rows(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) rows[r] = m.row(r);
  for (const auto &[r, v] : b) rows[r].push_back(n, v);
  SparseMatrix aug = SparseMatrix::from_rows(f, m.cols() + 1, std::move(rows));
  Echelon e = row_space(aug);
  SparseVector x;
  for (const auto &row : e.basis()) {
    std::uint32_t p = row.leading();
    if (p == n) return std::nullopt;
    if (const Scalar *v = row.find(n)) x.push_back(p, *v);
  }
  return x;
}

std::optional<SparseMatrix> inverse(const SparseMatrix &m) {
  if (m.rows() != m.cols()) return std::nullopt;
  const std::size_t n = m.rows();
  std::vector<SparseVector> rows(n);
  for (std::size_t r = 0; r < n; ++r) {
    rows[r] = m.row(r);
    rows[r].push_back(static_cast<std::uint32_t>(n + r), m.field().one());
  }
  Echelon e(m.field(), 2 * n);
  for (auto &r : rows) e.insert(r);
  auto basis = e.basis();
  if (basis.size() != n) return std::nullopt;
  SparseMatrix inv(m.field(), n, n);
  for (std::size_t k = 0; k < n; ++k) {
    if (basis[k].leading() != k) return std::nullopt;
    inv.row_mut(k) = basis[k].slice(static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(n));
  }
  return inv;
}

Echelon column_space(const SparseMatrix &m) {
  Echelon e(m.field(), m.rows());
  for (const auto &c : m.columns()) e.insert(c);
  return e;
}

// ---------------------------------------------------------------- Subquotient

Subquotient::Subquotient(const Echelon &cycles, Echelon boundaries)
    : boundaries_(std::move(boundaries)), classes_(cycles.field(), cycles.dim()) {
  for (const auto &z : cycles.basis()) classes_.insert(boundaries_.reduce(z));
}

SparseVector Subquotient::class_of(const SparseVector &z) const {
  return classes_.coordinates(boundaries_.reduce(z));
}

SparseMatrix Subquotient::induced(const SparseMatrix &chain_map, const Subquotient &target) const {
  auto reps = representatives();
  std::vector<SparseVector> cols;
  cols.reserve(reps.size());
  for (const auto &z : reps) cols.push_back(target.class_of(chain_map.apply(z)));
  return SparseMatrix::from_columns(chain_map.field(), target.dim(), cols);
}

} // namespace zhom
