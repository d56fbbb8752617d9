#include "zhom/module.hpp"

#include <algorithm>
#include <mutex>
#include <random>

namespace zhom {

// ---------------------------------------------------------------- storage

struct GradedModule::State {
  std::vector<std::vector<SparseMatrix>> gens; // by pair index, per generator position
  Provider provider;
  std::mutex mu;
  std::vector<std::vector<std::unique_ptr<SparseMatrix>>> full; // by pair index, per basis element
};

namespace {

bool touches_top_guard(const ZAlgebra &a, const std::vector<std::size_t> &dims) {
  for (int t = std::max(a.lo(), a.window().reliable_top() + 1); t <= a.hi(); ++t)
    if (dims[static_cast<std::size_t>(t - a.lo())] != 0) return true;
  return false;
}

bool touches_bottom_guard(const ZAlgebra &a, const std::vector<std::size_t> &dims) {
  for (int t = a.lo(); t < std::min(a.hi() + 1, a.lo() + a.window().guard); ++t)
    if (dims[static_cast<std::size_t>(t - a.lo())] != 0) return true;
  return false;
}

/// Accumulates (index, value) pairs in any order into a sparse vector.
class RowBuilder {
public:
  void add(std::uint32_t i, const Scalar &v) {
    if (!v.is_zero()) items_.emplace_back(i, v);
  }
  SparseVector build() {
    std::stable_sort(items_.begin(), items_.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
    SparseVector out;
    for (std::size_t k = 0; k < items_.size();) {
      std::uint32_t i = items_[k].first;
      Scalar s = items_[k].second;
      for (++k; k < items_.size() && items_[k].first == i; ++k) s += items_[k].second;
      if (!s.is_zero()) out.push_back(i, s);
    }
    items_.clear();
    return out;
  }

private:
  std::vector<std::pair<std::uint32_t, Scalar>> items_;
};

std::vector<std::size_t> window_dims(const ZAlgebra &a, const std::function<std::size_t(int)> &f) {
  std::vector<std::size_t> d(static_cast<std::size_t>(a.window().width()));
  for (int t = a.lo(); t <= a.hi(); ++t) d[static_cast<std::size_t>(t - a.lo())] = f(t);
  return d;
}

} // namespace

std::optional<std::size_t> generator_position(const ZAlgebra &a, int j, int k, std::size_t s) {
  const auto &g = a.generators(j, k);
  auto it = std::lower_bound(g.begin(), g.end(), static_cast<std::uint32_t>(s));
  if (it == g.end() || *it != s) return std::nullopt;
  return static_cast<std::size_t>(it - g.begin());
}

GradedModule::GradedModule(AlgebraPtr a, Side side, std::vector<std::size_t> dims)
    : alg_(std::move(a)), side_(side), dims_(std::move(dims)), st_(std::make_shared<State>()) {
  const auto w = static_cast<std::size_t>(alg_->window().width());
  if (dims_.size() != w) throw Error("module dimension vector does not match the window");
  flags.reliable_lo = alg_->lo();
  flags.reliable_hi = alg_->hi();
  st_->gens.resize(w * w);
  st_->full.resize(w * w);
  for (int j = lo(); j <= hi(); ++j)
    for (int k = j + 1; k <= hi(); ++k) {
      const auto n = alg_->generators(j, k).size();
      if (n == 0) continue;
      st_->gens[alg_->pair_index(j, k)].assign(n, zero_action(j, k));
    }
}

GradedModule GradedModule::from_provider(AlgebraPtr a, Side side, std::vector<std::size_t> dims, Provider p) {
  GradedModule m;
  m.alg_ = std::move(a);
  m.side_ = side;
  m.dims_ = std::move(dims);
  const auto w = static_cast<std::size_t>(m.alg_->window().width());
  if (m.dims_.size() != w) throw Error("module dimension vector does not match the window");
  m.flags.reliable_lo = m.alg_->lo();
  m.flags.reliable_hi = m.alg_->hi();
  m.st_ = std::make_shared<State>();
  m.st_->provider = std::move(p);
  m.st_->full.resize(w * w);
  return m;
}

std::size_t GradedModule::dim(int t) const {
  if (t < lo() || t > hi()) return 0;
  return dims_[static_cast<std::size_t>(t - lo())];
}

std::size_t GradedModule::total_dim() const {
  std::size_t s = 0;
  for (auto d : dims_) s += d;
  return s;
}

SparseMatrix GradedModule::zero_action(int j, int k) const {
  return side_ == Side::Right ? SparseMatrix(field(), dim(k), dim(j)) : SparseMatrix(field(), dim(j), dim(k));
}

const SparseMatrix &GradedModule::generator_action(int j, int k, std::size_t pos) const {
  if (st_->provider) return action(j, k, alg_->generators(j, k).at(pos));
  return st_->gens[alg_->pair_index(j, k)].at(pos);
}

void GradedModule::ensure_unique() {
  if (st_.use_count() > 1) {
    auto n = std::make_shared<State>();
    n->gens = st_->gens;
    n->provider = st_->provider;
    st_ = std::move(n);
  }
  st_->full.clear();
  const auto w = static_cast<std::size_t>(window().width());
  st_->full.resize(w * w);
}

void GradedModule::set_generator_action(int j, int k, std::size_t pos, SparseMatrix m) {
  if (st_->provider) throw Error("cannot override the action of a provider-backed module");
  SparseMatrix shape = zero_action(j, k);
  if (m.rows() != shape.rows() || m.cols() != shape.cols()) throw Error("generator action has the wrong shape");
  ensure_unique();
  st_->gens[alg_->pair_index(j, k)].at(pos) = std::move(m);
}

const SparseMatrix &GradedModule::action(int j, int k, std::size_t s) const {
  if (j > k || j < lo() || k > hi()) throw IndexOutsideWindow("module action outside the window");
  const std::size_t p = alg_->pair_index(j, k);
  {
    std::lock_guard<std::mutex> lock(st_->mu);
    auto &slot = st_->full[p];
    if (slot.empty()) slot.resize(alg_->dim(j, k));
    if (slot.at(s)) return *slot[s];
  }
  SparseMatrix out = zero_action(j, k);
  if (j == k) {
    out = SparseMatrix::identity(field(), dim(j));
  } else if (st_->provider) {
    out = st_->provider(j, k, s);
  } else {
    const Recipe &r = alg_->recipe(j, k, s);
    const auto &gl = alg_->generators(j, k);
    for (const auto &[g, c] : r.gens) {
      auto pos = static_cast<std::size_t>(std::lower_bound(gl.begin(), gl.end(), g) - gl.begin());
      out.axpy(c, st_->gens[p][pos]);
    }
    for (const auto &pr : r.products) {
      const auto &gm = alg_->generators(j, pr.mid);
      auto pos = static_cast<std::size_t>(std::lower_bound(gm.begin(), gm.end(), pr.gen) - gm.begin());
      const SparseMatrix &g = st_->gens[alg_->pair_index(j, pr.mid)][pos];
      const SparseMatrix &t = action(pr.mid, k, pr.right);
      out.axpy(pr.coeff, side_ == Side::Right ? t * g : g * t);
    }
  }
  std::lock_guard<std::mutex> lock(st_->mu);
  auto &slot = st_->full[p];
  if (!slot[s]) slot[s] = std::make_unique<SparseMatrix>(std::move(out));
  return *slot[s];
}

SparseMatrix GradedModule::action(int j, int k, const SparseVector &a) const {
  SparseMatrix out = zero_action(j, k);
  for (const auto &[s, c] : a) out.axpy(c, action(j, k, s));
  return out;
}

ValidationReport validate_module(const GradedModule &m) {
  ValidationReport rep;
  const ZAlgebra &a = *m.algebra();
  for (int j = m.lo(); j <= m.hi(); ++j)
    for (int mid = j + 1; mid <= m.hi(); ++mid) {
      const auto &gens = a.generators(j, mid);
      for (std::size_t pos = 0; pos < gens.size(); ++pos) {
        const SparseMatrix &g = m.generator_action(j, mid, pos);
        SparseMatrix shape = m.zero_action(j, mid);
        if (g.rows() != shape.rows() || g.cols() != shape.cols()) {
          rep.violations.push_back({"module-shape", {j, mid}, {pos}, "generator action has the wrong shape"});
          continue;
        }
        for (int k = mid + 1; k <= m.hi(); ++k)
          for (std::size_t t = 0; t < a.dim(mid, k); ++t) {
            SparseMatrix lhs = m.action(j, k, a.mult(j, mid, k).at(gens[pos], t));
            const SparseMatrix &tm = m.action(mid, k, t);
            SparseMatrix rhs = m.side() == Side::Right ? tm * g : g * tm;
            if (!(lhs == rhs))
              rep.violations.push_back({"module-associativity", {j, mid, k}, {gens[pos], t}, "action is not associative"});
          }
      }
    }
  return rep;
}

// ---------------------------------------------------------------- morphisms

bool ModuleMorphism::commutes_with_action() const {
  const ZAlgebra &a = *source.algebra();
  for (int j = source.lo(); j <= source.hi(); ++j)
    for (int k = j + 1; k <= source.hi(); ++k)
      for (std::size_t pos = 0; pos < a.generators(j, k).size(); ++pos) {
        const SparseMatrix &ms = source.generator_action(j, k, pos);
        const SparseMatrix &ns = target.generator_action(j, k, pos);
        bool ok = source.side() == Side::Right ? at(k) * ms == ns * at(j) : at(j) * ms == ns * at(k);
        if (!ok) return false;
      }
  return true;
}

ModuleMorphism ModuleMorphism::zero(const GradedModule &s, const GradedModule &t) {
  ModuleMorphism f{s, t, {}};
  for (int d = s.lo(); d <= s.hi(); ++d) f.mats.emplace_back(s.field(), t.dim(d), s.dim(d));
  return f;
}

ModuleMorphism ModuleMorphism::identity(const GradedModule &m) {
  ModuleMorphism f{m, m, {}};
  for (int d = m.lo(); d <= m.hi(); ++d) f.mats.push_back(SparseMatrix::identity(m.field(), m.dim(d)));
  return f;
}

ValidationReport validate_bimodule(const Bimodule &b) {
  ValidationReport rep;
  const ZAlgebra &a = *b.algebra;
  for (const auto &r : b.rows)
    for (auto &v : validate_module(r).violations) rep.violations.push_back(std::move(v));
  for (const auto &c : b.cols)
    for (auto &v : validate_module(c).violations) rep.violations.push_back(std::move(v));
  for (int i = a.lo(); i <= a.hi(); ++i)
    for (int t = a.lo(); t <= a.hi(); ++t)
      if (b.row(i).dim(t) != b.col(t).dim(i))
        rep.violations.push_back({"bimodule-shape", {i, t}, {}, "row and column dimensions disagree"});
  if (!rep.ok()) return rep;
  // (a m) b = a (m b) for generators a in A_lj, b in A_ik acting on M_ji.
  for (int l = a.lo(); l <= a.hi(); ++l)
    for (int j = l + 1; j <= a.hi(); ++j)
      for (std::size_t pa = 0; pa < a.generators(l, j).size(); ++pa)
        for (int i = a.lo(); i <= a.hi(); ++i)
          for (int k = i + 1; k <= a.hi(); ++k) {
            const GradedModule &rl = b.row(l), &rj = b.row(j);
            if (!(rl.reliable(i) && rl.reliable(k) && rj.reliable(i) && rj.reliable(k))) continue;
            for (std::size_t pb = 0; pb < a.generators(i, k).size(); ++pb) {
              SparseMatrix lhs = rl.generator_action(i, k, pb) * b.col(i).generator_action(l, j, pa);
              SparseMatrix rhs = b.col(k).generator_action(l, j, pa) * rj.generator_action(i, k, pb);
              if (!(lhs == rhs))
                rep.violations.push_back({"bimodule-commutation", {l, j, i, k}, {pa, pb}, "left and right actions do not commute"});
            }
          }
  return rep;
}

// ---------------------------------------------------------------- builders

GradedModule free_row(const AlgebraPtr &a, int i) {
  if (!a->window().contains(i)) throw IndexOutsideWindow("free_row: degree " + std::to_string(i) + " outside the window");
  return algebra_bimodule(a).row(i);
}

GradedModule free_col(const AlgebraPtr &a, int j) {
  if (!a->window().contains(j)) throw IndexOutsideWindow("free_col: degree " + std::to_string(j) + " outside the window");
  return algebra_bimodule(a).col(j);
}

Bimodule band_bimodule(const AlgebraPtr &a, int from, int to) {
  if (from < 0) throw Error("band_bimodule requires from >= 0");
  auto in_band = [from, to](int i, int t) { return t - i >= from && (to < 0 || t - i < to); };
  Bimodule b{a, {}, {}};
  for (int i = a->lo(); i <= a->hi(); ++i) {
    auto dims = window_dims(*a, [&](int t) { return in_band(i, t) ? a->dim(i, t) : 0; });
    auto prov = [a, i, in_band](int j, int k, std::size_t s) {
      std::size_t rows = in_band(i, k) ? a->dim(i, k) : 0, cols = in_band(i, j) ? a->dim(i, j) : 0;
      if (rows == 0 || cols == 0) return SparseMatrix(a->field(), rows, cols);
      return a->right_mult(i, j, k, s);
    };
    GradedModule m = GradedModule::from_provider(a, Side::Right, dims, prov);
    m.flags.open_above = to < 0 ? touches_top_guard(*a, dims) : i + to - 1 > a->hi();
    b.rows.push_back(std::move(m));
  }
  for (int t = a->lo(); t <= a->hi(); ++t) {
    auto dims = window_dims(*a, [&](int i) { return in_band(i, t) ? a->dim(i, t) : 0; });
    auto prov = [a, t, in_band](int j, int k, std::size_t s) {
      std::size_t rows = in_band(j, t) ? a->dim(j, t) : 0, cols = in_band(k, t) ? a->dim(k, t) : 0;
      if (rows == 0 || cols == 0) return SparseMatrix(a->field(), rows, cols);
      return a->left_mult(j, k, t, s);
    };
    GradedModule m = GradedModule::from_provider(a, Side::Left, dims, prov);
    m.flags.open_below = to < 0 ? touches_bottom_guard(*a, dims) : t - to + 1 < a->lo();
    b.cols.push_back(std::move(m));
  }
  return b;
}

GradedModule dual(const GradedModule &m) {
  Side s = m.side() == Side::Right ? Side::Left : Side::Right;
  GradedModule d = GradedModule::from_provider(m.algebra(), s, m.dims(),
                                               [m](int j, int k, std::size_t x) { return m.action(j, k, x).transpose(); });
  d.flags = m.flags;
  return d;
}

Bimodule dual(const Bimodule &b) {
  Bimodule d{b.algebra, {}, {}};
  for (const auto &c : b.cols) d.rows.push_back(dual(c));
  for (const auto &r : b.rows) d.cols.push_back(dual(r));
  return d;
}

GradedModule flip(const GradedModule &m) {
  AlgebraPtr op = m.algebra()->opposite();
  auto dims = window_dims(*op, [&](int t) { return m.dim(-t); });
  Side s = m.side() == Side::Right ? Side::Left : Side::Right;
  GradedModule f = GradedModule::from_provider(op, s, dims, [m](int j, int k, std::size_t x) { return m.action(-k, -j, x); });
  f.flags.open_below = m.flags.open_above;
  f.flags.open_above = m.flags.open_below;
  f.flags.reliable_lo = -m.flags.reliable_hi;
  f.flags.reliable_hi = -m.flags.reliable_lo;
  return f;
}

GradedModule restrict_degrees(const GradedModule &m, int a, int b) {
  auto dims = window_dims(*m.algebra(), [&](int t) { return t >= a && t <= b ? m.dim(t) : 0; });
  GradedModule r = GradedModule::from_provider(m.algebra(), m.side(), dims, [m, a, b](int j, int k, std::size_t x) {
    if (j >= a && k <= b) return m.action(j, k, x);
    SparseMatrix z = m.zero_action(j, k);
    const bool jin = j >= a && j <= b, kin = k >= a && k <= b;
    bool right = m.side() == Side::Right;
    std::size_t rows = right ? (kin ? z.rows() : 0) : (jin ? z.rows() : 0);
    std::size_t cols = right ? (jin ? z.cols() : 0) : (kin ? z.cols() : 0);
    return SparseMatrix(m.field(), rows, cols);
  });
  r.flags.open_below = m.flags.open_below && a <= m.lo();
  r.flags.open_above = m.flags.open_above && b >= m.hi();
  r.flags.reliable_lo = std::max(m.flags.reliable_lo, a);
  r.flags.reliable_hi = std::min(m.flags.reliable_hi, b);
  return r;
}

GradedModule direct_sum(const GradedModule &m, const GradedModule &n) {
  if (!same_algebra(m.algebra(), n.algebra()) || m.side() != n.side()) throw AlgebraMismatch("direct_sum: incompatible modules");
  auto dims = window_dims(*m.algebra(), [&](int t) { return m.dim(t) + n.dim(t); });
  GradedModule s = GradedModule::from_provider(m.algebra(), m.side(), dims, [m, n](int j, int k, std::size_t x) {
    const SparseMatrix &a = m.action(j, k, x), &b = n.action(j, k, x);
    SparseMatrix out(m.field(), a.rows() + b.rows(), a.cols() + b.cols());
    out.place(0, 0, a);
    out.place(a.rows(), a.cols(), b);
    return out;
  });
  s.flags.open_below = m.flags.open_below || n.flags.open_below;
  s.flags.open_above = m.flags.open_above || n.flags.open_above;
  s.flags.reliable_lo = std::max(m.flags.reliable_lo, n.flags.reliable_lo);
  s.flags.reliable_hi = std::min(m.flags.reliable_hi, n.flags.reliable_hi);
  return s;
}

namespace {

/// (source degree, target degree) of the action of A_jk on a module of the given side.
std::pair<int, int> action_direction(Side side, int j, int k) { return side == Side::Right ? std::pair{j, k} : std::pair{k, j}; }

} // namespace

std::pair<GradedModule, ModuleMorphism> submodule(const GradedModule &m, const std::vector<Echelon> &spaces) {
  const ZAlgebra &a = *m.algebra();
  std::vector<std::vector<SparseVector>> bases;
  std::vector<std::size_t> dims;
  for (const auto &e : spaces) {
    bases.push_back(e.basis());
    dims.push_back(e.rank());
  }
  auto idx = [&](int t) { return static_cast<std::size_t>(t - a.lo()); };
  GradedModule s(m.algebra(), m.side(), dims);
  s.flags = m.flags;
  for (int j = a.lo(); j <= a.hi(); ++j)
    for (int k = j + 1; k <= a.hi(); ++k)
      for (std::size_t pos = 0; pos < a.generators(j, k).size(); ++pos) {
        auto [src, dst] = action_direction(m.side(), j, k);
        const SparseMatrix &g = m.generator_action(j, k, pos);
        std::vector<SparseVector> cols;
        for (const auto &v : bases[idx(src)]) {
          SparseVector w = g.apply(v);
          if (!spaces[idx(dst)].contains(w))
            throw AssertionFailure("submodule is not closed under the action at (" + std::to_string(j) + "," +
                                   std::to_string(k) + ")");
          cols.push_back(spaces[idx(dst)].coordinates(w));
        }
        s.set_generator_action(j, k, pos, SparseMatrix::from_columns(m.field(), dims[idx(dst)], cols));
      }
  ModuleMorphism inc{s, m, {}};
  for (int t = a.lo(); t <= a.hi(); ++t) inc.mats.push_back(SparseMatrix::from_columns(m.field(), m.dim(t), bases[idx(t)]));
  return {s, inc};
}

std::pair<GradedModule, ModuleMorphism> quotient(const GradedModule &m, const std::vector<Echelon> &spaces) {
  const ZAlgebra &a = *m.algebra();
  auto idx = [&](int t) { return static_cast<std::size_t>(t - a.lo()); };
  std::vector<std::vector<std::uint32_t>> keep;
  std::vector<std::vector<int>> pos_of;
  std::vector<std::size_t> dims;
  for (int t = a.lo(); t <= a.hi(); ++t) {
    keep.push_back(spaces[idx(t)].non_pivots());
    std::vector<int> p(m.dim(t), -1);
    for (std::size_t q = 0; q < keep.back().size(); ++q) p[keep.back()[q]] = static_cast<int>(q);
    pos_of.push_back(std::move(p));
    dims.push_back(keep.back().size());
  }
  auto project = [&](int t, const SparseVector &v) {
    SparseVector r = spaces[idx(t)].reduce(v), out;
    for (const auto &[c, x] : r) out.push_back(static_cast<std::uint32_t>(pos_of[idx(t)][c]), x);
    return out;
  };
  GradedModule q(m.algebra(), m.side(), dims);
  q.flags = m.flags;
  for (int j = a.lo(); j <= a.hi(); ++j)
    for (int k = j + 1; k <= a.hi(); ++k)
      for (std::size_t pos = 0; pos < a.generators(j, k).size(); ++pos) {
        auto [src, dst] = action_direction(m.side(), j, k);
        const SparseMatrix &g = m.generator_action(j, k, pos);
        for (const auto &v : spaces[idx(src)].basis())
          if (!spaces[idx(dst)].contains(g.apply(v)))
            throw AssertionFailure("quotient by a non-submodule at (" + std::to_string(j) + "," + std::to_string(k) + ")");
        std::vector<SparseVector> cols;
        for (std::uint32_t c : keep[idx(src)]) cols.push_back(project(dst, g.apply(SparseVector::unit(m.field(), c))));
        q.set_generator_action(j, k, pos, SparseMatrix::from_columns(m.field(), dims[idx(dst)], cols));
      }
  ModuleMorphism proj{m, q, {}};
  for (int t = a.lo(); t <= a.hi(); ++t) {
    std::vector<SparseVector> cols;
    for (std::uint32_t c = 0; c < m.dim(t); ++c) cols.push_back(project(t, SparseVector::unit(m.field(), c)));
    proj.mats.push_back(SparseMatrix::from_columns(m.field(), dims[idx(t)], cols));
  }
  return {q, proj};
}

GradedModule kernel(const ModuleMorphism &f) {
  std::vector<Echelon> spaces;
  for (int t = f.source.lo(); t <= f.source.hi(); ++t) {
    Echelon e(f.source.field(), f.source.dim(t));
    for (const auto &v : kernel_basis(f.at(t))) e.insert(v);
    spaces.push_back(std::move(e));
  }
  return submodule(f.source, spaces).first;
}

GradedModule image(const ModuleMorphism &f) {
  std::vector<Echelon> spaces;
  for (int t = f.source.lo(); t <= f.source.hi(); ++t) spaces.push_back(column_space(f.at(t)));
  return submodule(f.target, spaces).first;
}

GradedModule cokernel(const ModuleMorphism &f) {
  std::vector<Echelon> spaces;
  for (int t = f.source.lo(); t <= f.source.hi(); ++t) spaces.push_back(column_space(f.at(t)));
  return quotient(f.target, spaces).first;
}

// ---------------------------------------------------------------- tensor

namespace {

void check_tensor_inputs(const GradedModule &m, const GradedModule &l) {
  if (!same_algebra(m.algebra(), l.algebra())) throw AlgebraMismatch("tensor: modules over different algebras");
  if (m.side() != Side::Right || l.side() != Side::Left) throw Error("tensor: expects a right and a left module");
}

/// Relations m s ⊗ x - m ⊗ s x of M ⊗ L, in coordinates offset[t] + a * dim L_t + b.
Echelon tensor_relations(const GradedModule &m, const GradedModule &l, const std::vector<std::size_t> &offset,
                         std::size_t total) {
  const ZAlgebra &a = *m.algebra();
  const Field &f = m.field();
  auto off = [&](int t) { return offset[static_cast<std::size_t>(t - a.lo())]; };
  Echelon rel(f, total);
  RowBuilder rb;
  for (int j = a.lo(); j <= a.hi(); ++j)
    for (int k = j + 1; k <= a.hi(); ++k) {
      if (m.dim(j) == 0 || l.dim(k) == 0) continue;
      for (std::size_t pos = 0; pos < a.generators(j, k).size(); ++pos) {
        const SparseMatrix &ms = m.generator_action(j, k, pos); // M_j -> M_k
        const SparseMatrix &ls = l.generator_action(j, k, pos); // L_k -> L_j
        auto mcols = ms.columns();
        auto lcols = ls.columns();
        for (std::size_t u = 0; u < m.dim(j); ++u)
          for (std::size_t x = 0; x < l.dim(k); ++x) {
            for (const auto &[v, c] : mcols[u]) rb.add(static_cast<std::uint32_t>(off(k) + v * l.dim(k) + x), c);
            for (const auto &[y, c] : lcols[x]) rb.add(static_cast<std::uint32_t>(off(j) + u * l.dim(j) + y), -c);
            rel.insert(rb.build());
          }
      }
    }
  return rel;
}

} // namespace

std::size_t tensor_dim(const GradedModule &m, const GradedModule &l) {
  check_tensor_inputs(m, l);
  std::vector<std::size_t> offset;
  std::size_t total = 0;
  for (int t = m.lo(); t <= m.hi(); ++t) {
    offset.push_back(total);
    total += m.dim(t) * l.dim(t);
  }
  return total - tensor_relations(m, l, offset, total).rank();
}

GradedModule tensor(const GradedModule &m, const Bimodule &n) {
  const ZAlgebra &a = *m.algebra();
  const Field &f = m.field();
  const auto w = static_cast<std::size_t>(a.window().width());
  // Per column t: ambient ⊕_s M_s ⊗ N_st, relations, kept coordinates.
  std::vector<std::vector<std::size_t>> offsets(w);
  std::vector<Echelon> rels;
  std::vector<std::vector<std::uint32_t>> keep(w);
  std::vector<std::vector<int>> pos_of(w);
  std::vector<std::size_t> dims(w);
  for (int t = a.lo(); t <= a.hi(); ++t) {
    const GradedModule &col = n.col(t);
    check_tensor_inputs(m, col);
    auto &off = offsets[static_cast<std::size_t>(t - a.lo())];
    std::size_t total = 0;
    for (int s = a.lo(); s <= a.hi(); ++s) {
      off.push_back(total);
      total += m.dim(s) * col.dim(s);
    }
    rels.push_back(tensor_relations(m, col, off, total));
    auto &kp = keep[static_cast<std::size_t>(t - a.lo())];
    kp = rels.back().non_pivots();
    auto &po = pos_of[static_cast<std::size_t>(t - a.lo())];
    po.assign(total, -1);
    for (std::size_t q = 0; q < kp.size(); ++q) po[kp[q]] = static_cast<int>(q);
    dims[static_cast<std::size_t>(t - a.lo())] = kp.size();
  }
  GradedModule out(m.algebra(), Side::Right, dims);
  for (int t = a.lo(); t <= a.hi(); ++t)
    for (int u = t + 1; u <= a.hi(); ++u)
      for (std::size_t pos = 0; pos < a.generators(t, u).size(); ++pos) {
        const auto ti = static_cast<std::size_t>(t - a.lo()), ui = static_cast<std::size_t>(u - a.lo());
        // m ⊗ y -> m ⊗ y b with y in N_st and b acting on row s of N.
        auto push = [&](const SparseVector &amb) {
          SparseVector img;
          RowBuilder rb;
          for (const auto &[c, x] : amb) {
            int s = a.lo();
            while (s < a.hi() && offsets[ti][static_cast<std::size_t>(s + 1 - a.lo())] <= c) ++s;
            const std::size_t local = c - offsets[ti][static_cast<std::size_t>(s - a.lo())];
            const std::size_t dt = n.dim(s, t), du = n.dim(s, u);
            const std::size_t mi = local / dt, yi = local % dt;
            const SparseMatrix &act = n.row(s).generator_action(t, u, pos);
            for (std::size_t r = 0; r < du; ++r)
              if (const Scalar *v = act.row(r).find(static_cast<std::uint32_t>(yi)))
                rb.add(static_cast<std::uint32_t>(offsets[ui][static_cast<std::size_t>(s - a.lo())] + mi * du + r), x * *v);
          }
          return rb.build();
        };
        for (const auto &r : rels[ti].basis())
          if (!rels[ui].contains(push(r))) throw AssertionFailure("tensor: right action does not preserve relations");
        std::vector<SparseVector> cols;
        for (std::uint32_t c : keep[ti]) {
          SparseVector red = rels[ui].reduce(push(SparseVector::unit(f, c))), q;
          for (const auto &[idx, x] : red) q.push_back(static_cast<std::uint32_t>(pos_of[ui][idx]), x);
          cols.push_back(std::move(q));
        }
        out.set_generator_action(t, u, pos, SparseMatrix::from_columns(f, dims[ui], cols));
      }
  out.flags.open_above = m.flags.open_above;
  for (const auto &r : n.rows) out.flags.open_above = out.flags.open_above || r.flags.open_above;
  return out;
}

// ---------------------------------------------------------------- Hom

namespace {

struct HomLayout {
  std::vector<std::size_t> offset; // per degree
  std::size_t total = 0;
};

HomLayout hom_layout(const GradedModule &m, const GradedModule &n) {
  HomLayout h;
  for (int t = m.lo(); t <= m.hi(); ++t) {
    h.offset.push_back(h.total);
    h.total += m.dim(t) * n.dim(t);
  }
  return h;
}

/// Kernel of the commuting-square constraints; vectors in the layout's coordinates.
std::vector<SparseVector> hom_vectors(const GradedModule &m, const GradedModule &n, const HomLayout &h) {
  if (!same_algebra(m.algebra(), n.algebra())) throw AlgebraMismatch("hom_space: modules over different algebras");
  if (m.side() != n.side()) throw Error("hom_space: modules on different sides");
  const ZAlgebra &a = *m.algebra();
  auto var = [&](int t, std::size_t r, std::size_t c) {
    return static_cast<std::uint32_t>(h.offset[static_cast<std::size_t>(t - a.lo())] + r * m.dim(t) + c);
  };
  std::vector<SparseVector> rows;
  RowBuilder rb;
  for (int j = a.lo(); j <= a.hi(); ++j)
    for (int k = j + 1; k <= a.hi(); ++k)
      for (std::size_t pos = 0; pos < a.generators(j, k).size(); ++pos) {
        auto [src, dst] = action_direction(m.side(), j, k);
        // X_dst A = B X_src with A: M_src -> M_dst, B: N_src -> N_dst.
        const SparseMatrix &A = m.generator_action(j, k, pos);
        const SparseMatrix &B = n.generator_action(j, k, pos);
        if (n.dim(dst) == 0 || m.dim(src) == 0) continue;
        auto acols = A.columns();
        for (std::size_t r = 0; r < n.dim(dst); ++r)
          for (std::size_t c = 0; c < m.dim(src); ++c) {
            for (const auto &[u, x] : acols[c]) rb.add(var(dst, r, u), x);
            for (const auto &[u, x] : B.row(r)) rb.add(var(src, u, c), -x);
            SparseVector row = rb.build();
            if (!row.is_zero()) rows.push_back(std::move(row));
          }
      }
  SparseMatrix sys = SparseMatrix::from_rows(m.field(), h.total, std::move(rows));
  return kernel_basis(sys);
}

ModuleMorphism morphism_from_vector(const GradedModule &m, const GradedModule &n, const HomLayout &h, const SparseVector &v) {
  ModuleMorphism f = ModuleMorphism::zero(m, n);
  for (const auto &[idx, x] : v) {
    auto it = std::upper_bound(h.offset.begin(), h.offset.end(), static_cast<std::size_t>(idx));
    // The last degree whose offset is <= idx; empty degrees never qualify.
    const auto t = static_cast<std::size_t>(it - h.offset.begin()) - 1;
    const std::size_t local = idx - h.offset[t];
    f.mats[t].set(local / m.dims()[t], local % m.dims()[t], x);
  }
  return f;
}

} // namespace

std::vector<ModuleMorphism> hom_space(const GradedModule &m, const GradedModule &n) {
  HomLayout h = hom_layout(m, n);
  std::vector<ModuleMorphism> out;
  for (const auto &v : hom_vectors(m, n, h)) out.push_back(morphism_from_vector(m, n, h, v));
  return out;
}

GradedModule internal_hom(const Bimodule &nb, const GradedModule &p) {
  const ZAlgebra &a = *nb.algebra;
  const Field &f = p.field();
  std::vector<HomLayout> layouts;
  std::vector<Echelon> spaces;
  std::vector<std::size_t> dims;
  for (int i = a.lo(); i <= a.hi(); ++i) {
    layouts.push_back(hom_layout(nb.row(i), p));
    Echelon e(f, layouts.back().total);
    for (const auto &v : hom_vectors(nb.row(i), p, layouts.back())) e.insert(v);
    dims.push_back(e.rank());
    spaces.push_back(std::move(e));
  }
  GradedModule out(nb.algebra, Side::Right, dims);
  for (int i = a.lo(); i <= a.hi(); ++i)
    for (int k = i + 1; k <= a.hi(); ++k)
      for (std::size_t pos = 0; pos < a.generators(i, k).size(); ++pos) {
        const auto ii = static_cast<std::size_t>(i - a.lo()), ki = static_cast<std::size_t>(k - a.lo());
        std::vector<SparseVector> cols;
        for (const auto &phi_vec : spaces[ii].basis()) {
          ModuleMorphism phi = morphism_from_vector(nb.row(i), p, layouts[ii], phi_vec);
          RowBuilder rb;
          for (int t = a.lo(); t <= a.hi(); ++t) {
            const std::size_t dk = nb.dim(k, t);
            if (dk == 0 || p.dim(t) == 0) continue;
            // φ_t ∘ (s ·): N_kt -> N_it -> P_t.
            SparseMatrix comp = phi.at(t) * nb.col(t).generator_action(i, k, pos);
            for (std::size_t r = 0; r < comp.rows(); ++r)
              for (const auto &[c, x] : comp.row(r))
                rb.add(static_cast<std::uint32_t>(layouts[ki].offset[static_cast<std::size_t>(t - a.lo())] + r * dk + c), x);
          }
          SparseVector v = rb.build();
          if (!spaces[ki].contains(v)) throw AssertionFailure("internal_hom: composite is not a module map");
          cols.push_back(spaces[ki].coordinates(v));
        }
        out.set_generator_action(i, k, pos, SparseMatrix::from_columns(f, dims[ki], cols));
      }
  return out;
}

// ---------------------------------------------------------------- torsion

TorsionResult torsion_submodule(const GradedModule &m) {
  if (m.side() != Side::Right) throw Error("torsion_submodule expects a right module");
  const ZAlgebra &a = *m.algebra();
  std::vector<Echelon> spaces;
  for (int t = a.lo(); t <= a.hi(); ++t) {
    Echelon e(m.field(), m.dim(t));
    if (t < a.hi() && m.dim(t) > 0) {
      std::vector<SparseVector> rows;
      for (std::size_t s = 0; s < a.dim(t, a.hi()); ++s) {
        const SparseMatrix &act = m.action(t, a.hi(), s);
        for (std::size_t r = 0; r < act.rows(); ++r)
          if (!act.row(r).is_zero()) rows.push_back(act.row(r));
      }
      for (const auto &v : kernel_basis(SparseMatrix::from_rows(m.field(), m.dim(t), std::move(rows)))) e.insert(v);
    }
    spaces.push_back(std::move(e));
  }
  TorsionResult res{submodule(m, spaces).first, false};
  res.module.flags.open_below = m.flags.open_below;
  res.module.flags.open_above = false;
  // Torsion reaching the guard zone may only have died because the window ended.
  for (int t = std::max(a.lo(), a.window().reliable_top() + 1); t <= a.hi(); ++t)
    if (res.module.dim(t) != 0) res.window_relative = true;
  return res;
}

// ---------------------------------------------------------------- isomorphism

IsoResult module_iso_test(const GradedModule &m, const GradedModule &n, std::uint64_t seed) {
  IsoResult res;
  if (!same_algebra(m.algebra(), n.algebra())) throw AlgebraMismatch("module_iso_test: different algebras");
  if (m.side() != n.side()) throw Error("module_iso_test: modules on different sides");
  for (int t = m.lo(); t <= m.hi(); ++t)
    if (m.dim(t) != n.dim(t)) {
      res.reason = "dimension mismatch at degree " + std::to_string(t);
      return res;
    }
  HomLayout h = hom_layout(m, n);
  auto basis = hom_vectors(m, n, h);
  const Field &f = m.field();
  auto invertible = [&](const SparseVector &v) -> std::optional<ModuleMorphism> {
    ModuleMorphism phi = morphism_from_vector(m, n, h, v);
    for (int t = m.lo(); t <= m.hi(); ++t)
      if (rank(phi.at(t)) != m.dim(t)) return std::nullopt;
    return phi;
  };
  if (h.total == 0) {
    res.iso = true;
    res.witness = ModuleMorphism::zero(m, n);
    return res;
  }
  if (basis.empty()) {
    res.reason = "no nonzero module maps";
    return res;
  }
  std::mt19937_64 rng(seed);
  auto combine = [&](const std::vector<Scalar> &coeffs) {
    SparseVector v;
    for (std::size_t b = 0; b < basis.size(); ++b)
      if (!coeffs[b].is_zero()) v.axpy(coeffs[b], basis[b]);
    return v;
  };
  // Over a small prime field enumerate the whole Hom space when it is small.
  if (!f.is_rational()) {
    const std::uint64_t p = f.characteristic();
    long double size = 1;
    for (std::size_t b = 0; b < basis.size(); ++b) size *= static_cast<long double>(p);
    if (size <= 65536) {
      std::vector<std::uint64_t> digits(basis.size(), 0);
      for (;;) {
        std::vector<Scalar> coeffs;
        for (auto d : digits) coeffs.push_back(f.from_int(static_cast<long long>(d)));
        if (auto phi = invertible(combine(coeffs))) {
          res.iso = true;
          res.witness = std::move(phi);
          return res;
        }
        std::size_t k = 0;
        while (k < digits.size() && ++digits[k] == p) digits[k++] = 0;
        if (k == digits.size()) break;
      }
      res.reason = "no invertible module map (exhaustive search)";
      return res;
    }
  }
  // A generic element is invertible whenever some element is; try several.
  std::uniform_int_distribution<long long> dist(-1000, 1000);
  for (int attempt = 0; attempt < 16; ++attempt) {
    std::vector<Scalar> coeffs;
    for (std::size_t b = 0; b < basis.size(); ++b) coeffs.push_back(f.from_int(dist(rng)));
    if (auto phi = invertible(combine(coeffs))) {
      res.iso = true;
      res.witness = std::move(phi);
      return res;
    }
  }
  res.reason = "no invertible module map found among random elements of the Hom space";
  return res;
}

} // namespace zhom
