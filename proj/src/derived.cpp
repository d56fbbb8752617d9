#include "zhom/derived.hpp"

#include "zhom/parallel.hpp"

#include <algorithm>
#include <sstream>

namespace zhom {

// ---------------------------------------------------------------- complexes

namespace {

/// Coefficient of target generator h in the image of source generator g.
SparseVector component(const FreeMap &f, std::size_t g, std::size_t h) {
  const int dg = f.source.degrees[g], dh = f.target.degrees[h];
  const auto len = f.source.algebra->dim(dh, dg);
  if (len == 0) return {};
  return f.images[g].slice(static_cast<std::uint32_t>(f.target.offset(h, dg)), static_cast<std::uint32_t>(len));
}

std::vector<std::size_t> block_offsets(const FreeModule &f, const GradedModule &n) {
  std::vector<std::size_t> off{0};
  for (int d : f.degrees) off.push_back(off.back() + n.dim(d));
  return off;
}

FreeModule step_module(const FreeResolution &r, int p) {
  if (p < 0) return FreeModule{r.algebra(), {}};
  if (p <= r.length()) return r.free[static_cast<std::size_t>(p)];
  if (r.kernel_vanished) return FreeModule{r.algebra(), {}};
  std::ostringstream os;
  os << "step " << p << " lies beyond the computed resolution (length " << r.length() << ")";
  throw ResolutionTruncated(os.str());
}

FreeMap step_map(const FreeResolution &r, int p) {
  if (p >= 1 && p <= r.length()) return r.differential(p);
  return FreeMap::make(step_module(r, p), step_module(r, p - 1), std::vector<SparseVector>(step_module(r, p).rank()));
}

/// Checks that the window determines the homology at position p of F_• against n.
void require_determined(const FreeResolution &r, const GradedModule &n, int p) {
  step_module(r, p + 1);
  if (n.flags.open_above && !r.certified(p + 1)) {
    std::ostringstream os;
    os << "step " << p + 1 << " is not certified against a target that extends above the window";
    throw ResolutionTruncated(os.str());
  }
  for (int s = std::max(0, p - 1); s <= p + 1; ++s)
    for (int d : step_module(r, s).degrees)
      if (!n.reliable(d)) {
        std::ostringstream os;
        os << "generator degree " << d << " of step " << s << " lies outside the reliable range of the target";
        throw ResolutionTruncated(os.str());
      }
}

GradedModule oriented(const FreeResolution &r, const GradedModule &n) {
  return r.flipped ? flip(n) : n;
}

} // namespace

SparseMatrix hom_pullback(const FreeMap &f, const GradedModule &n) {
  const auto rows = block_offsets(f.source, n), cols = block_offsets(f.target, n);
  SparseMatrix out(n.field(), rows.back(), cols.back());
  for (std::size_t g = 0; g < f.source.rank(); ++g)
    for (std::size_t h = 0; h < f.target.rank(); ++h) {
      const SparseVector y = component(f, g, h);
      if (y.is_zero()) continue;
      out.place(rows[g], cols[h], n.action(f.target.degrees[h], f.source.degrees[g], y));
    }
  return out;
}

SparseMatrix hom_pushforward(const FreeModule &f, const ModuleMorphism &u) {
  const auto rows = block_offsets(f, u.target), cols = block_offsets(f, u.source);
  SparseMatrix out(u.source.field(), rows.back(), cols.back());
  for (std::size_t g = 0; g < f.rank(); ++g) out.place(rows[g], cols[g], u.at(f.degrees[g]));
  return out;
}

SparseMatrix tensor_map(const FreeMap &f, const GradedModule &l) {
  const auto rows = block_offsets(f.target, l), cols = block_offsets(f.source, l);
  SparseMatrix out(l.field(), rows.back(), cols.back());
  for (std::size_t g = 0; g < f.source.rank(); ++g)
    for (std::size_t h = 0; h < f.target.rank(); ++h) {
      const SparseVector y = component(f, g, h);
      if (y.is_zero()) continue;
      out.place(rows[h], cols[g], l.action(f.target.degrees[h], f.source.degrees[g], y));
    }
  return out;
}

HomComplex hom_cochain(const FreeResolution &r, const GradedModule &n, int top) {
  HomComplex c;
  for (int p = 0; p <= top; ++p) c.dims.push_back(block_offsets(step_module(r, p), n).back());
  for (int p = 0; p < top; ++p) c.delta.push_back(hom_pullback(step_map(r, p + 1), n));
  return c;
}

namespace {

Cohomology cohomology_at(const HomComplex &c, int q, const Field &f) {
  const std::size_t dim = c.dims[static_cast<std::size_t>(q)];
  Echelon cycles(f, dim);
  for (const auto &z : kernel_basis(c.delta[static_cast<std::size_t>(q)])) cycles.insert(z);
  Echelon boundaries = q > 0 ? column_space(c.delta[static_cast<std::size_t>(q - 1)]) : Echelon(f, dim);
  return Cohomology{dim, Subquotient(cycles, std::move(boundaries))};
}

} // namespace

Cohomology ext_from_resolution(const FreeResolution &r, const GradedModule &target, int q) {
  if (q < 0) throw Error("negative cohomological degree");
  const GradedModule n = oriented(r, target);
  if (n.side() != Side::Right || !same_algebra(n.algebra(), r.algebra()))
    throw AlgebraMismatch("Ext target must be a module on the same side over the same algebra");
  require_determined(r, n, q);
  return cohomology_at(hom_cochain(r, n, q + 1), q, n.field());
}

std::size_t ext_dim(const FreeResolution &r, const GradedModule &n, int q) { return ext_from_resolution(r, n, q).dim(); }

std::size_t tor_dim(const FreeResolution &r, const GradedModule &other, int p) {
  if (p < 0) return 0;
  const GradedModule l = oriented(r, other);
  if (l.side() != Side::Left || !same_algebra(l.algebra(), r.algebra()))
    throw AlgebraMismatch("Tor needs a left module over the resolved algebra");
  require_determined(r, l, p);
  const std::size_t dim = block_offsets(step_module(r, p), l).back();
  const std::size_t in = p >= 1 ? rank(tensor_map(step_map(r, p), l)) : 0;
  const std::size_t out = rank(tensor_map(step_map(r, p + 1), l));
  return dim - in - out;
}

std::vector<std::size_t> tor(const FreeResolution &r, const Bimodule &n, int p) {
  if (r.flipped) throw AlgebraMismatch("bimodule Tor expects a resolution of a right module");
  std::vector<std::size_t> out;
  for (const auto &c : n.cols) out.push_back(tor_dim(r, c, p));
  return out;
}

TorBalanceReport tor_balance_check(const AlgebraPtr &a, int i, int j, int pmax) {
  TorBalanceReport rep;
  rep.i = i;
  rep.j = j;
  const Bimodule aug = augmentation(a);
  const auto right = minimal_free_resolution(aug.row(i), pmax + 1);
  const auto left = minimal_free_resolution(aug.col(j), pmax + 1);
  for (int p = 0; p <= pmax; ++p) {
    rep.from_right.push_back(tor_dim(right, aug.col(j), p));
    rep.from_left.push_back(tor_dim(left, aug.row(i), p));
  }
  return rep;
}

std::vector<TorBalanceReport> tor_balance_table(const AlgebraPtr &a, int lo, int hi, int pmax) {
  const Bimodule aug = augmentation(a);
  const auto n = static_cast<std::size_t>(std::max(0, hi - lo + 1));
  std::vector<FreeResolution> rights(n), lefts(n);
  parallel_for(2 * n, [&](std::size_t k) {
    const int d = lo + static_cast<int>(k % n);
    if (k < n)
      rights[k] = minimal_free_resolution(aug.row(d), pmax + 1);
    else
      lefts[k - n] = minimal_free_resolution(aug.col(d), pmax + 1);
  });
  std::vector<TorBalanceReport> out(n * n);
  parallel_for(n * n, [&](std::size_t k) {
    TorBalanceReport &rep = out[k];
    const std::size_t ri = k / n, cj = k % n;
    rep.i = lo + static_cast<int>(ri);
    rep.j = lo + static_cast<int>(cj);
    for (int p = 0; p <= pmax; ++p) {
      rep.from_right.push_back(tor_dim(rights[ri], aug.col(rep.j), p));
      rep.from_left.push_back(tor_dim(lefts[cj], aug.row(rep.i), p));
    }
  });
  return out;
}

bool GradedQuotientExt::twisting_holds() const {
  for (std::size_t k = 0; k < piece.size(); ++k)
    if (piece[k] && twisted[k] && *piece[k] != *twisted[k]) return false;
  return true;
}

GradedQuotientExt ext_graded_quotient(const AlgebraPtr &a, int n, const GradedModule &target, int q) {
  GradedQuotientExt out;
  out.n = n;
  out.q = q;
  const Bimodule quot = quotient_bimodule(a, n), piece = graded_piece(a, n), aug = augmentation(a);
  const auto width = static_cast<std::size_t>(a->window().width());
  out.quotient.resize(width);
  out.piece.resize(width);
  out.twisted.resize(width);
  auto attempt = [&](const GradedModule &m) -> std::optional<std::size_t> {
    try {
      return ext_dim(minimal_free_resolution(m, q + 1), target, q);
    } catch (const ResolutionTruncated &) {
      return std::nullopt;
    }
  };
  parallel_for(width, [&](std::size_t k) {
    const int j = a->lo() + static_cast<int>(k);
    out.quotient[k] = attempt(quot.row(j));
    out.piece[k] = attempt(piece.row(j));
    if (a->window().contains(j + n))
      if (auto e = attempt(aug.row(j + n))) out.twisted[k] = *e * a->dim(j, j + n);
  });
  return out;
}

// ---------------------------------------------------------------- local cohomology engine

bool LocalCohomologyTable::all_stabilized(int q) const {
  const auto &row = cells[static_cast<std::size_t>(q)];
  return std::all_of(row.begin(), row.end(), [](const auto &c) { return c.stabilized(); });
}

std::shared_ptr<LocalCohomologyEngine> LocalCohomologyEngine::create(AlgebraPtr a, LocalCohomologyOptions opts) {
  return std::shared_ptr<LocalCohomologyEngine>(new LocalCohomologyEngine(std::move(a), opts));
}

LocalCohomologyEngine::LocalCohomologyEngine(AlgebraPtr a, LocalCohomologyOptions opts) : alg_(std::move(a)), opts_(opts) {
  if (opts_.n_max <= 0) opts_.n_max = alg_->window().width();
}

namespace {

struct TruncationColumn {
  int first = 1;
  std::vector<FreeResolution> levels; // levels[n - first]
  int last() const { return first + static_cast<int>(levels.size()) - 1; }
};

} // namespace

void LocalCohomologyEngine::ensure_truncations() {
  std::call_once(truncations_once_, [this] {
    const int lo = alg_->lo();
    const auto width = static_cast<std::size_t>(alg_->window().width());
    std::vector<TruncationColumn> cols(width);
    std::vector<Bimodule> quot;
    const int top_n = std::min(opts_.n_max, alg_->hi() - lo);
    for (int n = 1; n <= top_n; ++n) quot.push_back(quotient_bimodule(alg_, n));
    parallel_for(width, [&](std::size_t k) {
      const int i = lo + static_cast<int>(k);
      // The generators of e_i(A_{>=n}) sit in degree i + n; past the window
      // the truncation would be indistinguishable from e_iA.
      const int limit = std::min(opts_.n_max, alg_->hi() - i);
      TruncationColumn &col = cols[k];
      for (int n = 1; n <= limit; ++n) {
        auto r = minimal_free_resolution(quot[static_cast<std::size_t>(n - 1)].row(i), opts_.q_max + 1);
        if (!r.certified(opts_.q_max + 1)) {
          if (col.levels.empty()) {
            col.first = n + 1;
            continue;
          }
          break;
        }
        col.levels.push_back(std::move(r));
      }
    });
    truncations_.resize(width);
    firsts_.resize(width);
    for (std::size_t k = 0; k < width; ++k) {
      firsts_[k] = cols[k].first;
      truncations_[k] = std::move(cols[k].levels);
    }
  });
}

int LocalCohomologyEngine::first_level(int i) {
  ensure_truncations();
  return firsts_[static_cast<std::size_t>(i - alg_->lo())];
}

int LocalCohomologyEngine::level_limit(int i) {
  ensure_truncations();
  const auto k = static_cast<std::size_t>(i - alg_->lo());
  return firsts_[k] + static_cast<int>(truncations_[k].size()) - 1;
}

const FreeResolution &LocalCohomologyEngine::truncation(int i, int n) {
  ensure_truncations();
  const auto k = static_cast<std::size_t>(i - alg_->lo());
  const int first = firsts_[k];
  if (n < first || n > level_limit(i)) throw ResolutionTruncated("truncation level not available in the window");
  return truncations_[k][static_cast<std::size_t>(n - first)];
}

const std::vector<FreeMap> &LocalCohomologyEngine::projection_lift(int i, int n) {
  {
    std::lock_guard lock(mutex_);
    if (auto it = projections_.find({i, n}); it != projections_.end()) return it->second;
  }
  const FreeResolution &src = truncation(i, n + 1), &dst = truncation(i, n);
  ModuleMorphism proj = ModuleMorphism::zero(src.module, dst.module);
  for (int t = i; t < i + n && t <= alg_->hi(); ++t)
    proj.mats[static_cast<std::size_t>(t - alg_->lo())] = SparseMatrix::identity(alg_->field(), alg_->dim(i, t));
  auto lift = lift_chain_map(src, dst, proj, opts_.q_max);
  std::lock_guard lock(mutex_);
  return projections_.try_emplace({i, n}, std::move(lift)).first->second;
}

const std::vector<FreeMap> &LocalCohomologyEngine::left_mult_lift(int i, int k, std::size_t s, int n) {
  const auto key = std::make_tuple(i, k, s, n);
  {
    std::lock_guard lock(mutex_);
    if (auto it = left_mults_.find(key); it != left_mults_.end()) return it->second;
  }
  const FreeResolution &src = truncation(k, n), &dst = truncation(i, n);
  ModuleMorphism mult = ModuleMorphism::zero(src.module, dst.module);
  for (int t = k; t < i + n && t <= alg_->hi(); ++t)
    mult.mats[static_cast<std::size_t>(t - alg_->lo())] = alg_->left_mult(i, k, t, s);
  auto lift = lift_chain_map(src, dst, mult, opts_.q_max);
  std::lock_guard lock(mutex_);
  return left_mults_.try_emplace(key, std::move(lift)).first->second;
}

std::shared_ptr<const LocalCohomology> LocalCohomologyEngine::compute(const GradedModule &m) {
  if (m.side() != Side::Right || !same_algebra(m.algebra(), alg_))
    throw AlgebraMismatch("local cohomology expects a right module over the engine's algebra");
  ensure_truncations();
  auto lc = std::shared_ptr<LocalCohomology>(new LocalCohomology());
  lc->engine_ = shared_from_this();
  lc->target_ = m;
  const int lo = alg_->lo(), qmax = opts_.q_max;
  const auto width = static_cast<std::size_t>(alg_->window().width());
  lc->columns_.resize(width);
  lc->table_.lo = lo;
  lc->table_.q_max = qmax;
  lc->table_.cells.assign(static_cast<std::size_t>(qmax + 1), std::vector<LocalCohomologyCell>(width));
  lc->first_.assign(width, 1);

  parallel_for(width, [&](std::size_t k) {
    const int i = lo + static_cast<int>(k);
    auto &col = lc->columns_[k];
    const int first = first_level(i);
    lc->first_[k] = first;
    col.n_last = first - 1;
    for (int n = first; n <= level_limit(i); ++n) {
      const FreeResolution &r = truncation(i, n);
      bool usable = true;
      for (int p = 0; p <= std::min(r.length(), qmax + 1) && usable; ++p)
        for (int d : r.free[static_cast<std::size_t>(p)].degrees) usable = usable && m.reliable(d);
      if (!usable) break;
      LocalCohomology::Level level{hom_cochain(r, m, qmax + 1), {}};
      for (int q = 0; q <= qmax; ++q) level.h.push_back(cohomology_at(level.complex, q, m.field()));
      col.levels.push_back(std::move(level));
      col.n_last = n;
    }
    col.phi.assign(static_cast<std::size_t>(qmax + 1), {});
    for (int n = first; n < col.n_last; ++n) {
      const auto &lift = projection_lift(i, n);
      const auto &from = col.levels[static_cast<std::size_t>(n - first)];
      const auto &to = col.levels[static_cast<std::size_t>(n + 1 - first)];
      for (int q = 0; q <= qmax; ++q) {
        const SparseMatrix chain = hom_pullback(lift[static_cast<std::size_t>(q)], m);
        col.phi[static_cast<std::size_t>(q)].push_back(
            from.h[static_cast<std::size_t>(q)].space.induced(chain, to.h[static_cast<std::size_t>(q)].space));
      }
    }
    for (int q = 0; q <= qmax; ++q) {
      auto &cell = lc->table_.cells[static_cast<std::size_t>(q)][k];
      if (col.levels.empty()) continue;
      int n0 = col.n_last;
      while (n0 > first) {
        const SparseMatrix &phi = col.phi[static_cast<std::size_t>(q)][static_cast<std::size_t>(n0 - 1 - first)];
        if (phi.rows() != phi.cols() || rank(phi) != phi.rows()) break;
        --n0;
      }
      cell.dim = col.levels[static_cast<std::size_t>(n0 - first)].h[static_cast<std::size_t>(q)].dim();
      if (col.n_last - n0 >= opts_.stability_runs) cell.stabilized_at = n0;
      else cell.dim = col.levels.back().h[static_cast<std::size_t>(q)].dim();
    }
  });

  // Reliable interval: stabilized from the bottom up, and every generator
  // action inside it computable at a common level.
  for (int q = 0; q <= qmax; ++q) {
    int r = lo - 1;
    while (r + 1 <= alg_->hi() && lc->table_.cell(q, r + 1).stabilized()) ++r;
    for (int k = lo + 1; k <= r; ++k) {
      bool ok = true;
      for (int i = lo; i < k && ok; ++i) {
        if (alg_->generators(i, k).empty()) continue;
        const int n = std::max(lc->table_.cell(q, i).stabilized_at, lc->table_.cell(q, k).stabilized_at);
        ok = n <= std::min(lc->column(i).n_last, lc->column(k).n_last);
      }
      if (!ok) {
        r = k - 1;
        break;
      }
    }
    lc->table_.reliable_hi.push_back(r);
  }
  return lc;
}

SparseMatrix LocalCohomology::transport(int q, int i, int n) const {
  const Column &col = column(i);
  const int first = first_[static_cast<std::size_t>(i - table_.lo)];
  const int n0 = table_.cell(q, i).stabilized_at;
  const std::size_t d = table_.dim(q, i);
  SparseMatrix t = SparseMatrix::identity(target_.field(), d);
  for (int m = n0; m < n; ++m) t = col.phi[static_cast<std::size_t>(q)][static_cast<std::size_t>(m - first)] * t;
  return t;
}

const Cohomology &LocalCohomology::at_level(int q, int i, int n) const {
  const int first = first_[static_cast<std::size_t>(i - table_.lo)];
  return column(i).levels[static_cast<std::size_t>(n - first)].h[static_cast<std::size_t>(q)];
}

GradedModule LocalCohomology::module(int q) const {
  const AlgebraPtr &a = engine_->algebra();
  const int lo = a->lo(), hi = a->hi();
  const int r = table_.reliable_hi[static_cast<std::size_t>(q)];
  std::vector<std::size_t> dims;
  for (int t = lo; t <= hi; ++t) dims.push_back(t <= r ? table_.dim(q, t) : 0);
  GradedModule out(a, Side::Right, dims);
  for (int k = lo + 1; k <= r; ++k)
    for (int i = lo; i < k; ++i) {
      if (dims[static_cast<std::size_t>(i - lo)] == 0 || dims[static_cast<std::size_t>(k - lo)] == 0) continue;
      const auto &gens = a->generators(i, k);
      if (gens.empty()) continue;
      const int n = std::max(table_.cell(q, i).stabilized_at, table_.cell(q, k).stabilized_at);
      const auto tk_inv = inverse(transport(q, k, n));
      if (!tk_inv) throw AssertionFailure("colimit transport is not invertible past stabilization");
      const SparseMatrix ti = transport(q, i, n);
      for (std::size_t pos = 0; pos < gens.size(); ++pos) {
        const auto &lift = engine_->left_mult_lift(i, k, gens[pos], n);
        const SparseMatrix chain = hom_pullback(lift[static_cast<std::size_t>(q)], target_);
        const SparseMatrix ls = at_level(q, i, n).space.induced(chain, at_level(q, k, n).space);
        out.set_generator_action(i, k, pos, *tk_inv * ls * ti);
      }
    }
  out.flags.reliable_lo = lo;
  out.flags.reliable_hi = r;
  out.flags.open_below = dims.front() != 0;
  out.flags.open_above = r < hi;
  const auto report = validate_module(out);
  if (!report.ok()) throw AssertionFailure("local cohomology module fails the module axioms: " + report.violations.front().detail);
  return out;
}

SparseMatrix LocalCohomology::induced(const LocalCohomology &other, const ModuleMorphism &u, int q, int i) const {
  const int n = std::max(table_.cell(q, i).stabilized_at, other.table_.cell(q, i).stabilized_at);
  if (table_.cell(q, i).stabilized_at < 0 || other.table_.cell(q, i).stabilized_at < 0 ||
      n > std::min(column(i).n_last, other.column(i).n_last))
    throw ResolutionTruncated("no common stabilized level for the induced map");
  const FreeModule &f = engine_->truncation(i, n).free.size() > static_cast<std::size_t>(q)
                            ? engine_->truncation(i, n).free[static_cast<std::size_t>(q)]
                            : FreeModule{engine_->algebra(), {}};
  const SparseMatrix chain = hom_pushforward(f, u);
  const SparseMatrix x = at_level(q, i, n).space.induced(chain, other.at_level(q, i, n).space);
  const auto inv = inverse(other.transport(q, i, n));
  if (!inv) throw AssertionFailure("colimit transport is not invertible past stabilization");
  return *inv * x * transport(q, i, n);
}

Bimodule LocalCohomologyEngine::bimodule(int q) {
  {
    std::lock_guard lock(mutex_);
    if (auto it = bimodules_.find(q); it != bimodules_.end()) return it->second;
  }
  const int lo = alg_->lo(), hi = alg_->hi();
  const auto width = static_cast<std::size_t>(alg_->window().width());
  std::vector<std::shared_ptr<const LocalCohomology>> lcs(width);
  const Bimodule a_bim = algebra_bimodule(alg_);
  for (std::size_t k = 0; k < width; ++k) lcs[k] = compute(a_bim.rows[k]);
  Bimodule b{alg_, {}, {}};
  for (std::size_t k = 0; k < width; ++k) b.rows.push_back(lcs[k]->module(q));
  for (int i = lo; i <= hi; ++i) {
    std::vector<std::size_t> dims;
    for (int j = lo; j <= hi; ++j) dims.push_back(b.row(j).dim(i));
    GradedModule col(alg_, Side::Left, dims);
    int reliable_hi = lo - 1;
    while (reliable_hi + 1 <= hi && b.row(reliable_hi + 1).reliable(i)) ++reliable_hi;
    for (int j = lo + 1; j <= hi; ++j)
      for (int l = lo; l < j; ++l) {
        if (dims[static_cast<std::size_t>(j - lo)] == 0 || dims[static_cast<std::size_t>(l - lo)] == 0) continue;
        const auto &gens = alg_->generators(l, j);
        for (std::size_t pos = 0; pos < gens.size(); ++pos) {
          ModuleMorphism u = ModuleMorphism::zero(a_bim.row(j), a_bim.row(l));
          for (int t = j; t <= hi; ++t) u.mats[static_cast<std::size_t>(t - lo)] = alg_->left_mult(l, j, t, gens[pos]);
          const auto &src = lcs[static_cast<std::size_t>(j - lo)];
          const auto &dst = lcs[static_cast<std::size_t>(l - lo)];
          col.set_generator_action(l, j, pos, src->induced(*dst, u, q, i));
        }
      }
    col.flags.reliable_lo = lo;
    col.flags.reliable_hi = reliable_hi;
    col.flags.open_below = false;
    col.flags.open_above = reliable_hi < hi;
    b.cols.push_back(std::move(col));
  }
  const auto report = validate_bimodule(b);
  if (!report.ok()) throw AssertionFailure("local cohomology bimodule fails the axioms: " + report.violations.front().detail);
  std::lock_guard lock(mutex_);
  return bimodules_.try_emplace(q, std::move(b)).first->second;
}

} // namespace zhom
