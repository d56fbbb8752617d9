#include "zhom/resolution.hpp"

#include "zhom/parallel.hpp"

#include <algorithm>
#include <sstream>

namespace zhom {

// ---------------------------------------------------------------- free modules

std::size_t FreeModule::dim(int t) const {
  std::size_t d = 0;
  for (int g : degrees) d += algebra->dim(g, t);
  return d;
}

std::size_t FreeModule::offset(std::size_t g, int t) const {
  std::size_t off = 0;
  for (std::size_t h = 0; h < g; ++h) off += algebra->dim(degrees[h], t);
  return off;
}

SparseVector FreeModule::act(int j, int k, std::size_t s, const SparseVector &x) const {
  const Field &f = algebra->field();
  std::vector<Scalar> acc(dim(k), f.zero());
  std::size_t src = 0, dst = 0;
  for (int d : degrees) {
    const std::size_t bs = algebra->dim(d, j), bt = algebra->dim(d, k);
    if (bs && bt) {
      const MultTensor &mt = algebra->mult(d, j, k);
      for (const auto &[idx, c] : x) {
        if (idx < src || idx >= src + bs) continue;
        for (const auto &[o, v] : mt.at(idx - src, s)) acc[dst + o] = acc[dst + o] + c * v;
      }
    }
    src += bs;
    dst += bt;
  }
  SparseVector out;
  for (std::size_t i = 0; i < acc.size(); ++i)
    if (!acc[i].is_zero()) out.push_back(static_cast<std::uint32_t>(i), acc[i]);
  return out;
}

SparseVector FreeModule::act(int j, int k, const SparseVector &a, const SparseVector &x) const {
  SparseVector out;
  for (const auto &[s, c] : a) out.axpy(c, act(j, k, s, x));
  return out;
}

SparseVector FreeModule::generator(std::size_t g) const {
  const int d = degrees[g];
  return SparseVector::unit(algebra->field(), static_cast<std::uint32_t>(offset(g, d)));
}

GradedModule FreeModule::module() const {
  const auto w = algebra->window();
  std::vector<std::size_t> dims;
  for (int t = w.lo; t <= w.hi; ++t) dims.push_back(dim(t));
  FreeModule self = *this;
  auto m = GradedModule::from_provider(algebra, Side::Right, std::move(dims), [self](int j, int k, std::size_t s) {
    SparseMatrix out(self.algebra->field(), self.dim(k), self.dim(j));
    std::size_t r0 = 0, c0 = 0;
    for (int d : self.degrees) {
      if (d <= j) out.place(r0, c0, self.algebra->right_mult(d, j, k, s));
      r0 += self.algebra->dim(d, k);
      c0 += self.algebra->dim(d, j);
    }
    return out;
  });
  bool top = false;
  for (int d : degrees) top = top || d <= w.hi;
  m.flags.open_above = top;
  return m;
}

FreeMap FreeMap::make(FreeModule source, FreeModule target, std::vector<SparseVector> images) {
  FreeMap f{std::move(source), std::move(target), std::move(images), {}};
  const AlgebraPtr &a = f.source.algebra;
  const int lo = a->lo(), hi = a->hi();
  f.mats.assign(static_cast<std::size_t>(hi - lo + 1), SparseMatrix(a->field(), 0, 0));
  parallel_for(f.mats.size(), [&](std::size_t idx) {
    const int t = lo + static_cast<int>(idx);
    std::vector<SparseVector> cols;
    for (std::size_t g = 0; g < f.source.rank(); ++g) {
      const int d = f.source.degrees[g];
      for (std::size_t c = 0; c < a->dim(d, t); ++c) cols.push_back(f.target.act(d, t, c, f.images[g]));
    }
    f.mats[idx] = SparseMatrix::from_columns(a->field(), f.target.dim(t), cols);
  });
  return f;
}

// ---------------------------------------------------------------- generators

namespace {

using Act = std::function<SparseVector(int, int, std::size_t, const SparseVector &)>;

struct Generators {
  std::vector<int> degrees;
  std::vector<SparseVector> vectors;
};

/// Minimal generators of the submodule whose degree-t part is spanned by
/// spaces[t - lo]; act(j, k, s, x) is the action of basis element s of A_jk.
Generators choose_generators(const ZAlgebra &a, const std::vector<std::vector<SparseVector>> &spaces,
                             const std::vector<std::size_t> &ambient, const Act &act) {
  const int lo = a.lo();
  const std::size_t n = spaces.size();
  std::vector<std::vector<SparseVector>> chosen(n);
  parallel_for(n, [&](std::size_t idx) {
    if (spaces[idx].empty()) return;
    const int t = lo + static_cast<int>(idx);
    Echelon space(a.field(), ambient[idx]);
    for (const auto &v : spaces[idx]) space.insert(v);
    const auto basis = space.basis();
    Echelon decomposable(a.field(), basis.size());
    for (int m = lo; m < t; ++m) {
      const auto &src = spaces[static_cast<std::size_t>(m - lo)];
      if (src.empty() || a.dim(m, t) == 0) continue;
      for (std::uint32_t s : a.generators(m, t))
        for (const auto &x : src) {
          const SparseVector y = act(m, t, s, x);
          if (!y.is_zero()) decomposable.insert(space.coordinates(y));
        }
      if (decomposable.rank() == basis.size()) break;
    }
    for (std::uint32_t c : decomposable.non_pivots()) chosen[idx].push_back(basis[c]);
  });
  Generators g;
  for (std::size_t idx = 0; idx < n; ++idx)
    for (auto &v : chosen[idx]) {
      g.degrees.push_back(lo + static_cast<int>(idx));
      g.vectors.push_back(std::move(v));
    }
  return g;
}

void require_left_bounded(const GradedModule &m) {
  if (m.flags.open_below && m.dim(m.lo()) != 0) {
    std::ostringstream os;
    os << "module may extend below the window: nonzero in degree " << m.lo();
    throw NotLeftBounded(os.str());
  }
}

std::vector<std::vector<SparseVector>> kernels(const std::vector<SparseMatrix> &mats) {
  std::vector<std::vector<SparseVector>> out(mats.size());
  parallel_for(mats.size(), [&](std::size_t i) { out[i] = kernel_basis(mats[i]); });
  return out;
}

bool all_empty(const std::vector<std::vector<SparseVector>> &spaces) {
  return std::all_of(spaces.begin(), spaces.end(), [](const auto &s) { return s.empty(); });
}

} // namespace

Cover minimal_generators(const GradedModule &m) {
  if (m.side() != Side::Right) throw AlgebraMismatch("minimal_generators expects a right module");
  require_left_bounded(m);
  const ZAlgebra &a = *m.algebra();
  const int lo = a.lo(), hi = a.hi();
  std::vector<std::vector<SparseVector>> spaces;
  std::vector<std::size_t> ambient;
  for (int t = lo; t <= hi; ++t) {
    ambient.push_back(m.dim(t));
    std::vector<SparseVector> units;
    for (std::size_t i = 0; i < m.dim(t); ++i) units.push_back(SparseVector::unit(a.field(), static_cast<std::uint32_t>(i)));
    spaces.push_back(std::move(units));
  }
  auto gens = choose_generators(a, spaces, ambient, [&](int j, int k, std::size_t s, const SparseVector &x) {
    return m.action(j, k, s).apply(x);
  });
  Cover c;
  c.free = FreeModule{m.algebra(), gens.degrees};
  c.images = gens.vectors;
  c.mats.assign(static_cast<std::size_t>(hi - lo + 1), SparseMatrix(a.field(), 0, 0));
  parallel_for(c.mats.size(), [&](std::size_t idx) {
    const int t = lo + static_cast<int>(idx);
    std::vector<SparseVector> cols;
    for (std::size_t g = 0; g < c.free.rank(); ++g) {
      const int d = c.free.degrees[g];
      for (std::size_t s = 0; s < a.dim(d, t); ++s) cols.push_back(m.action(d, t, s).apply(c.images[g]));
    }
    c.mats[idx] = SparseMatrix::from_columns(a.field(), m.dim(t), cols);
  });
  return c;
}

// ---------------------------------------------------------------- resolutions

FreeResolution minimal_free_resolution(const GradedModule &input, int max_length) {
  FreeResolution r;
  r.flipped = input.side() == Side::Left;
  r.module = r.flipped ? flip(input) : input;
  const GradedModule &m = r.module;
  const AlgebraPtr &a = m.algebra();
  const int lo = a->lo();
  const int top = a->window().reliable_top();

  Cover c = minimal_generators(m);
  r.free.push_back(c.free);
  r.cover_images = std::move(c.images);
  r.cover = std::move(c.mats);
  auto kernel = kernels(r.cover);

  std::vector<std::size_t> ambient;
  for (int p = 1;; ++p) {
    if (all_empty(kernel)) {
      r.kernel_vanished = true;
      break;
    }
    if (p > max_length) break;
    const FreeModule &prev = r.free.back();
    ambient.clear();
    for (int t = lo; t <= a->hi(); ++t) ambient.push_back(prev.dim(t));
    auto gens = choose_generators(*a, kernel, ambient, [&](int j, int k, std::size_t s, const SparseVector &x) {
      return prev.act(j, k, s, x);
    });
    FreeModule next{a, gens.degrees};
    r.differentials.push_back(FreeMap::make(next, prev, std::move(gens.vectors)));
    r.free.push_back(std::move(next));
    kernel = kernels(r.differentials.back().mats);
  }

  for (const auto &f : r.free) {
    const bool below = std::all_of(f.degrees.begin(), f.degrees.end(), [&](int d) { return d <= top; });
    if (!below) break;
    ++r.certified_through;
  }
  // A module that vanishes above the window must also vanish in the guard
  // zone: otherwise the syzygies cutting off its top lie beyond the window.
  bool top_visible = m.flags.open_above;
  if (!top_visible) {
    top_visible = true;
    for (int t = top + 1; t <= a->hi(); ++t) top_visible = top_visible && m.dim(t) == 0;
  }
  if (r.kernel_vanished && r.certified_through == r.length() && top_visible) {
    r.status = ResolutionStatus::Terminated;
  } else {
    r.status = ResolutionStatus::WindowTruncated;
    r.truncated_at = r.kernel_vanished ? std::min(r.length() + 1, r.certified_through + 1)
                                       : std::min(r.length(), r.certified_through + 1);
  }
  const auto problems = check_resolution(r);
  for (const auto &p : problems)
    if (p.rfind("minimality", 0) == 0) throw AssertionFailure(p);
  return r;
}

bool FreeResolution::certified(int p) const {
  return status == ResolutionStatus::Terminated || p <= certified_through;
}

std::size_t FreeResolution::betti(int p, int j) const {
  if (p < 0 || p > length()) return 0;
  const int d = flipped ? -j : j;
  const auto &deg = free[static_cast<std::size_t>(p)].degrees;
  return static_cast<std::size_t>(std::count(deg.begin(), deg.end(), d));
}

std::map<std::pair<int, int>, std::size_t> FreeResolution::betti_table() const {
  std::map<std::pair<int, int>, std::size_t> out;
  for (int p = 0; p <= length(); ++p)
    for (int d : free[static_cast<std::size_t>(p)].degrees) ++out[{p, flipped ? -d : d}];
  return out;
}

std::vector<std::string> check_resolution(const FreeResolution &r) {
  std::vector<std::string> problems;
  const AlgebraPtr &a = r.algebra();
  auto report = [&](const std::string &what, int p, int t) {
    std::ostringstream os;
    os << what << " at step " << p << ", degree " << t;
    problems.push_back(os.str());
  };
  for (int p = 1; p <= r.length(); ++p) {
    const FreeMap &d = r.differential(p);
    for (std::size_t g = 0; g < d.source.rank(); ++g) {
      const int deg = d.source.degrees[g];
      for (std::size_t h = 0; h < d.target.rank(); ++h) {
        if (d.target.degrees[h] != deg) continue;
        const auto off = static_cast<std::uint32_t>(d.target.offset(h, deg));
        if (!d.images[g].slice(off, 1).is_zero()) report("minimality violated", p, deg);
      }
    }
  }
  for (int t = a->lo(); t <= a->hi(); ++t) {
    const std::size_t idx = static_cast<std::size_t>(t - a->lo());
    const SparseMatrix &psi = r.cover[idx];
    std::size_t prev_rank = rank(psi);
    if (prev_rank != r.module.dim(t)) report("cover not surjective", 0, t);
    for (int p = 1; p <= r.length(); ++p) {
      const SparseMatrix &d = r.differential(p).at(t);
      const SparseMatrix &before = p == 1 ? psi : r.differential(p - 1).at(t);
      if (before.cols() && d.cols() && !(before * d).is_zero()) report("composition nonzero", p, t);
      const std::size_t rk = rank(d);
      if (rk + prev_rank != r.free[static_cast<std::size_t>(p - 1)].dim(t)) report("not exact", p - 1, t);
      prev_rank = rk;
    }
    if (r.kernel_vanished && prev_rank != r.free.back().dim(t)) report("last map not injective", r.length(), t);
  }
  return problems;
}

ProjectiveDimension projective_dimension(const FreeResolution &r) {
  ProjectiveDimension pd;
  int last = -1;
  for (int p = 0; p <= r.length(); ++p)
    if (!r.free[static_cast<std::size_t>(p)].empty()) last = p;
  pd.exact = r.status == ResolutionStatus::Terminated;
  pd.value = last;
  return pd;
}

ProjectiveDimension projective_dimension(const GradedModule &m, int max_length) {
  return projective_dimension(minimal_free_resolution(m, max_length));
}

std::vector<FreeMap> lift_chain_map(const FreeResolution &pr, const FreeResolution &qr, const ModuleMorphism &f,
                                    int upto) {
  const AlgebraPtr &a = pr.algebra();
  if (!same_algebra(a, qr.algebra())) throw AlgebraMismatch("resolutions over different algebras");
  auto at = [&](int t) -> const SparseMatrix & { return pr.flipped ? f.at(-t) : f.at(t); };
  auto step = [&](const FreeResolution &r, int p) -> FreeModule {
    if (p <= r.length()) return r.free[static_cast<std::size_t>(p)];
    if (r.kernel_vanished) return FreeModule{a, {}};
    throw ResolutionTruncated("chain map requested beyond the computed resolution");
  };
  std::vector<FreeMap> out;
  for (int p = 0; p <= upto; ++p) {
    FreeModule src = step(pr, p), dst = step(qr, p);
    std::vector<SparseVector> images;
    for (std::size_t g = 0; g < src.rank(); ++g) {
      const int d = src.degrees[g];
      SparseVector z;
      const SparseMatrix *target_map = nullptr;
      if (p == 0) {
        z = at(d).apply(pr.cover_images[g]);
        target_map = &qr.cover[static_cast<std::size_t>(d - a->lo())];
      } else {
        z = out.back().at(d).apply(pr.differential(p).images[g]);
        if (z.is_zero()) {
          images.emplace_back();
          continue;
        }
        if (p > qr.length()) throw AssertionFailure("lift target vanishes but the cycle does not");
        target_map = &qr.differential(p).at(d);
      }
      auto x = solve(*target_map, z);
      if (!x) throw AssertionFailure("comparison lift failed: cycle is not a boundary");
      images.push_back(std::move(*x));
    }
    out.push_back(FreeMap::make(std::move(src), std::move(dst), std::move(images)));
  }
  return out;
}

} // namespace zhom
