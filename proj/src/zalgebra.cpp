#include "zhom/zalgebra.hpp"

#include <algorithm>
#include <sstream>

namespace zhom {

void Window::check() const {
  if (lo > hi) throw Error("window requires lo <= hi");
  if (guard < 0 || guard > hi - lo) throw Error("window guard must lie in [0, hi - lo]");
}

// ---------------------------------------------------------------- ZAlgebra

AlgebraPtr ZAlgebra::create(Data data) {
  data.window.check();
  const auto w = static_cast<std::size_t>(data.window.width());
  if (data.dims.size() != w * w) throw Error("dims table does not match the window");
  if (data.mult.size() != w * w * w) throw Error("multiplication table does not match the window");
  return AlgebraPtr(new ZAlgebra(std::move(data)));
}

ZAlgebra::Data ZAlgebra::blank(Field f, Window w, const std::vector<std::size_t> &dims) {
  w.check();
  Data d;
  d.field = f;
  d.window = w;
  d.dims = dims;
  const auto n = static_cast<std::size_t>(w.width());
  d.mult.resize(n * n * n);
  for (int i = w.lo; i <= w.hi; ++i)
    for (int j = i; j <= w.hi; ++j)
      for (int k = j; k <= w.hi; ++k) {
        auto idx = [&](int a, int b) { return static_cast<std::size_t>(a - w.lo) * n + static_cast<std::size_t>(b - w.lo); };
        MultTensor &t = d.mult[idx(i, j) * n + static_cast<std::size_t>(k - w.lo)];
        t.left = dims[idx(i, j)];
        t.right = dims[idx(j, k)];
        t.out = dims[idx(i, k)];
        t.products.assign(t.left * t.right, SparseVector{});
      }
  return d;
}

std::size_t ZAlgebra::dim(int i, int j) const {
  if (i > j || !window().contains(i) || !window().contains(j)) return 0;
  return data_.dims[pair_index(i, j)];
}

SparseVector ZAlgebra::multiply(int i, int j, int k, const SparseVector &a, const SparseVector &b) const {
  const MultTensor &t = mult(i, j, k);
  SparseVector out;
  for (const auto &[s, x] : a)
    for (const auto &[u, y] : b) out.axpy(x * y, t.at(s, u));
  return out;
}

SparseMatrix ZAlgebra::right_mult(int i, int j, int k, std::size_t s) const {
  const MultTensor &t = mult(i, j, k);
  std::vector<SparseVector> cols(t.left);
  for (std::size_t x = 0; x < t.left; ++x) cols[x] = t.at(x, s);
  return SparseMatrix::from_columns(field(), t.out, cols);
}

SparseMatrix ZAlgebra::left_mult(int i, int j, int k, std::size_t s) const {
  const MultTensor &t = mult(i, j, k);
  std::vector<SparseVector> cols(t.right);
  for (std::size_t x = 0; x < t.right; ++x) cols[x] = t.at(s, x);
  return SparseMatrix::from_columns(field(), t.out, cols);
}

void ZAlgebra::build_generators() const {
  const auto n = static_cast<std::size_t>(window().width());
  gens_.assign(n * n, {});
  recipes_.assign(n * n, {});
  const Field &f = field();
  for (int gap = 1; gap < window().width(); ++gap) {
    for (int j = lo(); j + gap <= hi(); ++j) {
      const int k = j + gap;
      const std::size_t djk = dim(j, k);
      if (djk == 0) continue;
      // Products g * t with g a generator of A_jm; their span is the decomposable part.
      std::vector<Recipe::Product> prods;
      std::vector<SparseVector> vecs;
      for (int m = j + 1; m < k; ++m) {
        for (std::uint32_t g : gens_[pair_index(j, m)])
          for (std::uint32_t t = 0; t < dim(m, k); ++t) {
            prods.push_back({m, g, t, f.one()});
            vecs.push_back(mult(j, m, k).at(g, t));
          }
      }
      const auto np = static_cast<std::uint32_t>(prods.size());
      Echelon tagged(f, djk + np);
      for (std::uint32_t p = 0; p < np; ++p) {
        SparseVector row = vecs[p];
        row.push_back(static_cast<std::uint32_t>(djk) + p, f.one());
        tagged.insert(row);
      }
      Echelon decomposable(f, djk);
      std::vector<SparseVector> tags(djk);
      for (const auto &row : tagged.basis()) {
        if (row.leading() >= djk) continue;
        SparseVector real = row.slice(0, static_cast<std::uint32_t>(djk));
        tags[row.leading()] = row.slice(static_cast<std::uint32_t>(djk), np);
        decomposable.insert(real);
      }
      auto &gens = gens_[pair_index(j, k)];
      gens = decomposable.non_pivots();
      auto &recs = recipes_[pair_index(j, k)];
      recs.resize(djk);
      for (std::size_t s = 0; s < djk; ++s) {
        SparseVector unit = SparseVector::unit(f, static_cast<std::uint32_t>(s));
        SparseVector rest = decomposable.reduce(unit);
        Recipe r;
        for (const auto &[c, x] : rest) r.gens.emplace_back(c, x);
        // unit - rest lies in the decomposables; its coordinate along the row
        // with pivot p is its entry at p, and that row's tag expresses it in products.
        SparseVector dec = unit;
        dec.axpy(-f.one(), rest);
        SparseVector combo;
        for (const auto &[p, x] : dec)
          if (!tags[p].is_zero()) combo.axpy(x, tags[p]);
        for (const auto &[p, x] : combo) {
          Recipe::Product prod = prods[p];
          prod.coeff = x;
          r.products.push_back(prod);
        }
        recs[s] = std::move(r);
      }
    }
  }
}

const std::vector<std::uint32_t> &ZAlgebra::generators(int j, int k) const {
  std::call_once(gen_once_, [this] { build_generators(); });
  return gens_[pair_index(j, k)];
}

const Recipe &ZAlgebra::recipe(int j, int k, std::size_t s) const {
  std::call_once(gen_once_, [this] { build_generators(); });
  return recipes_[pair_index(j, k)][s];
}

AlgebraPtr ZAlgebra::opposite() const {
  std::lock_guard<std::mutex> lock(opp_mutex_);
  if (opposite_) return opposite_;
  if (auto p = parent_.lock()) return p;
  const Window &w = window();
  Window ow{-w.hi, -w.lo, w.guard};
  const auto n = static_cast<std::size_t>(w.width());
  std::vector<std::size_t> dims(n * n, 0);
  auto oidx = [&](int a, int b) { return static_cast<std::size_t>(a - ow.lo) * n + static_cast<std::size_t>(b - ow.lo); };
  for (int a = ow.lo; a <= ow.hi; ++a)
    for (int b = ow.lo; b <= ow.hi; ++b) dims[oidx(a, b)] = data_.dims[pair_index(-b, -a)];
  Data d = blank(field(), ow, dims);
  for (int a = ow.lo; a <= ow.hi; ++a)
    for (int b = a; b <= ow.hi; ++b)
      for (int c = b; c <= ow.hi; ++c) {
        MultTensor &t = d.mult[oidx(a, b) * n + static_cast<std::size_t>(c - ow.lo)];
        const MultTensor &src = mult(-c, -b, -a);
        for (std::size_t s = 0; s < t.left; ++s)
          for (std::size_t u = 0; u < t.right; ++u) t.at(s, u) = src.at(u, s);
      }
  auto opp = std::shared_ptr<ZAlgebra>(new ZAlgebra(std::move(d)));
  opp->parent_ = shared_from_this();
  opposite_ = opp;
  return opp;
}

bool ZAlgebra::same_structure(const ZAlgebra &o) const {
  return field() == o.field() && window() == o.window() && data_.dims == o.data_.dims && data_.mult == o.data_.mult;
}

bool same_algebra(const AlgebraPtr &a, const AlgebraPtr &b) {
  return a == b || (a && b && a->same_structure(*b));
}

// ---------------------------------------------------------------- validate

namespace {

std::string fmt_degrees(const std::vector<int> &d) {
  std::ostringstream os;
  os << "(";
  for (std::size_t k = 0; k < d.size(); ++k) os << (k ? "," : "") << d[k];
  os << ")";
  return os.str();
}

} // namespace

ValidationReport validate(const ZAlgebra &a, const ValidateOptions &opts) {
  ValidationReport rep;
  const Window &w = a.window();
  const Field &f = a.field();
  const auto &dims = a.data().dims;
  auto full = [&] { return rep.violations.size() >= opts.max_violations; };
  auto add = [&](Violation v) {
    if (!full()) rep.violations.push_back(std::move(v));
  };

  for (int i = w.lo; i <= w.hi; ++i)
    for (int j = w.lo; j < i; ++j)
      if (dims[a.pair_index(i, j)] != 0)
        add({"grading", {i, j}, {}, "A_" + fmt_degrees({i, j}) + " must vanish for i > j"});
  for (int i = w.lo; i <= w.hi; ++i)
    if (dims[a.pair_index(i, i)] != 1)
      add({"diagonal", {i, i}, {}, "A_ii must be the base field"});

  bool shapes_ok = true;
  for (int i = w.lo; i <= w.hi; ++i)
    for (int j = i; j <= w.hi; ++j)
      for (int k = j; k <= w.hi; ++k) {
        const MultTensor &t = a.mult(i, j, k);
        bool ok = t.left == a.dim(i, j) && t.right == a.dim(j, k) && t.out == a.dim(i, k) &&
                  t.products.size() == t.left * t.right;
        if (ok)
          for (const auto &v : t.products)
            if (!v.is_zero() && v.entries().back().first >= t.out) ok = false;
        if (!ok) {
          shapes_ok = false;
          add({"shape", {i, j, k}, {}, "multiplication tensor has the wrong shape"});
        }
      }
  if (!shapes_ok || !rep.ok()) return rep;

  // Identity laws: e_i a = a = a e_j.
  for (int i = w.lo; i <= w.hi; ++i)
    for (int j = i; j <= w.hi; ++j)
      for (std::size_t s = 0; s < a.dim(i, j); ++s) {
        SparseVector unit = SparseVector::unit(f, static_cast<std::uint32_t>(s));
        if (!(a.mult(i, i, j).at(0, s) == unit))
          add({"identity", {i, i, j}, {0, s}, "e_i * a != a"});
        if (!(a.mult(i, j, j).at(s, 0) == unit))
          add({"identity", {i, j, j}, {s, 0}, "a * e_j != a"});
      }

  // Associativity over strictly increasing degree quadruples (the others
  // reduce to the identity laws).
  std::vector<Violation> assoc;
  for (int j = w.lo; j <= w.hi; ++j)
    for (int k = j + 1; k <= w.hi; ++k)
      for (int l = k + 1; l <= w.hi; ++l) {
        const std::size_t djk = a.dim(j, k), dkl = a.dim(k, l);
        if (djk == 0 || dkl == 0) continue;
        const MultTensor &bc_t = a.mult(j, k, l);
        for (int i = w.lo; i < j; ++i) {
          const std::size_t dij = a.dim(i, j);
          const MultTensor &ab_t = a.mult(i, j, k);
          const MultTensor &abc_t = a.mult(i, k, l);
          const MultTensor &a_bc_t = a.mult(i, j, l);
          for (std::size_t x = 0; x < dij; ++x)
            for (std::size_t y = 0; y < djk; ++y) {
              const SparseVector &ab = ab_t.at(x, y);
              for (std::size_t z = 0; z < dkl; ++z) {
                SparseVector lhs, rhs;
                for (const auto &[u, c] : ab) lhs.axpy(c, abc_t.at(u, z));
                for (const auto &[u, c] : bc_t.at(y, z)) rhs.axpy(c, a_bc_t.at(x, u));
                if (!(lhs == rhs)) {
                  assoc.push_back({"associativity", {i, j, k, l}, {x, y, z}, "(ab)c != a(bc)"});
                  if (assoc.size() >= opts.max_violations) goto done;
                }
              }
            }
        }
      }
done:
  std::sort(assoc.begin(), assoc.end(), [](const Violation &p, const Violation &q) {
    return std::tie(p.degrees, p.basis) < std::tie(q.degrees, q.basis);
  });
  for (auto &v : assoc) add(std::move(v));
  return rep;
}

// ---------------------------------------------------------------- builtins

AlgebraPtr make_trivial(const Window &w, Field f) {
  w.check();
  const auto n = static_cast<std::size_t>(w.width());
  std::vector<std::size_t> dims(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) dims[i * n + i] = 1;
  auto d = ZAlgebra::blank(f, w, dims);
  for (std::size_t i = 0; i < n; ++i) d.mult[(i * n + i) * n + i].at(0, 0) = SparseVector::unit(f, 0);
  return ZAlgebra::create(std::move(d));
}

namespace {

using Exponent = std::vector<int>;

/// Exponent vectors of total degree d in n variables, lexicographically
/// descending (x_1^d first).
std::vector<Exponent> monomials(int n, int d) {
  std::vector<Exponent> out;
  Exponent cur(static_cast<std::size_t>(n), 0);
  auto rec = [&](auto &&self, int var, int left) -> void {
    if (var == n - 1) {
      cur[static_cast<std::size_t>(var)] = left;
      out.push_back(cur);
      return;
    }
    for (int e = left; e >= 0; --e) {
      cur[static_cast<std::size_t>(var)] = e;
      self(self, var + 1, left - e);
    }
  };
  rec(rec, 0, d);
  return out;
}

} // namespace

AlgebraPtr make_poly(int nvars, const Window &w, Field f) {
  if (nvars < 1) throw Error("make_poly requires n >= 1");
  w.check();
  const auto n = static_cast<std::size_t>(w.width());
  std::vector<std::vector<Exponent>> mons(n);
  std::vector<std::map<Exponent, std::uint32_t>> index(n);
  for (std::size_t d = 0; d < n; ++d) {
    mons[d] = monomials(nvars, static_cast<int>(d));
    for (std::uint32_t k = 0; k < mons[d].size(); ++k) index[d][mons[d][k]] = k;
  }
  std::vector<std::size_t> dims(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) dims[i * n + j] = mons[j - i].size();
  auto data = ZAlgebra::blank(f, w, dims);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      for (std::size_t k = j; k < n; ++k) {
        MultTensor &t = data.mult[(i * n + j) * n + k];
        const auto &left = mons[j - i];
        const auto &right = mons[k - j];
        for (std::size_t s = 0; s < left.size(); ++s)
          for (std::size_t u = 0; u < right.size(); ++u) {
            Exponent e = left[s];
            for (std::size_t v = 0; v < e.size(); ++v) e[v] += right[u][v];
            t.at(s, u) = SparseVector::unit(f, index[k - i].at(e));
          }
      }
  return ZAlgebra::create(std::move(data));
}

AlgebraPtr make_adjacent_presentation(const std::map<int, std::size_t> &gens, const std::vector<RelationSpace> &rels,
                                      const Window &w, Field f) {
  w.check();
  const auto n = static_cast<std::size_t>(w.width());
  auto gdim = [&](int m) -> std::size_t {
    auto it = gens.find(m);
    return it == gens.end() ? 0 : it->second;
  };
  for (const auto &[m, c] : gens)
    if (c > 0 && (m < w.lo || m + 1 > w.hi))
      throw InvalidRelationDegree("generators at degree " + std::to_string(m) + " leave the window");

  // Relation spaces grouped by end degree, validated against the tensor space.
  std::map<int, std::vector<const RelationSpace *>> by_end;
  for (const auto &r : rels) {
    if (r.to - r.from < 1 || r.from < w.lo || r.to > w.hi)
      throw InvalidRelationDegree("relation degree (" + std::to_string(r.from) + "," + std::to_string(r.to) +
                                  ") must satisfy lo <= from < to <= hi");
    std::size_t tdim = 1;
    for (int m = r.from; m < r.to; ++m) tdim *= gdim(m);
    for (const auto &v : r.vectors)
      if (v.size() != tdim)
        throw RelationOutsideTensorSpace("relation on (" + std::to_string(r.from) + "," + std::to_string(r.to) +
                                         ") has " + std::to_string(v.size()) + " coordinates, tensor space has " +
                                         std::to_string(tdim));
    by_end[r.to].push_back(&r);
  }

  auto pidx = [&](int i, int j) { return static_cast<std::size_t>(i - w.lo) * n + static_cast<std::size_t>(j - w.lo); };
  std::vector<std::size_t> dims(n * n, 0);
  // proj[(i,m+1)][x * dimV_m + v]: image of basis x of A_im times generator v, in A_{i,m+1}.
  std::vector<std::vector<SparseVector>> proj(n * n);
  // last[(i,j)][b] = (b', v): basis b of A_ij is the class of b' (x) v.
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> last(n * n);

  auto word_image = [&](int i, int a, std::uint32_t u, const std::vector<std::uint32_t> &word) {
    // u in A_ia times the generators in `word` (degrees a, a+1, ...), as an element of A_{i,a+|word|}.
    SparseVector x = SparseVector::unit(f, u);
    int m = a;
    for (std::uint32_t v : word) {
      SparseVector y;
      const std::size_t dv = gdim(m);
      for (const auto &[c, s] : x) y.axpy(s, proj[pidx(i, m + 1)][c * dv + v]);
      x = std::move(y);
      ++m;
    }
    return x;
  };

  for (int i = w.lo; i <= w.hi; ++i) {
    dims[pidx(i, i)] = 1;
    for (int j = i + 1; j <= w.hi; ++j) {
      const std::size_t prev = dims[pidx(i, j - 1)];
      const std::size_t dv = gdim(j - 1);
      const std::size_t amb = prev * dv;
      Echelon relspace(f, amb);
      auto it = by_end.find(j);
      if (it != by_end.end() && amb > 0) {
        for (const RelationSpace *r : it->second) {
          if (r->from < i) continue;
          const int a = r->from;
          // Decode pure tensor indices along the path a..j-1.
          std::vector<std::size_t> radix;
          for (int m = a; m < j; ++m) radix.push_back(gdim(m));
          for (std::uint32_t u = 0; u < dims[pidx(i, a)]; ++u)
            for (const auto &vec : r->vectors) {
              SparseVector img;
              for (std::size_t flat = 0; flat < vec.size(); ++flat) {
                if (vec[flat].is_zero()) continue;
                std::vector<std::uint32_t> word(radix.size());
                std::size_t rem = flat;
                for (std::size_t p = radix.size(); p-- > 0;) {
                  word[p] = static_cast<std::uint32_t>(rem % radix[p]);
                  rem /= radix[p];
                }
                std::uint32_t lastv = word.back();
                word.pop_back();
                SparseVector pre = word_image(i, a, u, word);
                for (const auto &[c, s] : pre)
                  img.axpy(vec[flat] * s, SparseVector::unit(f, static_cast<std::uint32_t>(c * dv + lastv)));
              }
              relspace.insert(img);
            }
        }
      }
      auto keep = relspace.non_pivots();
      dims[pidx(i, j)] = keep.size();
      std::vector<int> pos(amb, -1);
      for (std::size_t q = 0; q < keep.size(); ++q) pos[keep[q]] = static_cast<int>(q);
      auto &pr = proj[pidx(i, j)];
      pr.resize(amb);
      for (std::uint32_t c = 0; c < amb; ++c) {
        SparseVector red = relspace.reduce(SparseVector::unit(f, c));
        SparseVector img;
        for (const auto &[q, s] : red) img.push_back(static_cast<std::uint32_t>(pos[q]), s);
        pr[c] = std::move(img);
      }
      auto &ls = last[pidx(i, j)];
      for (std::uint32_t q : keep) ls.emplace_back(static_cast<std::uint32_t>(q / dv), static_cast<std::uint32_t>(q % dv));
    }
  }

  auto data = ZAlgebra::blank(f, w, dims);
  for (int i = w.lo; i <= w.hi; ++i)
    for (int j = i; j <= w.hi; ++j)
      for (int k = j; k <= w.hi; ++k) {
        MultTensor &t = data.mult[pidx(i, j) * n + static_cast<std::size_t>(k - w.lo)];
        for (std::size_t s = 0; s < t.left; ++s)
          for (std::size_t u = 0; u < t.right; ++u) {
            if (k == j) {
              t.at(s, u) = SparseVector::unit(f, static_cast<std::uint32_t>(s));
              continue;
            }
            // u = u' * v with u' in A_{j,k-1}; a * u = (a * u') * v.
            auto [up, v] = last[pidx(j, k)][u];
            const SparseVector &au = data.mult[pidx(i, j) * n + static_cast<std::size_t>(k - 1 - w.lo)].at(s, up);
            SparseVector out;
            const std::size_t dv = gdim(k - 1);
            for (const auto &[c, x] : au) out.axpy(x, proj[pidx(i, k)][c * dv + v]);
            t.at(s, u) = std::move(out);
          }
      }
  return ZAlgebra::create(std::move(data));
}

AlgebraPtr make_skew(const Scalar &q, const Window &w) {
  const Field f = q.field();
  std::map<int, std::size_t> gens;
  for (int i = w.lo; i < w.hi; ++i) gens[i] = 2;
  std::vector<RelationSpace> rels;
  // Basis of V (x) V: xx, xy, yx, yy. Relation y(x)x - q x(x)y.
  for (int i = w.lo; i + 2 <= w.hi; ++i)
    rels.push_back({i, i + 2, {{f.zero(), -q, f.one(), f.zero()}}});
  return make_adjacent_presentation(gens, rels, w, f);
}

AlgebraPtr make_nil(const Window &w, Field f) {
  std::map<int, std::size_t> gens;
  for (int i = w.lo; i < w.hi; ++i) gens[i] = 1;
  std::vector<RelationSpace> rels;
  for (int i = w.lo; i + 2 <= w.hi; ++i) rels.push_back({i, i + 2, {{f.one()}}});
  return make_adjacent_presentation(gens, rels, w, f);
}

} // namespace zhom
