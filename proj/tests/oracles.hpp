#pragma once
// Independent reference computations used by the tests. They deliberately do
// not touch the library's algebra, module or resolution code: polynomials are
// exponent vectors, matrices are dense mpq_class arrays.

#include <gmpxx.h>

#include <map>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<mpq_class>>;

inline std::size_t rank(Matrix m) {
  std::size_t r = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t piv = r;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[r]);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      const mpq_class f = m[i][c] / m[r][c];
      for (std::size_t k = c; k < cols; ++k) m[i][k] -= f * m[r][k];
    }
    ++r;
  }
  return r;
}

/// Monomials of total degree d in n variables.
inline std::vector<std::vector<int>> monomials(int n, int d) {
  std::vector<std::vector<int>> out;
  if (d < 0) return out;
  std::vector<int> e(static_cast<std::size_t>(n), 0);
  auto rec = [&](auto &&self, int var, int left) -> void {
    if (var == n - 1) {
      e[static_cast<std::size_t>(var)] = left;
      out.push_back(e);
      return;
    }
    for (int k = left; k >= 0; --k) {
      e[static_cast<std::size_t>(var)] = k;
      self(self, var + 1, left - k);
    }
  };
  if (n == 0) {
    if (d == 0) out.push_back({});
    return out;
  }
  rec(rec, 0, d);
  return out;
}

/// Subsets of {0..n-1} of size p, as sorted vectors (exterior algebra basis).
inline std::vector<std::vector<int>> subsets(int n, int p) {
  std::vector<std::vector<int>> out;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != p) continue;
    std::vector<int> s;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) s.push_back(i);
    out.push_back(s);
  }
  return out;
}

/// Koszul complex of k[x_1..x_n] resolving the residue field generated in
/// degree i, truncated to degrees <= hi: K_p in degree t is Λ^p(k^n) ⊗ S_{t-i-p},
/// with d(e_S ⊗ f) = Σ_r (-1)^r e_{S∖s_r} ⊗ x_{s_r} f. The oracle verifies
/// d∘d = 0 and that the homology is k in (p, t) = (0, i) and zero elsewhere,
/// then reports the Betti numbers as the exterior-power dimensions.
struct KoszulResult {
  bool exact = true;
  std::map<std::pair<int, int>, std::size_t> betti;
};

inline KoszulResult koszul_betti(int n, int i, int hi) {
  KoszulResult res;
  auto basis = [&](int p, int t) {
    std::vector<std::pair<std::vector<int>, std::vector<int>>> b;
    for (const auto &s : subsets(n, p))
      for (const auto &mono : monomials(n, t - i - p)) b.emplace_back(s, mono);
    return b;
  };
  // Differential K_p -> K_{p-1} in degree t.
  auto diff = [&](int p, int t) {
    const auto src = basis(p, t), dst = basis(p - 1, t);
    std::map<std::pair<std::vector<int>, std::vector<int>>, std::size_t> index;
    for (std::size_t r = 0; r < dst.size(); ++r) index[dst[r]] = r;
    Matrix m(dst.size(), std::vector<mpq_class>(src.size(), 0));
    for (std::size_t c = 0; c < src.size(); ++c) {
      const auto &[s, mono] = src[c];
      for (std::size_t r = 0; r < s.size(); ++r) {
        std::vector<int> rest = s;
        rest.erase(rest.begin() + static_cast<long>(r));
        std::vector<int> m2 = mono;
        ++m2[static_cast<std::size_t>(s[r])];
        m[index.at({rest, m2})][c] += (r % 2 == 0) ? 1 : -1;
      }
    }
    return m;
  };
  for (int t = i; t <= hi; ++t) {
    std::vector<std::size_t> ranks(static_cast<std::size_t>(n + 2), 0); // ranks[p] = rank d_p
    for (int p = 1; p <= n; ++p) ranks[static_cast<std::size_t>(p)] = rank(diff(p, t));
    for (int p = 2; p <= n; ++p) {
      const Matrix a = diff(p - 1, t), b = diff(p, t);
      for (std::size_t r = 0; r < a.size(); ++r)
        for (std::size_t c = 0; c < (b.empty() ? 0 : b[0].size()); ++c) {
          mpq_class s = 0;
          for (std::size_t k = 0; k < b.size(); ++k) s += a[r][k] * b[k][c];
          if (s != 0) res.exact = false;
        }
    }
    for (int p = 0; p <= n; ++p) {
      const std::size_t dim = basis(p, t).size();
      const std::size_t h = dim - ranks[static_cast<std::size_t>(p)] - ranks[static_cast<std::size_t>(p + 1)];
      const std::size_t expected = (p == 0 && t == i) ? 1 : 0;
      if (h != expected) res.exact = false;
    }
  }
  for (int p = 0; p <= n; ++p)
    if (i + p <= hi) res.betti[{p, i + p}] = subsets(n, p).size();
  return res;
}

/// Graded local cohomology of k[x] (generator in degree j) from the Čech
/// complex k[x] -> k[x, x^{-1}], degreewise: returns dim H^q in degree t.
inline std::size_t cech_poly1(int q, int j, int t) {
  const int e = t - j;                  // exponent of x
  const std::size_t c0 = e >= 0 ? 1 : 0; // k[x]_e
  const std::size_t c1 = 1;              // k[x, x^{-1}]_e
  const std::size_t rk = c0;             // the inclusion is injective
  if (q == 0) return c0 - rk;
  if (q == 1) return c1 - rk;
  return 0;
}

} // namespace oracle
