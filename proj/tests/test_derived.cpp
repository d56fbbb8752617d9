#include "doctest.h"
#include "oracles.hpp"
#include "zhom/derived.hpp"

using namespace zhom;

namespace {

const Window kWin{-2, 14, 2};

std::vector<AlgebraPtr> builtins(const Window &w) {
  return {make_trivial(w), make_poly(1, w), make_poly(2, w), make_skew(Field::rationals().from_int(2), w), make_nil(w)};
}

} // namespace

TEST_CASE("Ext from free modules and simples") {
  auto p1 = make_poly(1, kWin);
  auto p2 = make_poly(2, kWin);
  // Ext^0(e_iA, N) ≅ N_i
  auto n = quotient_bimodule(p2, 3).row(1);
  auto r = minimal_free_resolution(free_row(p2, 2));
  CHECK(ext_dim(r, n, 0) == n.dim(2));
  CHECK(ext_dim(r, n, 1) == 0);
  // Poly(1): Ext^1(e_iA_0, e_jA) is one-dimensional exactly when j = i + 1.
  for (int i = 0; i <= 6; ++i) {
    auto ri = minimal_free_resolution(augmentation(p1).row(i));
    for (int j = kWin.lo; j <= kWin.hi; ++j) {
      CHECK(ext_dim(ri, free_row(p1, j), 0) == 0);
      CHECK(ext_dim(ri, free_row(p1, j), 1) == (j == i + 1 ? 1u : 0u));
    }
  }
  // Poly(2): only Ext^2 at j = i + 2 survives.
  for (int i = 0; i <= 6; ++i) {
    auto ri = minimal_free_resolution(augmentation(p2).row(i));
    for (int j = kWin.lo; j <= kWin.hi; ++j) {
      CHECK(ext_dim(ri, free_row(p2, j), 0) == 0);
      CHECK(ext_dim(ri, free_row(p2, j), 1) == 0);
      CHECK(ext_dim(ri, free_row(p2, j), 2) == (j == i + 2 ? 1u : 0u));
      CHECK(ext_dim(ri, free_row(p2, j), 3) == 0);
    }
  }
}

TEST_CASE("Ext refuses what the window cannot see") {
  auto nil = make_nil(kWin);
  auto r = minimal_free_resolution(augmentation(nil).row(0), 3);
  CHECK_THROWS_AS(ext_dim(r, free_row(nil, 2), 3), ResolutionTruncated);
  CHECK_NOTHROW(ext_dim(r, free_row(nil, 2), 2));
  auto p1 = make_poly(1, kWin);
  auto top = minimal_free_resolution(augmentation(p1).row(12));
  CHECK(top.status == ResolutionStatus::WindowTruncated);
  CHECK_THROWS_AS(ext_dim(top, free_row(p1, 13), 1), ResolutionTruncated);
  // A target supported inside the window is fine.
  CHECK(ext_dim(top, augmentation(p1).row(13), 1) == 1);
}

TEST_CASE("Tor against the augmentation recovers the Betti numbers") {
  for (const auto &a : builtins(kWin)) {
    auto aug = augmentation(a);
    auto r = minimal_free_resolution(aug.row(3), 5);
    for (int p = 0; p <= 4; ++p) {
      auto t = tor(r, aug, p);
      for (int j = kWin.lo; j <= kWin.hi; ++j) CHECK(t[static_cast<std::size_t>(j - kWin.lo)] == r.betti(p, j));
    }
    // Tor of a free module vanishes in positive degrees.
    auto f = minimal_free_resolution(free_row(a, 4));
    for (int p = 1; p <= 3; ++p)
      for (auto d : tor(f, aug, p)) CHECK(d == 0);
    // Tor_0(M, A_0) = M ⊗ A_0.
    auto m = quotient_bimodule(a, 2).row(1);
    auto rm = minimal_free_resolution(m, 2);
    auto t0 = tor(rm, aug, 0);
    for (int j = kWin.lo; j <= kWin.hi; ++j) CHECK(t0[static_cast<std::size_t>(j - kWin.lo)] == tensor_dim(m, aug.col(j)));
  }
}

TEST_CASE("Tor is balanced") {
  const Window w{-2, 10, 2};
  for (const auto &a : builtins(w))
    for (int i = 1; i <= 4; ++i)
      for (int j = i; j <= i + 4; ++j) {
        auto rep = tor_balance_check(a, i, j, 4);
        CHECK(rep.agree());
      }
  auto p1 = make_poly(1, w);
  auto rep = tor_balance_check(p1, 2, 3, 3);
  CHECK(rep.from_right == std::vector<std::size_t>{0, 1, 0, 0});
  auto same = tor_balance_check(p1, 2, 2, 3);
  CHECK(same.from_right == std::vector<std::size_t>{1, 0, 0, 0});
  // The batched table reproduces the pairwise checks.
  for (const auto &a : builtins(w)) {
    const auto table = tor_balance_table(a, 1, 4, 3);
    REQUIRE(table.size() == 16);
    for (const auto &t : table) {
      const auto single = tor_balance_check(a, t.i, t.j, 3);
      CHECK(t.from_right == single.from_right);
      CHECK(t.from_left == single.from_left);
    }
  }
}

TEST_CASE("twisting identity for graded pieces") {
  for (const auto &a : builtins(kWin)) {
    for (int n = 1; n <= 3; ++n)
      for (int q = 0; q <= 2; ++q) {
        auto g = ext_graded_quotient(a, n, free_row(a, 8), q);
        CHECK(g.twisting_holds());
        // n = 1 reduces to the simple modules themselves.
        if (n == 1)
          for (int j = 2; j <= 8; ++j) {
            const auto k = static_cast<std::size_t>(j - kWin.lo);
            if (!g.quotient[k]) continue;
            auto simple = minimal_free_resolution(augmentation(a).row(j), q + 1);
            CHECK(*g.quotient[k] == ext_dim(simple, free_row(a, 8), q));
          }
      }
  }
}

TEST_CASE("long exact sequence of the truncations has zero Euler characteristic") {
  int checked = 0;
  for (const auto &a : builtins(kWin)) {
    for (int n = 1; n <= 3; ++n) {
      const int qmax = 4;
      auto target = free_row(a, 9);
      std::vector<GradedQuotientExt> small, big, piece;
      bool ok = true;
      long long euler = 0;
      for (int q = 0; q <= qmax && ok; ++q) {
        auto s = ext_graded_quotient(a, n, target, q);
        auto b = ext_graded_quotient(a, n + 1, target, q);
        const std::size_t k = static_cast<std::size_t>(2 - kWin.lo); // row j = 2
        if (!s.quotient[k] || !b.quotient[k] || !s.piece[k]) {
          ok = false;
          break;
        }
        const long long sign = q % 2 == 0 ? 1 : -1;
        euler += sign * (static_cast<long long>(*s.quotient[k]) - static_cast<long long>(*b.quotient[k]) +
                         static_cast<long long>(*s.piece[k]));
      }
      if (ok) {
        CHECK(euler == 0);
        ++checked;
      }
    }
  }
  CHECK(checked >= 10);
}

TEST_CASE("local cohomology of the polynomial ring in one variable") {
  auto p1 = make_poly(1, kWin);
  auto engine = LocalCohomologyEngine::create(p1);
  for (int j = 3; j <= 9; ++j) {
    auto lc = engine->compute(free_row(p1, j));
    const auto &t = lc->table();
    for (int i = kWin.lo; i <= t.reliable_hi[1]; ++i) {
      for (int q = 0; q <= 3; ++q) {
        CHECK(t.cell(q, i).stabilized());
        CHECK(t.dim(q, i) == oracle::cech_poly1(q, j, i));
      }
      if (i < j) CHECK(t.cell(1, i).stabilized_at == j - i);
    }
    CHECK(t.reliable_hi[1] >= j);
    auto r1 = lc->module(1);
    CHECK(validate_module(r1).ok());
    // R^1τ(e_jA) ≅ D(Ae_{j-1}) on the reliable range.
    auto expect = restrict_degrees(dual(free_col(p1, j - 1)), kWin.lo, r1.flags.reliable_hi);
    CHECK(module_iso_test(restrict_degrees(r1, kWin.lo, r1.flags.reliable_hi), expect).iso);
  }
}

TEST_CASE("local cohomology of torsion modules") {
  auto p2 = make_poly(2, kWin);
  auto engine = LocalCohomologyEngine::create(p2);
  auto simple = augmentation(p2).row(4);
  auto lc = engine->compute(simple);
  for (int i = kWin.lo; i <= 8; ++i) {
    CHECK(lc->table().dim(0, i) == simple.dim(i));
    for (int q = 1; q <= 3; ++q) CHECK(lc->table().dim(q, i) == 0);
  }
  CHECK(module_iso_test(restrict_degrees(lc->module(0), kWin.lo, 8), restrict_degrees(simple, kWin.lo, 8)).iso);
  auto nil = make_nil(kWin);
  auto en = LocalCohomologyEngine::create(nil);
  auto ln = en->compute(free_row(nil, 5));
  for (int i = kWin.lo; i <= ln->table().reliable_hi[0]; ++i) {
    CHECK(ln->table().dim(0, i) == nil->dim(5, i));
    CHECK(ln->table().dim(1, i) == 0);
  }
}

TEST_CASE("local cohomology bimodule and omega") {
  const Window w{-2, 12, 2};
  auto p1 = make_poly(1, w);
  auto engine = LocalCohomologyEngine::create(p1);
  auto r = engine->bimodule(1);
  CHECK(validate_bimodule(r).ok());
  auto omega = engine->omega(1);
  CHECK(validate_bimodule(omega).ok());
  // ω for k[x] is a shift of A: row i of ω is e_{i+1}A on its reliable part.
  for (int i = w.lo; i <= 4; ++i) {
    auto row = omega.row(i);
    const int top = row.flags.reliable_hi;
    CHECK(top >= i + 2);
    CHECK(module_iso_test(restrict_degrees(row, w.lo, top), restrict_degrees(free_row(p1, i + 1), w.lo, top)).iso);
  }
}
