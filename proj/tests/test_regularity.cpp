#include "doctest.h"
#include "zhom/regularity.hpp"

using namespace zhom;

namespace {

const Window kWin{-2, 14, 2};

void check_regular(const RegularityReport &r, int d, int l) {
  CHECK_MESSAGE(r.regular, r.witness);
  CHECK(r.d == d);
  CHECK(r.l == l);
  CHECK(r.offset == -l);
}

} // namespace

TEST_CASE("interior range") {
  auto [a, b] = interior_range(*make_poly(1, kWin), RegularityOptions{});
  CHECK(a == 3);
  CHECK(b == 9);
  CHECK_THROWS_AS(check_as_regular(make_poly(1, Window{0, 8, 2})), WindowTooSmall);
  CHECK_THROWS_AS(check_asf_regular(make_poly(1, Window{0, 8, 2})), WindowTooSmall);
}

TEST_CASE("AS checker") {
  check_regular(check_as_regular(make_poly(1, kWin)), 1, -1);
  check_regular(check_as_regular(make_poly(2, kWin)), 2, -2);
  check_regular(check_as_regular(make_skew(Field::rationals().from_int(2), kWin)), 2, -2);
  check_regular(check_as_regular(make_trivial(kWin)), 0, 0);
  auto nil = check_as_regular(make_nil(kWin));
  CHECK_FALSE(nil.regular);
  CHECK(nil.witness.find("window-limited") != std::string::npos);
  // Per-index tables carry the single Ext cell.
  auto p1 = check_as_regular(make_poly(1, kWin));
  for (const auto &ir : p1.indices) {
    REQUIRE(ir.nonzero.size() == 1);
    CHECK(ir.nonzero[0].index == ir.i + 1);
  }
}

TEST_CASE("ASF checker") {
  check_regular(check_asf_regular(make_poly(1, kWin)), 1, -1);
  check_regular(check_asf_regular(make_poly(2, kWin)), 2, -2);
  check_regular(check_asf_regular(make_skew(Field::rationals().from_int(2), kWin)), 2, -2);
  check_regular(check_asf_regular(make_trivial(kWin)), 0, 0);
  auto nil = check_asf_regular(make_nil(kWin));
  CHECK_FALSE(nil.regular);
}

TEST_CASE("ASF detects a non-Gorenstein algebra of finite global dimension") {
  // k<x,y>/(xy): global dimension 2 but Ext^2(k, A) is not one-dimensional.
  std::map<int, std::size_t> gens;
  std::vector<RelationSpace> rels;
  for (int i = kWin.lo; i < kWin.hi; ++i) gens[i] = 2;
  for (int i = kWin.lo; i + 2 <= kWin.hi; ++i) rels.push_back({i, i + 2, {{Scalar(), Scalar(), Scalar(), Scalar()}}});
  auto f = Field::rationals();
  for (auto &r : rels) r.vectors[0] = {f.zero(), f.one(), f.zero(), f.zero()};
  auto a = make_adjacent_presentation(gens, rels, kWin);
  REQUIRE(validate(*a).ok());
  auto as = check_as_regular(a);
  auto asf = check_asf_regular(a);
  CHECK_FALSE(as.regular);
  CHECK_FALSE(asf.regular);
}

TEST_CASE("a relation above the interior is seen by both checks") {
  // k[x] with the single extra relation x_10 x_11 = 0: every interior e_iA_0
  // still has pd 1, but e_3A becomes torsion and e_10A_0 has pd 2.
  std::map<int, std::size_t> gens;
  std::vector<RelationSpace> rels;
  for (int i = kWin.lo; i < kWin.hi; ++i) gens[i] = 1;
  rels.push_back({10, 12, {{Field::rationals().one()}}});
  auto a = make_adjacent_presentation(gens, rels, kWin);
  REQUIRE(validate(*a).ok());
  auto as = check_as_regular(a);
  CHECK_FALSE(as.regular);
  CHECK(as.witness.find("e_10A_0") != std::string::npos);
  CHECK_FALSE(check_asf_regular(a).regular);
}

TEST_CASE("equivalence suite") {
  for (int n = 1; n <= 2; ++n) {
    auto rep = verify_equivalence_suite(make_poly(n, kWin));
    CHECK(rep.agree);
    CHECK(rep.generator_identity);
    check_regular(rep.as_opposite, n, -n);
    check_regular(rep.asf_opposite, n, -n);
  }
  auto nil = verify_equivalence_suite(make_nil(kWin));
  CHECK(nil.agree);
  CHECK_FALSE(nil.as.regular);
  CHECK_FALSE(nil.asf_opposite.regular);
  auto k = verify_equivalence_suite(make_trivial(kWin));
  CHECK(k.agree);
}

TEST_CASE("local duality over k[x]") {
  auto p1 = make_poly(1, kWin);
  auto as = check_as_regular(p1);
  auto engine = LocalCohomologyEngine::create(p1, LocalCohomologyOptions{2, 2, 0});
  for (int i = 0; i <= 4; ++i) {
    for (const auto &m : {free_row(p1, i), augmentation(p1).row(i), quotient_bimodule(p1, 3).row(i)}) {
      auto rep = verify_local_duality(p1, m, as, engine);
      CHECK_FALSE(rep.cells.empty());
      CHECK(rep.dims_match());
      CHECK(rep.matched());
    }
  }
  // e_iA: only q = 1 is nonzero on the left.
  auto rep = verify_local_duality(p1, free_row(p1, 2), as, engine);
  for (const auto &c : rep.cells)
    if (c.q == 0) CHECK(c.lhs == 0);
  // Simple module: q = 0 carries D(e_iA_0), one-dimensional in degree i.
  auto simple = verify_local_duality(p1, augmentation(p1).row(2), as, engine);
  for (const auto &c : simple.cells) CHECK(c.lhs == ((c.q == 0 && c.i == 2) ? 1u : 0u));
  auto zero = verify_local_duality(p1, GradedModule(p1, Side::Right, std::vector<std::size_t>(17, 0)), as, engine);
  CHECK(zero.matched());
  for (const auto &c : zero.cells) CHECK(c.lhs + c.rhs == 0);
}

TEST_CASE("local duality requires a regular verdict") {
  auto nil = make_nil(kWin);
  auto as = check_as_regular(nil);
  CHECK_THROWS_AS(verify_local_duality(nil, free_row(nil, 3), as), RequiresRegular);
}

TEST_CASE("vanishing of Ext out of the truncations for regular algebras") {
  for (int n = 1; n <= 2; ++n) {
    auto a = make_poly(n, kWin);
    for (int k = 1; k <= 3; ++k)
      for (int q = 0; q <= n + 1; ++q) {
        if (q == n) continue;
        auto g = ext_graded_quotient(a, k, free_row(a, 8), q);
        for (const auto &v : g.quotient)
          if (v) CHECK(*v == 0);
      }
  }
}
