#include "doctest.h"
#include "zhom/scalar.hpp"

#include <random>

using namespace zhom;

TEST_CASE("rational arithmetic is exact") {
  Field q = Field::rationals();
  CHECK((q.parse("1/2") + q.parse("1/3")).to_string() == "5/6");
  CHECK((q.parse("2/4")).to_string() == "1/2");
  CHECK((q.parse("3/-6")).to_string() == "-1/2");
  CHECK_THROWS_AS(q.zero().inv(), DivisionByZero);
  CHECK_THROWS_AS(q.one() / q.zero(), DivisionByZero);
}

TEST_CASE("rationals promote to big integers without overflow") {
  Field q = Field::rationals();
  Scalar big = q.from_int(1LL << 62);
  Scalar sq = big * big * big;
  CHECK(sq.to_string() == "98079714615416886934934209737619787751599303819750539264");
  CHECK((sq / big / big) == big);
  CHECK(((sq + q.one()) - sq).is_one());
}

TEST_CASE("prime field arithmetic") {
  Field f = Field::prime(7);
  CHECK(f.from_int(3).inv() == f.from_int(5));
  CHECK(f.from_int(-1) == f.from_int(6));
  CHECK(f.parse("1/2") == f.from_int(4));
  CHECK_THROWS_AS(f.zero().inv(), DivisionByZero);
  CHECK_THROWS(Field::prime(2));
  CHECK_THROWS(Field::prime(9));
  CHECK_NOTHROW(Field::prime(1000000007));
}

TEST_CASE("mixing fields is rejected") {
  CHECK_THROWS_AS(Field::rationals().one() + Field::prime(5).one(), MixedFields);
  CHECK_THROWS_AS(Field::prime(3).one() * Field::prime(5).one(), MixedFields);
}

TEST_CASE("field axioms hold on random elements") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long long> dist(-1000000, 1000000);
  for (Field f : {Field::rationals(), Field::prime(101), Field::prime(2305843009213693951ULL)}) {
    for (int it = 0; it < 300; ++it) {
      auto rnd = [&] {
        Scalar d = f.from_int(dist(rng));
        if (d.is_zero()) d = f.one();
        return f.from_int(dist(rng)) / d;
      };
      Scalar a = rnd(), b = rnd(), c = rnd();
      CHECK((a + b) + c == a + (b + c));
      CHECK((a * b) * c == a * (b * c));
      CHECK(a + b == b + a);
      CHECK(a * b == b * a);
      CHECK(a * (b + c) == a * b + a * c);
      CHECK((a - a).is_zero());
      if (!a.is_zero()) CHECK((a * a.inv()).is_one());
    }
  }
}
