#include "zhom/scalar.hpp"

#include <limits>

namespace zhom {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

u128 uabs(i128 v) { return v < 0 ? u128(-(v + 1)) + 1 : u128(v); }

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

constexpr i128 kMax64 = std::numeric_limits<std::int64_t>::max();
constexpr i128 kMin64 = std::numeric_limits<std::int64_t>::min();

bool fits64(i128 v) { return v >= kMin64 && v <= kMax64; }

mpz_class mpz_from_i128(i128 v) {
  u128 mag = uabs(v);
  mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(mag >> 64)));
  mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(mag)));
  mpz_class r = (hi << 64) + lo;
  return v < 0 ? mpz_class(-r) : r;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((u128(a) * b) % p);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic Miller-Rabin bases for 64-bit inputs.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

} // namespace

Field Field::prime(std::uint64_t p) {
  if (p <= 2 || !is_prime(p))
    throw Error("GF(p) requires an odd prime p, got " + std::to_string(p));
  if (p >= (1ULL << 62)) throw Error("prime too large: " + std::to_string(p));
  return Field{Kind::Prime, p};
}

Scalar Field::zero() const { return from_int(0); }
Scalar Field::one() const { return from_int(1); }

Scalar Field::from_int(long long v) const {
  if (kind_ == Kind::Rational) return Scalar(Scalar::Small{v, 1});
  long long r = v % static_cast<long long>(p_);
  if (r < 0) r += static_cast<long long>(p_);
  return Scalar(Scalar::Residue{static_cast<std::uint64_t>(r), p_});
}

Scalar Field::parse(const std::string &text) const {
  mpq_class q;
  if (q.set_str(text, 10) != 0) throw Error("not a number: '" + text + "'");
  if (q.get_den() == 0) throw DivisionByZero();
  q.canonicalize();
  if (kind_ == Kind::Rational) return Scalar::from_rational(q);
  mpz_class pz(static_cast<unsigned long>(p_));
  mpz_class num = q.get_num() % pz;
  if (num < 0) num += pz;
  mpz_class den = q.get_den() % pz;
  if (den == 0) throw DivisionByZero();
  Scalar n(Scalar::Residue{num.get_ui(), p_});
  Scalar d(Scalar::Residue{den.get_ui(), p_});
  return n / d;
}

std::string Field::name() const {
  return kind_ == Kind::Rational ? std::string("Q") : "GF(" + std::to_string(p_) + ")";
}

Scalar::Scalar(mpq_class q) : v_(std::move(q)) {}

Scalar Scalar::from_rational(mpq_class q) {
  if (q.get_num().fits_slong_p() && q.get_den().fits_slong_p())
    return Scalar(Small{q.get_num().get_si(), q.get_den().get_si()});
  return Scalar(std::move(q));
}

Scalar Scalar::from_i128(i128 num, i128 den) {
  if (den == 0) throw DivisionByZero();
  if (den < 0) {
    num = -num;
    den = -den;
  }
  u128 g = gcd128(uabs(num), u128(den));
  if (g > 1) {
    num /= static_cast<i128>(g);
    den /= static_cast<i128>(g);
  }
  if (fits64(num) && fits64(den))
    return Scalar(Small{static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)});
  mpq_class q(mpz_from_i128(num), mpz_from_i128(den));
  return Scalar(std::move(q));
}

mpq_class Scalar::as_mpq() const {
  if (auto s = std::get_if<Small>(&v_)) {
    mpq_class q(mpz_class(static_cast<long>(s->num)), mpz_class(static_cast<long>(s->den)));
    return q;
  }
  return std::get<mpq_class>(v_);
}

Field Scalar::field() const {
  if (auto r = std::get_if<Residue>(&v_)) return Field{Field::Kind::Prime, r->p};
  return Field::rationals();
}

bool Scalar::is_zero() const {
  if (auto s = std::get_if<Small>(&v_)) return s->num == 0;
  if (auto r = std::get_if<Residue>(&v_)) return r->value == 0;
  return false; // canonical big rationals never fit in Small, so they are nonzero
}

bool Scalar::is_one() const {
  if (auto s = std::get_if<Small>(&v_)) return s->num == 1 && s->den == 1;
  if (auto r = std::get_if<Residue>(&v_)) return r->value == 1;
  return false;
}

Scalar Scalar::operator+(const Scalar &o) const {
  if (auto a = std::get_if<Residue>(&v_)) {
    auto b = std::get_if<Residue>(&o.v_);
    if (!b || b->p != a->p) throw MixedFields();
    std::uint64_t s = a->value + b->value;
    if (s >= a->p) s -= a->p;
    return Scalar(Residue{s, a->p});
  }
  if (!o.is_rational()) throw MixedFields();
  auto a = std::get_if<Small>(&v_);
  auto b = std::get_if<Small>(&o.v_);
  if (a && b) {
    if (a->den == 1 && b->den == 1) {
      i128 s = i128(a->num) + b->num;
      if (fits64(s)) return Scalar(Small{static_cast<std::int64_t>(s), 1});
    }
    return from_i128(i128(a->num) * b->den + i128(b->num) * a->den, i128(a->den) * b->den);
  }
  return from_rational(as_mpq() + o.as_mpq());
}

Scalar Scalar::operator-() const {
  if (auto r = std::get_if<Residue>(&v_)) return Scalar(Residue{r->value == 0 ? 0 : r->p - r->value, r->p});
  if (auto s = std::get_if<Small>(&v_)) return from_i128(-i128(s->num), s->den);
  return from_rational(-std::get<mpq_class>(v_));
}

Scalar Scalar::operator-(const Scalar &o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar &o) const {
  if (auto a = std::get_if<Residue>(&v_)) {
    auto b = std::get_if<Residue>(&o.v_);
    if (!b || b->p != a->p) throw MixedFields();
    return Scalar(Residue{mulmod(a->value, b->value, a->p), a->p});
  }
  if (!o.is_rational()) throw MixedFields();
  auto a = std::get_if<Small>(&v_);
  auto b = std::get_if<Small>(&o.v_);
  if (a && b) return from_i128(i128(a->num) * b->num, i128(a->den) * b->den);
  return from_rational(as_mpq() * o.as_mpq());
}

Scalar Scalar::inv() const {
  if (is_zero()) throw DivisionByZero();
  if (auto r = std::get_if<Residue>(&v_)) return Scalar(Residue{powmod(r->value, r->p - 2, r->p), r->p});
  if (auto s = std::get_if<Small>(&v_)) return from_i128(s->den, s->num);
  return from_rational(1 / std::get<mpq_class>(v_));
}

Scalar Scalar::operator/(const Scalar &o) const {
  if (is_rational() != o.is_rational()) throw MixedFields();
  return *this * o.inv();
}

bool Scalar::operator==(const Scalar &o) const {
  if (auto a = std::get_if<Residue>(&v_)) {
    auto b = std::get_if<Residue>(&o.v_);
    if (!b || b->p != a->p) throw MixedFields();
    return a->value == b->value;
  }
  if (!o.is_rational()) throw MixedFields();
  auto a = std::get_if<Small>(&v_);
  auto b = std::get_if<Small>(&o.v_);
  if (a && b) return a->num == b->num && a->den == b->den;
  return as_mpq() == o.as_mpq();
}

std::string Scalar::to_string() const {
  if (auto r = std::get_if<Residue>(&v_)) return std::to_string(r->value);
  if (auto s = std::get_if<Small>(&v_)) {
    if (s->den == 1) return std::to_string(s->num);
    return std::to_string(s->num) + "/" + std::to_string(s->den);
  }
  return std::get<mpq_class>(v_).get_str();
}

} // namespace zhom
