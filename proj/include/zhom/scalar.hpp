#pragma once

#include <cstdint>
#include <gmpxx.h>
#include <stdexcept>
#include <string>
#include <variant>

namespace zhom {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DivisionByZero : public Error {
public:
  DivisionByZero() : Error("division by zero") {}
};

class MixedFields : public Error {
public:
  MixedFields() : Error("operands belong to different fields") {}
};

class Scalar;

/// The base field: the rationals or a prime field GF(p) with p > 2.
class Field {
public:
  enum class Kind { Rational, Prime };

  static Field rationals() { return Field{Kind::Rational, 0}; }
  /// Throws zhom::Error unless p is an odd prime.
  static Field prime(std::uint64_t p);

  Kind kind() const { return kind_; }
  std::uint64_t characteristic() const { return p_; }
  bool is_rational() const { return kind_ == Kind::Rational; }

  Scalar zero() const;
  Scalar one() const;
  Scalar from_int(long long v) const;
  /// Parses "a", "-a", "a/b" (b != 0). Over GF(p) the value is reduced mod p.
  Scalar parse(const std::string &text) const;

  std::string name() const;

  friend bool operator==(const Field &, const Field &) = default;

private:
  friend class Scalar;
  Field(Kind k, std::uint64_t p) : kind_(k), p_(p) {}
  Kind kind_;
  std::uint64_t p_;
};

/// Exact field element. Rationals are kept in lowest terms with a positive
/// denominator; machine-sized values avoid GMP entirely. Residues live in [0, p).
class Scalar {
public:
  Scalar() : v_(Small{0, 1}) {}

  Field field() const;
  bool is_zero() const;
  bool is_one() const;

  Scalar operator+(const Scalar &o) const;
  Scalar operator-(const Scalar &o) const;
  Scalar operator*(const Scalar &o) const;
  Scalar operator/(const Scalar &o) const;
  Scalar operator-() const;
  Scalar inv() const;

  Scalar &operator+=(const Scalar &o) { return *this = *this + o; }
  Scalar &operator-=(const Scalar &o) { return *this = *this - o; }
  Scalar &operator*=(const Scalar &o) { return *this = *this * o; }

  bool operator==(const Scalar &o) const;
  bool operator!=(const Scalar &o) const { return !(*this == o); }

  std::string to_string() const;

private:
  friend class Field;

  struct Small {
    std::int64_t num;
    std::int64_t den;
  };
  struct Residue {
    std::uint64_t value;
    std::uint64_t p;
  };

  explicit Scalar(Small s) : v_(s) {}
  explicit Scalar(Residue r) : v_(r) {}
  explicit Scalar(mpq_class q);

  static Scalar from_rational(mpq_class q);
  static Scalar from_i128(__int128 num, __int128 den);
  mpq_class as_mpq() const;
  bool is_rational() const { return !std::holds_alternative<Residue>(v_); }

  std::variant<Small, mpq_class, Residue> v_;
};

} // namespace zhom
