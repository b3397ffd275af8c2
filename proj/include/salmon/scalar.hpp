#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

namespace salmon {

enum class ScalarKind { Rational, PrimeField, Float64 };

class Scalar;

/// The arithmetic domain a value lives in: Q, GF(p) for an odd prime p, or IEEE doubles.
class Field {
 public:
  static Field rational() { return Field(ScalarKind::Rational, 0); }
  /// Throws DomainError unless p is an odd prime.
  static Field prime(std::uint64_t p);
  static Field float64() { return Field(ScalarKind::Float64, 0); }

  ScalarKind kind() const { return kind_; }
  std::uint64_t modulus() const { return modulus_; }
  bool is_exact() const { return kind_ != ScalarKind::Float64; }
  bool is_rational() const { return kind_ == ScalarKind::Rational; }
  bool is_prime_field() const { return kind_ == ScalarKind::PrimeField; }

  /// "rational", "gfp(2147483647)" or "float".
  std::string name() const;

  Scalar zero() const;
  Scalar one() const;
  Scalar from_int(std::int64_t v) const;
  Scalar from_mpz(const mpz_class& v) const;
  /// Image of a rational in this field. For GF(p) the denominator must be a unit.
  Scalar from_rational(const mpq_class& v) const;
  /// Parse "a", "-a", "a/b" (rational), an integer (GF(p)) or a decimal (float).
  Scalar parse(std::string_view text) const;

  bool operator==(const Field&) const = default;

 private:
  friend class Scalar;
  Field(ScalarKind k, std::uint64_t p) : kind_(k), modulus_(p) {}
  ScalarKind kind_;
  std::uint64_t modulus_;
};

/// Residue class r mod p, 0 <= r < p.
struct Residue {
  std::uint64_t value;
  std::uint64_t modulus;
};

/// A value tagged with its field. Rationals are kept canonical (lowest terms,
/// positive denominator). Arithmetic across different fields throws ModeMismatch.
class Scalar {
 public:
  Scalar() : v_(mpq_class(0)) {}
  explicit Scalar(mpq_class q) : v_(std::move(q)) { std::get<mpq_class>(v_).canonicalize(); }
  explicit Scalar(Residue r);
  explicit Scalar(double d) : v_(d) {}

  static Scalar rational(long num, long den = 1);

  ScalarKind kind() const { return static_cast<ScalarKind>(v_.index()); }
  Field field() const;

  bool is_zero() const;
  bool is_one() const;

  const mpq_class& rational_value() const;
  std::uint64_t residue_value() const;
  double float_value() const;
  /// Lossy conversion used by the float layer; residues map to their symmetric representative.
  double to_double() const;

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  /// Throws DomainError on division by zero in exact modes.
  Scalar operator/(const Scalar& o) const;
  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

  Scalar inverse() const;
  Scalar pow(unsigned e) const;

  /// Exact equality; values in different fields compare unequal.
  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  /// "a" or "a/b" for rationals, "r" for residues, round-trip decimal for floats.
  std::string to_string() const;

 private:
  void require_same_field(const Scalar& o) const;
  std::variant<mpq_class, Residue, double> v_;
};

/// Image of `s` in `target`: identity, Q -> GF(p), Q -> float or GF(p) -> float.
/// Throws ModeMismatch for any other direction.
Scalar convert_scalar(const Scalar& s, const Field& target);

}  // namespace salmon
