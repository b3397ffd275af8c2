#include "salmon/scalar.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "salmon/errors.hpp"
#include "salmon/modarith.hpp"

namespace salmon {

namespace modp {

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
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = pow(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

}  // namespace modp

namespace {

std::uint64_t mpz_mod_u64(const mpz_class& v, std::uint64_t p) {
  mpz_class r;
  mpz_class pm;
  mpz_import(pm.get_mpz_t(), 1, 1, sizeof(p), 0, 0, &p);
  mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), pm.get_mpz_t());
  std::uint64_t out = 0;
  std::size_t count = 0;
  mpz_export(&out, &count, 1, sizeof(out), 0, 0, r.get_mpz_t());
  return count == 0 ? 0 : out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

mpz_class parse_integer(std::string_view s) {
  s = trim(s);
  std::string buf(s);
  if (!buf.empty() && buf[0] == '+') buf.erase(0, 1);
  if (buf.empty()) throw ParseError("empty integer literal");
  std::size_t start = (buf[0] == '-') ? 1 : 0;
  if (start == buf.size()) throw ParseError("bad integer literal '" + std::string(s) + "'");
  for (std::size_t i = start; i < buf.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(buf[i]))) {
      throw ParseError("bad integer literal '" + std::string(s) + "'");
    }
  }
  return mpz_class(buf, 10);
}

}  // namespace

Field Field::prime(std::uint64_t p) {
  if (p < 3 || !modp::is_prime(p)) {
    throw DomainError("modulus " + std::to_string(p) + " is not an odd prime");
  }
  return Field(ScalarKind::PrimeField, p);
}

std::string Field::name() const {
  switch (kind_) {
    case ScalarKind::Rational:
      return "rational";
    case ScalarKind::PrimeField:
      return "gfp(" + std::to_string(modulus_) + ")";
    case ScalarKind::Float64:
      return "float";
  }
  return "?";
}

Scalar Field::zero() const { return from_int(0); }
Scalar Field::one() const { return from_int(1); }

Scalar Field::from_int(std::int64_t v) const {
  switch (kind_) {
    case ScalarKind::Rational:
      return Scalar(mpq_class(mpz_class(static_cast<long>(v))));
    case ScalarKind::PrimeField:
      return Scalar(Residue{modp::from_signed(v, modulus_), modulus_});
    case ScalarKind::Float64:
      return Scalar(static_cast<double>(v));
  }
  return {};
}

Scalar Field::from_mpz(const mpz_class& v) const {
  switch (kind_) {
    case ScalarKind::Rational:
      return Scalar(mpq_class(v));
    case ScalarKind::PrimeField:
      return Scalar(Residue{mpz_mod_u64(v, modulus_), modulus_});
    case ScalarKind::Float64:
      return Scalar(v.get_d());
  }
  return {};
}

Scalar Field::from_rational(const mpq_class& v) const {
  switch (kind_) {
    case ScalarKind::Rational:
      return Scalar(v);
    case ScalarKind::PrimeField: {
      std::uint64_t den = mpz_mod_u64(v.get_den(), modulus_);
      if (den == 0) throw DomainError("denominator vanishes modulo " + std::to_string(modulus_));
      std::uint64_t num = mpz_mod_u64(v.get_num(), modulus_);
      return Scalar(Residue{modp::mul(num, modp::inv(den, modulus_), modulus_), modulus_});
    }
    case ScalarKind::Float64:
      return Scalar(v.get_d());
  }
  return {};
}

Scalar Field::parse(std::string_view text) const {
  std::string_view s = trim(text);
  if (kind_ == ScalarKind::Float64) {
    std::string buf(s);
    char* end = nullptr;
    double d = std::strtod(buf.c_str(), &end);
    if (buf.empty() || end != buf.c_str() + buf.size()) {
      throw ParseError("bad float literal '" + buf + "'");
    }
    return Scalar(d);
  }
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return from_mpz(parse_integer(s));
  mpz_class num = parse_integer(s.substr(0, slash));
  mpz_class den = parse_integer(s.substr(slash + 1));
  if (den == 0) throw ParseError("zero denominator in '" + std::string(s) + "'");
  return from_rational(mpq_class(num, den));
}

Scalar::Scalar(Residue r) : v_(r) {
  if (r.value >= r.modulus) std::get<Residue>(v_).value = r.value % r.modulus;
}

Scalar Scalar::rational(long num, long den) {
  if (den == 0) throw DomainError("zero denominator");
  return Scalar(mpq_class(num, den));
}

Field Scalar::field() const {
  switch (kind()) {
    case ScalarKind::Rational:
      return Field::rational();
    case ScalarKind::PrimeField:
      return Field(ScalarKind::PrimeField, std::get<Residue>(v_).modulus);
    case ScalarKind::Float64:
      return Field::float64();
  }
  return Field::rational();
}

bool Scalar::is_zero() const {
  switch (kind()) {
    case ScalarKind::Rational:
      return sgn(std::get<mpq_class>(v_)) == 0;
    case ScalarKind::PrimeField:
      return std::get<Residue>(v_).value == 0;
    case ScalarKind::Float64:
      return std::get<double>(v_) == 0.0;
  }
  return false;
}

bool Scalar::is_one() const {
  switch (kind()) {
    case ScalarKind::Rational:
      return std::get<mpq_class>(v_) == 1;
    case ScalarKind::PrimeField:
      return std::get<Residue>(v_).value == 1;
    case ScalarKind::Float64:
      return std::get<double>(v_) == 1.0;
  }
  return false;
}

const mpq_class& Scalar::rational_value() const {
  if (kind() != ScalarKind::Rational) throw ModeMismatch("scalar is not rational");
  return std::get<mpq_class>(v_);
}

std::uint64_t Scalar::residue_value() const {
  if (kind() != ScalarKind::PrimeField) throw ModeMismatch("scalar is not a residue");
  return std::get<Residue>(v_).value;
}

double Scalar::float_value() const {
  if (kind() != ScalarKind::Float64) throw ModeMismatch("scalar is not a float");
  return std::get<double>(v_);
}

double Scalar::to_double() const {
  switch (kind()) {
    case ScalarKind::Rational:
      return std::get<mpq_class>(v_).get_d();
    case ScalarKind::PrimeField: {
      const auto& r = std::get<Residue>(v_);
      return r.value > r.modulus / 2 ? -static_cast<double>(r.modulus - r.value)
                                     : static_cast<double>(r.value);
    }
    case ScalarKind::Float64:
      return std::get<double>(v_);
  }
  return 0.0;
}

void Scalar::require_same_field(const Scalar& o) const {
  if (v_.index() != o.v_.index()) {
    throw ModeMismatch("mixed scalar modes: " + field().name() + " vs " + o.field().name());
  }
  if (kind() == ScalarKind::PrimeField &&
      std::get<Residue>(v_).modulus != std::get<Residue>(o.v_).modulus) {
    throw ModeMismatch("mixed prime moduli: " + field().name() + " vs " + o.field().name());
  }
}

Scalar Scalar::operator+(const Scalar& o) const {
  require_same_field(o);
  switch (kind()) {
    case ScalarKind::Rational: {
      Scalar r;
      mpq_add(std::get<mpq_class>(r.v_).get_mpq_t(), std::get<mpq_class>(v_).get_mpq_t(),
              std::get<mpq_class>(o.v_).get_mpq_t());
      return r;
    }
    case ScalarKind::PrimeField: {
      const auto& a = std::get<Residue>(v_);
      return Scalar(Residue{modp::add(a.value, std::get<Residue>(o.v_).value, a.modulus), a.modulus});
    }
    case ScalarKind::Float64:
      return Scalar(std::get<double>(v_) + std::get<double>(o.v_));
  }
  return {};
}

Scalar Scalar::operator-(const Scalar& o) const {
  require_same_field(o);
  switch (kind()) {
    case ScalarKind::Rational: {
      Scalar r;
      mpq_sub(std::get<mpq_class>(r.v_).get_mpq_t(), std::get<mpq_class>(v_).get_mpq_t(),
              std::get<mpq_class>(o.v_).get_mpq_t());
      return r;
    }
    case ScalarKind::PrimeField: {
      const auto& a = std::get<Residue>(v_);
      return Scalar(Residue{modp::sub(a.value, std::get<Residue>(o.v_).value, a.modulus), a.modulus});
    }
    case ScalarKind::Float64:
      return Scalar(std::get<double>(v_) - std::get<double>(o.v_));
  }
  return {};
}

Scalar Scalar::operator*(const Scalar& o) const {
  require_same_field(o);
  switch (kind()) {
    case ScalarKind::Rational: {
      Scalar r;
      mpq_mul(std::get<mpq_class>(r.v_).get_mpq_t(), std::get<mpq_class>(v_).get_mpq_t(),
              std::get<mpq_class>(o.v_).get_mpq_t());
      return r;
    }
    case ScalarKind::PrimeField: {
      const auto& a = std::get<Residue>(v_);
      return Scalar(Residue{modp::mul(a.value, std::get<Residue>(o.v_).value, a.modulus), a.modulus});
    }
    case ScalarKind::Float64:
      return Scalar(std::get<double>(v_) * std::get<double>(o.v_));
  }
  return {};
}

Scalar Scalar::operator/(const Scalar& o) const {
  require_same_field(o);
  if (o.is_zero() && kind() != ScalarKind::Float64) throw DomainError("division by zero");
  switch (kind()) {
    case ScalarKind::Rational: {
      Scalar r;
      mpq_div(std::get<mpq_class>(r.v_).get_mpq_t(), std::get<mpq_class>(v_).get_mpq_t(),
              std::get<mpq_class>(o.v_).get_mpq_t());
      return r;
    }
    case ScalarKind::PrimeField: {
      const auto& a = std::get<Residue>(v_);
      std::uint64_t p = a.modulus;
      return Scalar(Residue{modp::mul(a.value, modp::inv(std::get<Residue>(o.v_).value, p), p), p});
    }
    case ScalarKind::Float64:
      return Scalar(std::get<double>(v_) / std::get<double>(o.v_));
  }
  return {};
}

Scalar Scalar::operator-() const {
  switch (kind()) {
    case ScalarKind::Rational:
      return Scalar(mpq_class(-std::get<mpq_class>(v_)));
    case ScalarKind::PrimeField: {
      const auto& a = std::get<Residue>(v_);
      return Scalar(Residue{modp::neg(a.value, a.modulus), a.modulus});
    }
    case ScalarKind::Float64:
      return Scalar(-std::get<double>(v_));
  }
  return {};
}

Scalar Scalar::inverse() const { return field().one() / *this; }

Scalar Scalar::pow(unsigned e) const {
  Scalar result = field().one();
  Scalar base = *this;
  while (e) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

bool Scalar::operator==(const Scalar& o) const {
  if (v_.index() != o.v_.index()) return false;
  switch (kind()) {
    case ScalarKind::Rational:
      return std::get<mpq_class>(v_) == std::get<mpq_class>(o.v_);
    case ScalarKind::PrimeField: {
      const auto& a = std::get<Residue>(v_);
      const auto& b = std::get<Residue>(o.v_);
      return a.modulus == b.modulus && a.value == b.value;
    }
    case ScalarKind::Float64:
      return std::get<double>(v_) == std::get<double>(o.v_);
  }
  return false;
}

std::string Scalar::to_string() const {
  switch (kind()) {
    case ScalarKind::Rational:
      return std::get<mpq_class>(v_).get_str();
    case ScalarKind::PrimeField:
      return std::to_string(std::get<Residue>(v_).value);
    case ScalarKind::Float64: {
      char buf[32];
      auto res = std::to_chars(buf, buf + sizeof buf, std::get<double>(v_));
      return std::string(buf, res.ptr);
    }
  }
  return {};
}

}  // namespace salmon
