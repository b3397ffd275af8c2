#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "salmon/scalar.hpp"

namespace salmon {

/// Variable families, in registry order: x < u < p < q.
enum class VarClass : std::uint8_t { X = 0, U = 1, P = 2, Q = 3 };

/// Structured variable name: x(i,j,k), u(j,i), p(a,b) or q(a,b), 1-based indices.
struct VarName {
  VarClass cls;
  std::array<int, 3> idx{0, 0, 0};
  /// "x_1_2_3", "u_4_1", "p_2_3".
  std::string to_string() const;
};

/// Fixed set of variables with a total order: by class, then indices lexicographically.
/// Index ranges are fixed at construction.
class VarRegistry {
 public:
  struct Layout {
    std::array<int, 3> x_dims{0, 0, 0};  // i, j, k ranges
    std::array<int, 2> u_dims{0, 0};     // u(j,i): j range, i range
    int p_dim = 0;                       // p(a,b), a,b in 1..p_dim
    int q_dim = 0;
    bool operator==(const Layout&) const = default;
  };

  static std::shared_ptr<const VarRegistry> make(const Layout& layout);
  /// Registry holding only x(i,j,k) for an m x n x l tensor.
  static std::shared_ptr<const VarRegistry> tensor(int m, int n, int l);

  const Layout& layout() const { return layout_; }
  std::size_t size() const { return names_.size(); }
  const VarName& name(std::size_t id) const { return names_.at(id); }

  std::size_t x(int i, int j, int k) const;
  std::size_t u(int j, int i) const;
  std::size_t p(int a, int b) const;
  std::size_t q(int a, int b) const;
  std::size_t id(const VarName& n) const;
  /// Looks up a textual name like "x_1_2_3".
  std::optional<std::size_t> lookup(std::string_view text) const;
  std::vector<std::size_t> ids_of(VarClass cls) const;

  bool operator==(const VarRegistry& o) const { return layout_ == o.layout_; }

 private:
  explicit VarRegistry(const Layout& layout);
  Layout layout_;
  std::vector<VarName> names_;
  std::array<std::size_t, 4> class_offset_{};
};

using RegistryPtr = std::shared_ptr<const VarRegistry>;

struct VarPower {
  std::uint32_t var;
  std::uint32_t exp;
  bool operator==(const VarPower&) const = default;
};

/// Sparse power product, factors sorted by variable id with positive exponents.
class Monomial {
 public:
  Monomial() = default;
  /// Unsorted input allowed; repeated variables are merged.
  explicit Monomial(std::vector<VarPower> factors);
  static Monomial variable(std::size_t var, std::uint32_t exp = 1);

  std::span<const VarPower> factors() const { return f_; }
  unsigned degree() const;
  std::uint32_t exponent(std::size_t var) const;
  bool is_one() const { return f_.empty(); }

  Monomial operator*(const Monomial& o) const;
  /// this / o when o divides this.
  std::optional<Monomial> divide(const Monomial& o) const;

  bool operator==(const Monomial& o) const { return f_ == o.f_; }
  std::size_t hash() const;

 private:
  std::vector<VarPower> f_;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

/// Graded lexicographic: total degree first, then the monomial with the larger
/// exponent at the smallest differing variable id is larger.
bool grlex_less(const Monomial& a, const Monomial& b);

struct GrlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const { return grlex_less(a, b); }
};

struct Term {
  Monomial mono;
  Scalar coeff;
};

class MultiPoly;

/// Hash-map accumulator for building polynomials term by term.
class PolyBuilder {
 public:
  PolyBuilder(RegistryPtr reg, Field field) : reg_(std::move(reg)), field_(field) {}
  void add(const Monomial& m, const Scalar& c);
  void add(Monomial&& m, const Scalar& c);
  /// Adds coeff * mono * p.
  void add_product(const Scalar& coeff, const Monomial& mono, const MultiPoly& p);
  std::size_t size() const { return acc_.size(); }
  MultiPoly build() &&;

 private:
  RegistryPtr reg_;
  Field field_;
  std::unordered_map<Monomial, Scalar, MonomialHash> acc_;
};

/// Sparse multivariate polynomial over a VarRegistry. Terms are stored in
/// descending grlex order with no zero coefficients.
class MultiPoly {
 public:
  MultiPoly(RegistryPtr reg, Field field) : reg_(std::move(reg)), field_(field) {}

  static MultiPoly constant(RegistryPtr reg, const Scalar& c);
  static MultiPoly variable(RegistryPtr reg, std::size_t var, const Field& field);
  /// Canonicalizes: merges duplicate monomials, drops zeros, sorts.
  static MultiPoly from_terms(RegistryPtr reg, Field field, std::vector<Term> terms);

  const RegistryPtr& registry() const { return reg_; }
  const Field& field() const { return field_; }
  std::span<const Term> terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  /// Maximum total degree; -1 for the zero polynomial.
  int degree() const;
  bool is_homogeneous() const;
  /// Highest term in grlex order (precondition: non-zero).
  const Term& leading_term() const { return terms_.front(); }
  /// Variable ids that occur with positive exponent.
  std::vector<std::size_t> variables() const;

  MultiPoly operator+(const MultiPoly& o) const;
  MultiPoly operator-(const MultiPoly& o) const;
  MultiPoly operator*(const MultiPoly& o) const;
  MultiPoly operator*(const Scalar& s) const;
  MultiPoly operator-() const;
  MultiPoly& operator+=(const MultiPoly& o) { return *this = *this + o; }
  MultiPoly& operator-=(const MultiPoly& o) { return *this = *this - o; }
  bool operator==(const MultiPoly& o) const;
  bool operator!=(const MultiPoly& o) const { return !(*this == o); }

  /// Drops every term containing one of `vars` (substitution var := 0).
  MultiPoly substitute_zero(std::span<const std::size_t> vars) const;
  /// Partial derivative with respect to `var`.
  MultiPoly derivative(std::size_t var) const;
  /// Coefficients mapped into another field (Q -> GF(p), Q -> float).
  MultiPoly convert(const Field& target) const;
  /// Sum of |coefficient| as a double.
  double coeff_l1() const;

  /// Dense evaluation; `values` is indexed by variable id and must cover every
  /// variable that occurs.
  Scalar eval(std::span<const Scalar> values) const;

  /// Line in the polynomial text format, e.g. "3*x_1_1_1^2*x_2_2_1 - 1*x_1_2_3".
  std::string to_text() const;

 private:
  friend class PolyBuilder;
  void require_compatible(const MultiPoly& o) const;
  RegistryPtr reg_;
  Field field_;
  std::vector<Term> terms_;
};

/// q with f = q * g; throws NotDivisible when g does not divide f, DomainError when g = 0.
MultiPoly poly_div_exact(const MultiPoly& f, const MultiPoly& g);

/// Regroups f by monomials in `vars`: f = sum(mono * coeff), coeff free of `vars`.
std::map<Monomial, MultiPoly, GrlexLess> poly_extract_coeffs(const MultiPoly& f,
                                                             std::span<const std::size_t> vars);

/// Evaluation from a sparse assignment; throws DomainError when a variable of f is missing.
Scalar poly_eval(const MultiPoly& f, const std::map<std::size_t, Scalar>& assignment);

/// Parses one line of the polynomial text format. `field` receives the coefficients.
MultiPoly parse_poly(std::string_view line, const RegistryPtr& reg, const Field& field);

/// Parses a whole file: one polynomial per non-blank, non-comment line.
std::vector<MultiPoly> parse_poly_file(std::string_view text, const RegistryPtr& reg, const Field& field);

/// Serializes polynomials one per line, preceded by optional "# " header lines.
std::string format_poly_file(std::span<const MultiPoly> polys, std::span<const std::string> header);

/// Straight-line evaluator for a fixed polynomial over GF(p): coefficients and
/// variable lists flattened into arrays, evaluation without Scalar dispatch.
class ModpEvaluator {
 public:
  ModpEvaluator(const MultiPoly& f, std::uint64_t p);
  std::uint64_t operator()(std::span<const std::uint64_t> values) const;
  std::uint64_t modulus() const { return p_; }

 private:
  std::uint64_t p_;
  std::vector<std::uint64_t> coeffs_;
  std::vector<std::uint32_t> offsets_;  // term t uses vars_[offsets_[t] .. offsets_[t+1])
  std::vector<std::uint32_t> vars_;     // repeated by exponent
};

}  // namespace salmon
