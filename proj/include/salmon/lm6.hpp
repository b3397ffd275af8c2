#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "salmon/linalg.hpp"
#include "salmon/poly.hpp"
#include "salmon/report.hpp"
#include "salmon/tensor.hpp"

namespace salmon {

/// Shared registry of the 36 variables x(i,j,k) of a 3x3x4 tensor.
const RegistryPtr& registry_334();

/// det of the 4x4 matrix whose row k is (x(1,1,k), x(1,2,k), x(2,1,k), x(2,2,k)).
Scalar f_det(const Tensor3& t);
/// The same determinant as a polynomial over Q (24 terms).
MultiPoly f_polynomial();

/// The ten degree-6 equations of the 3x3x4 rank-4 variety.
struct LMFamily {
  std::vector<MultiPoly> polys;
  std::string source;
};

/// Parses and validates: exactly 10 polynomials in x(i,j,k) (i,j <= 3, k <= 4), each
/// nonzero and homogeneous of degree 6, with evaluation rank 10 at 16 random
/// points of GF(2^31-1). Throws ParseError or ValidationError.
LMFamily parse_lm_file(std::string_view text, std::string source = "<text>");
LMFamily load_lm_file(const std::filesystem::path& path);
/// $SALMON_LM_FILE if set, otherwise the data file shipped with the sources.
std::filesystem::path default_lm_path();

/// Rank of the 10 x 16 evaluation matrix at seeded random points mod p.
std::size_t lm_independence_rank(const std::vector<MultiPoly>& polys, std::uint64_t p, std::uint64_t seed);

struct RestrictedEntry {
  std::size_t index = 0;  // 0-based position in the family
  std::size_t restricted_terms = 0;
  bool divisible = false;
  /// Set when the quotient is c * x(3,3,k) * x(3,3,l).
  std::optional<std::pair<int, int>> pair;  // 1-based, k <= l
  std::optional<Scalar> scalar;
  std::string problem;  // empty when the entry passed
};

struct RestrictedReport {
  bool pass = false;
  std::vector<RestrictedEntry> entries;
  std::vector<std::string> problems;
  nlohmann::json to_json() const;
};

/// Zero x(1,3,k), x(2,3,k), x(3,1,k), x(3,2,k); expect 24 terms, exact division
/// by f, quotient c * x(3,3,k) * x(3,3,l), each 1 <= k <= l <= 4 hit once.
RestrictedReport restricted_identity_check(const LMFamily& f);

/// The ten values in family order, in the tensor's field (float tensors are
/// evaluated in floating point).
std::vector<Scalar> eval_lm(const LMFamily& f, const Tensor3& t);

/// Fast evaluation of the family over one prime.
class LMModpEvaluator {
 public:
  LMModpEvaluator(const LMFamily& f, std::uint64_t p);
  /// values indexed by registry_334() variable id.
  std::vector<std::uint64_t> operator()(std::span<const std::uint64_t> values) const;
  /// Index of the first nonzero value, if any.
  std::optional<std::size_t> first_nonzero(std::span<const std::uint64_t> values) const;
  std::uint64_t modulus() const { return p_; }

 private:
  std::uint64_t p_;
  std::vector<ModpEvaluator> evals_;
};

/// For special-form tensors: f = 0 or every x(3,3,k) = 0.
bool special_membership(const Tensor3& t);

struct SpecialBasis {
  /// Z_1..Z_3 have zero third row and column; Z_4 = e3 e3^T.
  std::vector<Matrix> z;
  /// Z_r = sum_k coeffs(r, k) X_k.
  Matrix coeffs;
};

/// New basis of span(X_1..X_4) for a special-form tensor with f = 0 and
/// independent slices. Throws PreconditionViolation otherwise.
SpecialBasis special_basis_change(const Tensor3& t);

/// M = u v^T for a rank-one M: u is the first nonzero column.
std::pair<Matrix, Matrix> rank_one_factor(const Matrix& m);

enum class NormalCase { E33_E33, E33_E32, E23_E33, E22_E22 };
std::string to_string(NormalCase c);

struct NormalFormCase {
  NormalCase case_id;
  Matrix p;
  Matrix q;
  /// True when the pair was first replaced by (R^T, L^T), i.e. the tensor's
  /// first two axes are exchanged; p and q then act on the transposed problem.
  bool transposed = false;
  Matrix l1;  // Q^T L P^{-1} (of the possibly transposed pair)
  Matrix r1;  // Q^{-1} R P^T
  /// Second-stage factors (P = P1 P0, Q = Q0 Q1); third rows of P1 and of
  /// Q1^{-1} vanish off the diagonal.
  Matrix p1;
  Matrix q1;
};

/// P, Q (rows 3 of P and of Q^{-1} vanish off the diagonal) with L1 = e3 e3^T
/// up to scale and R1 one of e3e3^T, e3e2^T, e2e2^T up to scale; the e2e3^T
/// case is moved to e3e2^T by exchanging the first two tensor axes.
NormalFormCase normalize_pair(const Matrix& l, const Matrix& r);
/// The same without the transposition step (can report E23_E33).
NormalFormCase normalize_pair_raw(const Matrix& l, const Matrix& r);

/// Degree 9 + degree 6 decision for a 3x3x4 tensor in an exact mode.
MembershipReport membership_route_b(const Tensor3& t, const LMFamily& f);

}  // namespace salmon
