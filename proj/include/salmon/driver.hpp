#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "salmon/lm6.hpp"
#include "salmon/report.hpp"
#include "salmon/tensor.hpp"

namespace salmon {

/// 2x2 matrix multiplication tensor: T((i,j),(j,k),(k,i)) = 1 with (a,b) -> 2(a-1)+b.
Tensor3 matmul_tensor(const Field& field = Field::rational());

/// A float value v of a polynomial g at T counts as zero iff
/// |v| <= epsilon * ||coeffs(g)||_1 * max(1, ||T||_inf)^deg(g).
struct ToleranceModel {
  double epsilon = 1e-8;
  /// Residuals within this factor of the threshold (either side) are ambiguous.
  double band = 1e3;
  double threshold(double coeff_l1, int degree, double tensor_max) const;
};

enum class FloatClass { Zero, Ambiguous, Nonzero };

struct FamilyResiduals {
  std::string family;  // "sym9" or "lm6"
  std::size_t count = 0;
  std::size_t zero = 0;
  std::size_t ambiguous = 0;
  std::size_t nonzero = 0;
  double max_residual = 0;
  /// Largest residual / threshold.
  double max_ratio = 0;
  nlohmann::json to_json() const;
};

struct FloatCheckResult {
  Verdict verdict = Verdict::Member;
  std::vector<FamilyResiduals> families;
  nlohmann::json to_json() const;
};

/// l1 norm bound for a 9x9 minor of C_L or C_R (0..439): the permanent of its
/// nonzero pattern, the number of terms before cancellation.
double sym9_minor_norm(std::size_t minor);

/// Float-mode degree 9 (all 440 minors, by LU) and optionally degree 6 on a
/// 3x3x4 float tensor. NON_MEMBER when some value is clearly nonzero,
/// INCONCLUSIVE when some value is ambiguous, otherwise MEMBER.
FloatCheckResult float_check(const Tensor3& t, const LMFamily* fam, const ToleranceModel& tol = {});

/// Sample plan for the two-route comparison on 3x3x4 tensors.
struct ExperimentSpec {
  std::size_t rank4 = 0;
  std::size_t generic = 0;
  /// Per special-form variant: x33 = 0, f = 0, and unconstrained.
  std::size_t special = 0;
  std::size_t essentially_234 = 0;
  std::uint64_t seed = 0;
  Field field = Field::rational();
  nlohmann::json to_json() const;
};

struct CrossValidation {
  std::size_t samples = 0;
  std::size_t agreements = 0;
  std::vector<nlohmann::json> disagreements;
  /// Per class: samples, members by each route, oracle mismatches.
  nlohmann::json classes = nlohmann::json::object();
  /// Seconds summed per stage name; left out of to_json unless asked for.
  std::map<std::string, double> stage_seconds;
  nlohmann::json to_json(bool with_timing = false) const;
};

/// Route A and route B on every sample of the plan; special-form samples are
/// also compared with the closed-form oracle.
CrossValidation cross_validate_334(const ExperimentSpec& spec, const LMFamily& fam);

}  // namespace salmon
