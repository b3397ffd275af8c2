#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "salmon/lm6.hpp"
#include "salmon/modarith.hpp"
#include "salmon/report.hpp"
#include "salmon/tensor.hpp"

namespace salmon {

enum class LiftFamily { LM6, SYM9 };
std::string to_string(LiftFamily f);

struct LiftConfig {
  int trials = 32;
  /// Field of the random P, Q and of the evaluation; rational tensors are reduced into it.
  Field field = Field::prime(modp::kMersenne31);
  std::uint64_t seed = 0;
  bool lm6 = true;
  bool sym9 = true;
};

/// The 3x3x4 tensor Y(i,j,k) = (P X_{k,l} Q)(i,j), i, j <= 3.
Tensor3 lift_tensor(const Tensor3& t, int l, const Matrix& p, const Matrix& q);

struct LiftWitness {
  int l = 0;
  int trial = 0;
  Matrix p;
  Matrix q;
  /// LM6: 1-based polynomial index. SYM9: 0-based minor index, 0..219 on C_L, 220..439 on C_R.
  std::size_t condition = 0;
  Scalar value;
  nlohmann::json to_json() const;
};

struct LiftResult {
  bool pass = true;
  int l = 0;
  LiftFamily family = LiftFamily::LM6;
  int trials = 0;
  std::optional<LiftWitness> witness;
};

/// Randomized test that the family vanishes on Y for all P, Q. `fam` is required for LM6.
LiftResult lift_eval(const Tensor3& t, int l, LiftFamily family, const LMFamily* fam, const LiftConfig& cfg);

/// Strassen stages for l = 1, 2, 3 and lift stages for each enabled family and l.
MembershipReport membership444(const Tensor3& t, const LMFamily& fam, const LiftConfig& cfg);

/// Registry with x(i,j,k) for 4x4x4 and p(a,b), q(a,b) for 4x4.
const RegistryPtr& lift_registry();

struct LiftCoefficient {
  std::size_t condition = 0;  // same numbering as LiftWitness::condition
  Monomial pq;
  MultiPoly coeff;
};

/// Symbolic (p,q)-coefficients of the lifted conditions, mod prime, by supports.
/// A support is a set of the 24 variables p(i,a), q(b,j) with i, j <= 3 (the
/// others never reach Y); supports are processed in increasing size, shuffled by
/// `seed` within a size, and a support contributes the monomials whose variable
/// set is exactly that support. Work (term products and pruning checks) is
/// charged against `budget`; the run stops between supports once it is spent.
/// `conditions` restricts the run to some condition numbers (LM6 1..10, SYM9 0..439).
struct LiftGeneration {
  LiftFamily family = LiftFamily::LM6;
  int l = 0;
  std::uint64_t prime = 0;
  std::size_t budget = 0;
  std::uint64_t seed = 0;
  /// Condition numbers requested (empty: all).
  std::vector<std::size_t> conditions;
  std::vector<LiftCoefficient> coefficients;
  std::size_t work = 0;
  std::size_t supports_processed = 0;
  /// Every support of size <= complete_through has been processed.
  int complete_through = 0;
  bool exhausted = false;
  /// Where the run stopped: size class, position in it and class size.
  nlohmann::json frontier;
  std::vector<std::string> header() const;
  nlohmann::json to_json() const;
};

inline constexpr std::size_t kDefaultLiftBudget = 2'000'000;

LiftGeneration lift_generate_modp(LiftFamily family, int l, std::uint64_t prime, std::size_t budget,
                                  std::uint64_t seed, const LMFamily* fam = nullptr,
                                  const std::vector<std::size_t>& conditions = {});

/// Bit of p(i,a) (i <= 3) or q(b,j) (j <= 3) in a support mask, 1-based indices.
int lift_p_bit(int i, int a);
int lift_q_bit(int b, int j);
/// Support mask of a (p,q)-monomial in lift_registry().
std::uint32_t lift_support(const Monomial& m);

}  // namespace salmon
