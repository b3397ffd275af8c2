#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "salmon/linalg.hpp"
#include "salmon/poly.hpp"
#include "salmon/tensor.hpp"

namespace salmon {

/// Integer range [-b, b] for u draws in rational mode.
inline constexpr std::int64_t kRationalDrawBound = std::int64_t{1} << 20;

/// 0-based tensor position of entry (r, c) of the l-section j: index l is fixed to j,
/// r runs over the smaller-numbered remaining axis.
std::array<int, 3> section_position(int l, int j, int r, int c);

/// E = U1 adj(U2) U3 - U3 adj(U2) U1 with U_i = sum_j u(j,i) X_{j,l}.
/// `u` has 12 entries in registry order u(1,1), u(1,2), u(1,3), u(2,1), ...
Matrix strassen_commutator(const std::vector<Matrix>& sections, std::span<const Scalar> u);

struct StrassenWitness {
  int l = 0;
  int trial = 0;
  std::vector<Scalar> u;
  std::size_t row = 0;  // 0-based entry of E
  std::size_t col = 0;
  Scalar value;
  nlohmann::json to_json() const;
};

struct StrassenResult {
  bool pass = true;
  int l = 0;
  int trials = 0;
  std::optional<StrassenWitness> witness;
};

/// Randomized test of the degree-5 conditions in direction l on a 4x4x4 exact tensor.
/// Stops at the first trial with E != 0.
StrassenResult strassen_eval(const Tensor3& t, int l, int trials, std::uint64_t seed);

/// Registry with x(i,j,k) for 4x4x4 and u(j,i), j <= 4, i <= 3.
const RegistryPtr& strassen_registry();

struct StrassenCoefficient {
  std::size_t row = 0;
  std::size_t col = 0;
  Monomial u_monomial;
  MultiPoly coeff;  // degree 5 in x
};

struct StrassenFamily {
  int l = 0;
  Field field = Field::rational();
  /// Every nonzero coefficient of every entry of E, by entry then u-monomial.
  std::vector<StrassenCoefficient> coefficients;
  /// Distinct nonzero coefficient polynomials.
  std::vector<MultiPoly> spanning;
  std::size_t terms_processed = 0;
};

inline constexpr std::size_t kDefaultTermCap = 50'000'000;

/// Expands E symbolically in u and x and extracts the coefficients of the
/// u-monomials. Throws BudgetExceeded when the running count of intermediate
/// terms passes term_cap.
StrassenFamily strassen_generate(int l, const Field& field, std::size_t term_cap = kDefaultTermCap);

/// Coefficient values of E at a numeric point, one per (a < c, u2-monomial,
/// entry): the coefficient of u(a,1) u2^J u(c,3) in E(r, s). Values for a > c are
/// the negatives and a = c gives zero, so these span the same space.
/// `sections` are the l-sections reduced mod p.
std::vector<std::uint64_t> strassen_coefficient_values(std::span<const std::uint64_t> sections, std::uint64_t p);
inline constexpr std::size_t kStrassenColumns = 6 * 20 * 16;

struct StrassenDimension {
  std::vector<int> ls;
  std::uint64_t prime = 0;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::size_t columns = 0;
  std::size_t dimension = 0;
  /// rank == samples: the true dimension may be larger.
  bool saturated = false;
  bool below_polynomial_count = false;
  nlohmann::json to_json() const;
};

inline constexpr std::size_t kDefaultDimensionSamples = 2000;

/// Rank of the evaluation matrix of the coefficient polynomials for the given
/// directions at `samples` uniform random points of GF(prime)^64.
StrassenDimension strassen_dimension(const std::vector<int>& ls, std::uint64_t prime, std::size_t samples,
                                     std::uint64_t seed);

}  // namespace salmon
