#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "salmon/poly.hpp"

namespace salmon {

/// Rebuilds the ten degree-6 equations of the 3x3x4 rank-4 variety as a weight
/// basis of their GL-module: the highest weight vector is found by interpolation
/// over GF(2^31-1) at random rank-4 points within its weight space, lifted to Z
/// by rational reconstruction, and the other nine follow by the lowering
/// operators E_{k1} = sum_{i,j} x(i,j,k) d/dx(i,j,1). Output order is
/// (1,1),(1,2),(1,3),(1,4),(2,2),(2,3),(2,4),(3,3),(3,4),(4,4) by k-weight, each
/// polynomial primitive over Z with positive leading coefficient. Every
/// polynomial is checked to vanish exactly at rank-4 rational points.
/// Throws ValidationError if any step does not behave as expected.
std::vector<MultiPoly> derive_lm_family(std::uint64_t seed, std::ostream* log = nullptr);

/// Monomials of degree 6 in x(i,j,k) (3x3x4) using each i and each j exactly
/// twice and index k exactly k_content[k] times.
std::vector<Monomial> weight_space_monomials(const RegistryPtr& reg, const std::array<int, 4>& k_content);

/// Applies E_{to,from} = sum_{i,j} x(i,j,to) d/dx(i,j,from) (1-based slice indices).
MultiPoly lower_slice(const MultiPoly& f, int to, int from);

}  // namespace salmon
