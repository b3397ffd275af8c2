#pragma once

#include <cstdint>
#include <vector>

#include "salmon/poly.hpp"
#include "salmon/tensor.hpp"

namespace salmon {

/// Values indexed by variable id with x(i,j,k) := T(i,j,k); other variables get zero.
/// The registry's x ranges must equal the tensor's dimensions.
std::vector<Scalar> x_assignment(const Tensor3& t, const VarRegistry& reg);

/// Same for a GF(p) tensor, as raw residues for ModpEvaluator.
std::vector<std::uint64_t> x_residues(const Tensor3& t, const VarRegistry& reg);

}  // namespace salmon
