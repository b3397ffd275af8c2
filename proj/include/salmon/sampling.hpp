#pragma once

#include <cstdint>

#include "salmon/random.hpp"
#include "salmon/tensor.hpp"

namespace salmon {

inline constexpr int kDefaultCoeffBound = 9;

/// Matrix with independent uniform integer entries in [-bound, bound].
Matrix random_matrix(std::size_t rows, std::size_t cols, const Field& field, int bound, Rng& rng);
/// Random square matrix with nonzero determinant (redraws until invertible).
Matrix random_invertible(std::size_t n, const Field& field, int bound, Rng& rng);

/// Sum of r random rank-one tensors a (x) b (x) c with integer factor entries in [-bound, bound].
Tensor3 sample_rank_r(Tensor3::Dims dims, int r, const Field& field, std::uint64_t seed,
                      int bound = kDefaultCoeffBound);

/// Tensor with independent uniform integer entries in [-bound, bound].
Tensor3 sample_dense(Tensor3::Dims dims, const Field& field, std::uint64_t seed, int bound = kDefaultCoeffBound);

/// 3x3x4 tensor with the special zero pattern (2x2 block plus (3,3) entry per slice).
/// x33_zero clears every x(3,3,k); force_f_zero makes the fourth 2x2 block a random
/// combination of the first three.
Tensor3 sample_special_form(bool x33_zero, bool force_f_zero, const Field& field, std::uint64_t seed,
                            int bound = kDefaultCoeffBound);

/// 3x3x4 tensor with x(1,3,k) = x(3,1,k) = x(3,2,k) = x(3,3,k) = 0, otherwise random:
/// effectively a 2x3x4 tensor.
Tensor3 sample_essentially_234(const Field& field, std::uint64_t seed, int bound = kDefaultCoeffBound);

}  // namespace salmon
