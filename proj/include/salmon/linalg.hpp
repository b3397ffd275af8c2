#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "salmon/matrix.hpp"

namespace salmon {

/// Determinant by fraction-free (Bareiss) elimination over Q, plain Gaussian
/// elimination over GF(p). Exact modes only.
Scalar det(const Matrix& m);

/// adj(M), built from cofactors; M * adj(M) = det(M) * I.
Matrix adjugate(const Matrix& m);

/// Exact rank with full pivoting. Float matrices are rejected.
std::size_t rank(const Matrix& m);

/// Basis of the right null space, one vector per free column of the reduced
/// row echelon form. Over Q each vector is scaled to a primitive integer vector
/// whose free coordinate is positive.
std::vector<std::vector<Scalar>> kernel_basis(const Matrix& m);

/// Inverse of a square exact matrix; throws DomainError when singular.
Matrix inverse(const Matrix& m);

struct RowEchelon {
  Matrix reduced;
  std::vector<std::size_t> pivot_cols;
};

/// Reduced row echelon form over an exact field.
RowEchelon rref(const Matrix& m);

struct Minor {
  std::vector<std::size_t> rows;  // 0-based, increasing
  std::vector<std::size_t> cols;
  Scalar value;
};

/// All size x size minors ordered lexicographically by (row-set, col-set).
std::vector<Minor> minor_values(const Matrix& m, std::size_t size);

/// First non-zero minor in the same order as minor_values, if any.
std::optional<Minor> first_nonzero_minor(const Matrix& m, std::size_t size);

/// Calls fn on every k-subset of {0..n-1} in lexicographic order; stops early
/// when fn returns false.
void for_each_combination(std::size_t n, std::size_t k,
                          const std::function<bool(std::span<const std::size_t>)>& fn);

/// n choose k.
std::size_t binomial(std::size_t n, std::size_t k);

/// Dense row-major matrix of residues mod a prime, for bulk work where Scalar
/// dispatch would dominate (evaluation matrices, interpolation systems).
struct ModpDense {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::uint64_t p = 0;
  std::vector<std::uint64_t> a;
  std::uint64_t& operator()(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  std::uint64_t operator()(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

std::size_t modp_rank(ModpDense m);
/// Right null space basis (one vector per free column, free coordinate 1).
std::vector<std::vector<std::uint64_t>> modp_kernel(ModpDense m);

}  // namespace salmon
