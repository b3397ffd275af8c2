#include "salmon/sampling.hpp"

#include "salmon/errors.hpp"
#include "salmon/linalg.hpp"

namespace salmon {

Matrix random_matrix(std::size_t rows, std::size_t cols, const Field& field, int bound, Rng& rng) {
  Matrix m(rows, cols, field);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = field.from_int(rng.uniform_int(-bound, bound));
  return m;
}

Matrix random_invertible(std::size_t n, const Field& field, int bound, Rng& rng) {
  if (bound < 1) throw DomainError("coefficient bound must be positive");
  while (true) {
    Matrix q = random_matrix(n, n, Field::rational(), bound, rng);
    Matrix m = q.convert(field);
    if (!det(field.is_exact() ? m : q).is_zero()) return m;
  }
}

Tensor3 sample_rank_r(Tensor3::Dims dims, int r, const Field& field, std::uint64_t seed, int bound) {
  if (r < 1) throw DomainError("rank must be at least 1");
  Rng rng(seed);
  Tensor3 t(dims, field);
  for (int s = 0; s < r; ++s) {
    Matrix a = random_matrix(dims[0], 1, field, bound, rng);
    Matrix b = random_matrix(dims[1], 1, field, bound, rng);
    Matrix c = random_matrix(dims[2], 1, field, bound, rng);
    for (int k = 0; k < dims[2]; ++k)
      for (int i = 0; i < dims[0]; ++i)
        for (int j = 0; j < dims[1]; ++j) t(i, j, k) += a(i, 0) * b(j, 0) * c(k, 0);
  }
  return t;
}

Tensor3 sample_dense(Tensor3::Dims dims, const Field& field, std::uint64_t seed, int bound) {
  Rng rng(seed);
  Tensor3 t(dims, field);
  for (int k = 0; k < dims[2]; ++k)
    for (int i = 0; i < dims[0]; ++i)
      for (int j = 0; j < dims[1]; ++j) t(i, j, k) = field.from_int(rng.uniform_int(-bound, bound));
  return t;
}

Tensor3 sample_special_form(bool x33_zero, bool force_f_zero, const Field& field, std::uint64_t seed, int bound) {
  Rng rng(seed);
  Tensor3 t({3, 3, 4}, field);
  for (int k = 0; k < 4; ++k) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) t(i, j, k) = field.from_int(rng.uniform_int(-bound, bound));
    if (!x33_zero) t(2, 2, k) = field.from_int(rng.uniform_int(-bound, bound));
  }
  if (force_f_zero) {
    Scalar c[3];
    for (auto& ci : c) ci = field.from_int(rng.uniform_int(-bound, bound));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) t(i, j, 3) = c[0] * t(i, j, 0) + c[1] * t(i, j, 1) + c[2] * t(i, j, 2);
  }
  return t;
}

Tensor3 sample_essentially_234(const Field& field, std::uint64_t seed, int bound) {
  Tensor3 t = sample_dense({3, 3, 4}, field, seed, bound);
  for (int k = 0; k < 4; ++k) {
    t(0, 2, k) = field.zero();
    for (int j = 0; j < 3; ++j) t(2, j, k) = field.zero();
  }
  return t;
}

}  // namespace salmon
