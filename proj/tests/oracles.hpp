#pragma once

// Independent reference computations used only by tests. Nothing here calls
// into the elimination code it is used to check.

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <vector>

#include "salmon/matrix.hpp"

namespace salmon::oracle {

using QMatrix = std::vector<std::vector<mpq_class>>;

/// Cofactor (Laplace) expansion along the first row.
inline mpq_class laplace_det(const QMatrix& a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  if (n == 1) return a[0][0];
  mpq_class total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (a[0][c] == 0) continue;
    QMatrix minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<mpq_class> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(a[r][k]);
      minor.push_back(std::move(row));
    }
    mpq_class term = a[0][c] * laplace_det(minor);
    total += (c % 2 == 0) ? term : mpq_class(-term);
  }
  return total;
}

inline QMatrix to_q(const Matrix& m) {
  QMatrix a(m.rows(), std::vector<mpq_class>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) a[r][c] = m(r, c).rational_value();
  return a;
}

inline Matrix random_int_matrix(std::size_t rows, std::size_t cols, int bound, std::mt19937_64& rng,
                                const Field& field = Field::rational()) {
  std::uniform_int_distribution<int> d(-bound, bound);
  Matrix m(rows, cols, field);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = field.from_int(d(rng));
  return m;
}

/// Schoolbook product written out independently of Matrix::operator*.
inline QMatrix q_mul(const QMatrix& a, const QMatrix& b) {
  QMatrix c(a.size(), std::vector<mpq_class>(b[0].size(), 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b[0].size(); ++j)
      for (std::size_t k = 0; k < b.size(); ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

}  // namespace salmon::oracle
