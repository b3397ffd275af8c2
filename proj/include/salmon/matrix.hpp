#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "salmon/scalar.hpp"

namespace salmon {

/// Dense row-major matrix over a single Field.
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols, const Field& field);
  /// Entries must all live in `field`; throws ModeMismatch otherwise.
  Matrix(std::size_t rows, std::size_t cols, const Field& field, std::vector<Scalar> entries);

  static Matrix identity(std::size_t n, const Field& field);
  static Matrix from_ints(std::size_t rows, std::size_t cols, const Field& field,
                          std::initializer_list<long> values);
  /// Column vector from a list of scalars.
  static Matrix column(const std::vector<Scalar>& v, const Field& field);
  /// Standard basis vector e_i (1-based, as in the math).
  static Matrix unit_vector(std::size_t n, std::size_t one_based_index, const Field& field);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  const Field& field() const { return field_; }

  Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const Scalar> entries() const { return data_; }

  Matrix transpose() const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator*(const Matrix& o) const;
  Matrix operator*(const Scalar& s) const;
  bool operator==(const Matrix& o) const;
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  bool is_zero() const;
  bool is_symmetric() const;
  Scalar trace() const;
  std::vector<Scalar> column_values(std::size_t c) const;
  std::vector<Scalar> row_values(std::size_t r) const;
  Matrix submatrix(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const;
  /// Same shape with every entry mapped into `target` (rational -> GF(p) or float).
  Matrix convert(const Field& target) const;

  std::string to_string() const;

 private:
  void require_same_shape(const Matrix& o) const;
  std::size_t rows_;
  std::size_t cols_;
  Field field_;
  std::vector<Scalar> data_;
};

}  // namespace salmon
