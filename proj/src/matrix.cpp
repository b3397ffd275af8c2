#include "salmon/matrix.hpp"

#include <sstream>

#include "salmon/errors.hpp"

namespace salmon {

Matrix::Matrix(std::size_t rows, std::size_t cols, const Field& field)
    : rows_(rows), cols_(cols), field_(field), data_(rows * cols, field.zero()) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, const Field& field, std::vector<Scalar> entries)
    : rows_(rows), cols_(cols), field_(field), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw DomainError("matrix needs " + std::to_string(rows * cols) + " entries, got " +
                      std::to_string(data_.size()));
  }
  for (const auto& e : data_) {
    if (e.field() != field_) throw ModeMismatch("matrix entry in " + e.field().name() + ", expected " + field_.name());
  }
}

Matrix Matrix::identity(std::size_t n, const Field& field) {
  Matrix m(n, n, field);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
  return m;
}

Matrix Matrix::from_ints(std::size_t rows, std::size_t cols, const Field& field,
                         std::initializer_list<long> values) {
  if (values.size() != rows * cols) throw DomainError("from_ints: wrong number of values");
  Matrix m(rows, cols, field);
  std::size_t i = 0;
  for (long v : values) m.data_[i++] = field.from_int(v);
  return m;
}

Matrix Matrix::column(const std::vector<Scalar>& v, const Field& field) {
  return Matrix(v.size(), 1, field, v);
}

Matrix Matrix::unit_vector(std::size_t n, std::size_t one_based_index, const Field& field) {
  if (one_based_index < 1 || one_based_index > n) throw DomainError("unit_vector index out of range");
  Matrix m(n, 1, field);
  m(one_based_index - 1, 0) = field.one();
  return m;
}

void Matrix::require_same_shape(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DomainError("matrix shape mismatch");
  if (field_ != o.field_) throw ModeMismatch("matrix field mismatch: " + field_.name() + " vs " + o.field_.name());
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_, field_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix Matrix::operator+(const Matrix& o) const {
  require_same_shape(o);
  Matrix out(*this);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += o.data_[i];
  return out;
}

Matrix Matrix::operator-(const Matrix& o) const {
  require_same_shape(o);
  Matrix out(*this);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= o.data_[i];
  return out;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_) throw DomainError("matrix product shape mismatch");
  if (field_ != o.field_) throw ModeMismatch("matrix field mismatch: " + field_.name() + " vs " + o.field_.name());
  Matrix out(rows_, o.cols_, field_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const Scalar& a = (*this)(r, k);
      if (a.is_zero()) continue;
      for (std::size_t c = 0; c < o.cols_; ++c) out(r, c) += a * o(k, c);
    }
  }
  return out;
}

Matrix Matrix::operator*(const Scalar& s) const {
  Matrix out(*this);
  for (auto& e : out.data_) e *= s;
  return out;
}

bool Matrix::operator==(const Matrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && field_ == o.field_ && data_ == o.data_;
}

bool Matrix::is_zero() const {
  for (const auto& e : data_)
    if (!e.is_zero()) return false;
  return true;
}

bool Matrix::is_symmetric() const {
  if (!is_square()) return false;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = r + 1; c < cols_; ++c)
      if ((*this)(r, c) != (*this)(c, r)) return false;
  return true;
}

Scalar Matrix::trace() const {
  if (!is_square()) throw DomainError("trace of a non-square matrix");
  Scalar t = field_.zero();
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

std::vector<Scalar> Matrix::column_values(std::size_t c) const {
  std::vector<Scalar> v;
  v.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v.push_back((*this)(r, c));
  return v;
}

std::vector<Scalar> Matrix::row_values(std::size_t r) const {
  return {data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
          data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
}

Matrix Matrix::submatrix(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const {
  Matrix out(rows.size(), cols.size(), field_);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = (*this)(rows[r], cols[c]);
  return out;
}

Matrix Matrix::convert(const Field& target) const {
  Matrix out(rows_, cols_, target);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = convert_scalar(data_[i], target);
  return out;
}

std::string Matrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t r = 0; r < rows_; ++r) {
    os << (r ? ", [" : "[");
    for (std::size_t c = 0; c < cols_; ++c) os << (c ? ", " : "") << (*this)(r, c).to_string();
    os << "]";
  }
  os << "]";
  return os.str();
}

Scalar convert_scalar(const Scalar& s, const Field& target) {
  if (s.field() == target) return s;
  switch (s.kind()) {
    case ScalarKind::Rational:
      return target.from_rational(s.rational_value());
    case ScalarKind::PrimeField:
      if (target.kind() == ScalarKind::Float64) return Scalar(s.to_double());
      break;
    case ScalarKind::Float64:
      break;
  }
  throw ModeMismatch("cannot convert " + s.field().name() + " value to " + target.name());
}

}  // namespace salmon
