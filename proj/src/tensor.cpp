#include "salmon/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "salmon/errors.hpp"

namespace salmon {

namespace {

void check_dims(const Tensor3::Dims& d) {
  for (int x : d) {
    if (x < 1 || x > 4) throw DomainError("tensor dimensions must lie in 1..4");
  }
}

void check_direction(int direction) {
  if (direction < 1 || direction > 3) throw DomainError("slice direction must be 1, 2 or 3");
}

// Remaining axes after removing `direction` (1-based), as 0-based axis numbers.
std::array<int, 2> remaining_axes(int direction) {
  switch (direction) {
    case 1:
      return {1, 2};
    case 2:
      return {0, 2};
    default:
      return {0, 1};
  }
}

}  // namespace

Tensor3::Tensor3(Dims dims, const Field& field)
    : dims_(dims), field_(field), data_(static_cast<std::size_t>(dims[0] * dims[1] * dims[2]), field.zero()) {
  check_dims(dims);
}

Tensor3::Tensor3(Dims dims, const Field& field, std::vector<Scalar> entries)
    : dims_(dims), field_(field), data_(std::move(entries)) {
  check_dims(dims);
  const std::size_t want = static_cast<std::size_t>(dims[0] * dims[1] * dims[2]);
  if (data_.size() != want) {
    throw DomainError("tensor " + std::to_string(dims[0]) + "x" + std::to_string(dims[1]) + "x" +
                      std::to_string(dims[2]) + " needs " + std::to_string(want) + " entries, got " +
                      std::to_string(data_.size()));
  }
  for (const auto& e : data_) {
    if (e.field() != field_) throw ModeMismatch("tensor entry in " + e.field().name() + ", expected " + field_.name());
  }
}

Tensor3 Tensor3::from_frontal(const std::vector<Matrix>& slices) { return from_slices(3, slices); }

std::vector<Matrix> Tensor3::slices(int direction) const {
  check_direction(direction);
  const auto [ra, rb] = remaining_axes(direction);
  const int fixed = direction - 1;
  std::vector<Matrix> out;
  out.reserve(dims_[fixed]);
  std::array<int, 3> idx{};
  for (int f = 0; f < dims_[fixed]; ++f) {
    Matrix s(dims_[ra], dims_[rb], field_);
    idx[fixed] = f;
    for (int a = 0; a < dims_[ra]; ++a) {
      idx[ra] = a;
      for (int b = 0; b < dims_[rb]; ++b) {
        idx[rb] = b;
        s(a, b) = (*this)(idx[0], idx[1], idx[2]);
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

Tensor3 Tensor3::from_slices(int direction, const std::vector<Matrix>& sections) {
  check_direction(direction);
  if (sections.empty()) throw DomainError("no sections given");
  const auto [ra, rb] = remaining_axes(direction);
  const int fixed = direction - 1;
  Dims d{};
  d[fixed] = static_cast<int>(sections.size());
  d[ra] = static_cast<int>(sections[0].rows());
  d[rb] = static_cast<int>(sections[0].cols());
  Tensor3 t(d, sections[0].field());
  std::array<int, 3> idx{};
  for (int f = 0; f < d[fixed]; ++f) {
    const Matrix& s = sections[f];
    if (s.rows() != static_cast<std::size_t>(d[ra]) || s.cols() != static_cast<std::size_t>(d[rb])) {
      throw DomainError("sections differ in shape");
    }
    if (s.field() != t.field_) throw ModeMismatch("sections differ in field");
    idx[fixed] = f;
    for (int a = 0; a < d[ra]; ++a) {
      idx[ra] = a;
      for (int b = 0; b < d[rb]; ++b) {
        idx[rb] = b;
        t(idx[0], idx[1], idx[2]) = s(a, b);
      }
    }
  }
  return t;
}

Matrix Tensor3::flattening(int axis) const {
  check_direction(axis);
  const auto [ra, rb] = remaining_axes(axis);
  const int row_axis = axis - 1;
  Matrix f(dims_[row_axis], static_cast<std::size_t>(dims_[ra]) * dims_[rb], field_);
  std::array<int, 3> idx{};
  for (idx[0] = 0; idx[0] < dims_[0]; ++idx[0])
    for (idx[1] = 0; idx[1] < dims_[1]; ++idx[1])
      for (idx[2] = 0; idx[2] < dims_[2]; ++idx[2])
        f(idx[row_axis], static_cast<std::size_t>(idx[ra]) * dims_[rb] + idx[rb]) = (*this)(idx[0], idx[1], idx[2]);
  return f;
}

Tensor3 Tensor3::change_basis(const Matrix& a, const Matrix& b, const Matrix& c) const {
  if (a.rows() != a.cols() || a.rows() != static_cast<std::size_t>(m()) || b.rows() != b.cols() ||
      b.rows() != static_cast<std::size_t>(n()) || c.rows() != c.cols() || c.rows() != static_cast<std::size_t>(l())) {
    throw DomainError("basis change matrices do not match tensor dimensions");
  }
  auto front = slices(3);
  const Matrix bt = b.transpose();
  std::vector<Matrix> moved;
  moved.reserve(front.size());
  for (auto& s : front) moved.push_back(a * s * bt);
  std::vector<Matrix> out;
  for (int k = 0; k < l(); ++k) {
    Matrix acc(m(), n(), field_);
    for (int kk = 0; kk < l(); ++kk) {
      if (!c(k, kk).is_zero()) acc = acc + moved[kk] * c(k, kk);
    }
    out.push_back(std::move(acc));
  }
  return from_frontal(out);
}

Tensor3 Tensor3::permute_axes(const std::array<int, 3>& perm) const {
  std::array<int, 3> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != std::array<int, 3>{0, 1, 2}) throw DomainError("not a permutation of the three axes");
  Dims d{};
  for (int a = 0; a < 3; ++a) d[perm[a]] = dims_[a];
  Tensor3 t(d, field_);
  std::array<int, 3> src{}, dst{};
  for (src[0] = 0; src[0] < dims_[0]; ++src[0])
    for (src[1] = 0; src[1] < dims_[1]; ++src[1])
      for (src[2] = 0; src[2] < dims_[2]; ++src[2]) {
        for (int a = 0; a < 3; ++a) dst[perm[a]] = src[a];
        t(dst[0], dst[1], dst[2]) = (*this)(src[0], src[1], src[2]);
      }
  return t;
}

Tensor3 Tensor3::embed(Dims dims) const {
  for (int a = 0; a < 3; ++a) {
    if (dims[a] < dims_[a]) throw DomainError("embedding box smaller than tensor");
  }
  Tensor3 t(dims, field_);
  for (int k = 0; k < l(); ++k)
    for (int i = 0; i < m(); ++i)
      for (int j = 0; j < n(); ++j) t(i, j, k) = (*this)(i, j, k);
  return t;
}

Tensor3 Tensor3::convert(const Field& target) const {
  std::vector<Scalar> e;
  e.reserve(data_.size());
  for (const auto& s : data_) e.push_back(convert_scalar(s, target));
  return Tensor3(dims_, target, std::move(e));
}

Tensor3 Tensor3::operator*(const Scalar& s) const {
  Tensor3 t(*this);
  for (auto& e : t.data_) e *= s;
  return t;
}

Tensor3 Tensor3::operator+(const Tensor3& o) const {
  if (dims_ != o.dims_) throw DomainError("tensor dimension mismatch");
  if (field_ != o.field_) throw ModeMismatch("tensor field mismatch");
  Tensor3 t(*this);
  for (std::size_t i = 0; i < data_.size(); ++i) t.data_[i] += o.data_[i];
  return t;
}

bool Tensor3::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Scalar& s) { return s.is_zero(); });
}

double Tensor3::max_abs() const {
  double m = 0;
  for (const auto& s : data_) m = std::max(m, std::fabs(s.to_double()));
  return m;
}

bool Tensor3::operator==(const Tensor3& o) const {
  return dims_ == o.dims_ && field_ == o.field_ && data_ == o.data_;
}

SpecialFormFlags special_form_flags(const Tensor3& t) {
  SpecialFormFlags flags;
  if (t.dims() != Tensor3::Dims{3, 3, 4}) return flags;
  for (int k = 0; k < 4; ++k) {
    for (auto [i, j] : {std::pair{0, 2}, std::pair{1, 2}, std::pair{2, 0}, std::pair{2, 1}}) {
      flags.zero_positions.push_back({i, j, k});
    }
  }
  flags.is_special = std::all_of(flags.zero_positions.begin(), flags.zero_positions.end(),
                                 [&](const auto& p) { return t(p[0], p[1], p[2]).is_zero(); });
  return flags;
}

}  // namespace salmon
