#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "salmon/matrix.hpp"

namespace salmon {

/// Dense m x n x l tensor. Entries are stored with k slowest, then i, then j,
/// i.e. the frontal slices concatenated row-major. Indices are 0-based.
class Tensor3 {
 public:
  using Dims = std::array<int, 3>;

  Tensor3(Dims dims, const Field& field);
  Tensor3(Dims dims, const Field& field, std::vector<Scalar> entries);
  /// Builds a tensor from its frontal slices (all the same shape).
  static Tensor3 from_frontal(const std::vector<Matrix>& slices);

  const Dims& dims() const { return dims_; }
  int m() const { return dims_[0]; }
  int n() const { return dims_[1]; }
  int l() const { return dims_[2]; }
  const Field& field() const { return field_; }
  std::size_t size() const { return data_.size(); }
  std::span<const Scalar> entries() const { return data_; }

  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * dims_[0] + i) * dims_[1] + j;
  }
  Scalar& operator()(int i, int j, int k) { return data_[index(i, j, k)]; }
  const Scalar& operator()(int i, int j, int k) const { return data_[index(i, j, k)]; }

  /// Sections obtained by fixing the index on axis `direction` (1, 2 or 3),
  /// in increasing order of the fixed index. Rows run over the smaller-numbered
  /// remaining axis. Direction 3 gives the frontal slices.
  std::vector<Matrix> slices(int direction) const;
  /// Inverse of slices(direction).
  static Tensor3 from_slices(int direction, const std::vector<Matrix>& sections);

  /// Flattening with axis `axis` (1..3) as rows and the other two axes (in
  /// increasing order, the later one fastest) as columns.
  Matrix flattening(int axis) const;

  /// T'(i,j,k) = sum A(i,i') B(j,j') C(k,k') T(i',j',k').
  Tensor3 change_basis(const Matrix& a, const Matrix& b, const Matrix& c) const;
  /// T'(i_{perm[0]}, i_{perm[1]}, i_{perm[2]}) = T(i_0, i_1, i_2); perm is a permutation of {0,1,2}.
  Tensor3 permute_axes(const std::array<int, 3>& perm) const;
  /// Exchanges axes 1 and 2 (transposes every frontal slice).
  Tensor3 swap12() const { return permute_axes({1, 0, 2}); }
  /// Zero-padded copy in a larger box.
  Tensor3 embed(Dims dims) const;
  Tensor3 convert(const Field& target) const;
  Tensor3 operator*(const Scalar& s) const;
  Tensor3 operator+(const Tensor3& o) const;

  bool is_zero() const;
  /// max |entry| as a double.
  double max_abs() const;
  bool operator==(const Tensor3& o) const;
  bool operator!=(const Tensor3& o) const { return !(*this == o); }

 private:
  Dims dims_;
  Field field_;
  std::vector<Scalar> data_;
};

/// Zero pattern x(1,3,k) = x(2,3,k) = x(3,1,k) = x(3,2,k) = 0 on 3x3x4 tensors:
/// each frontal slice is a 2x2 block plus an isolated (3,3) entry.
struct SpecialFormFlags {
  bool is_special = false;
  /// The 16 constrained positions as 0-based (i, j, k).
  std::vector<std::array<int, 3>> zero_positions;
};

SpecialFormFlags special_form_flags(const Tensor3& t);

}  // namespace salmon
