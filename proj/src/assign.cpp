#include "salmon/assign.hpp"

#include "salmon/errors.hpp"

namespace salmon {

namespace {

void require_match(const Tensor3& t, const VarRegistry& reg) {
  const auto& d = reg.layout().x_dims;
  if (d[0] != t.m() || d[1] != t.n() || d[2] != t.l()) throw DomainError("tensor shape does not match the registry");
}

}  // namespace

std::vector<Scalar> x_assignment(const Tensor3& t, const VarRegistry& reg) {
  require_match(t, reg);
  std::vector<Scalar> v(reg.size(), t.field().zero());
  for (int i = 0; i < t.m(); ++i)
    for (int j = 0; j < t.n(); ++j)
      for (int k = 0; k < t.l(); ++k) v[reg.x(i + 1, j + 1, k + 1)] = t(i, j, k);
  return v;
}

std::vector<std::uint64_t> x_residues(const Tensor3& t, const VarRegistry& reg) {
  require_match(t, reg);
  if (!t.field().is_prime_field()) throw ModeMismatch("x_residues needs a prime-field tensor");
  std::vector<std::uint64_t> v(reg.size(), 0);
  for (int i = 0; i < t.m(); ++i)
    for (int j = 0; j < t.n(); ++j)
      for (int k = 0; k < t.l(); ++k) v[reg.x(i + 1, j + 1, k + 1)] = t(i, j, k).residue_value();
  return v;
}

}  // namespace salmon
