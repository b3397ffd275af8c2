#include "salmon/lm_derive.hpp"

#include <cstdlib>

#include "salmon/assign.hpp"
#include "salmon/errors.hpp"
#include "salmon/linalg.hpp"
#include "salmon/modarith.hpp"
#include "salmon/random.hpp"
#include "salmon/sampling.hpp"

namespace salmon {

namespace {

constexpr std::uint64_t kP = modp::kMersenne31;

void enumerate(const RegistryPtr& reg, int cell, std::array<int, 3>& ri, std::array<int, 3>& rj,
               std::array<int, 4>& rk, std::vector<VarPower>& cur, std::vector<Monomial>& out) {
  if (cell == 36) {
    if (ri == std::array<int, 3>{0, 0, 0} && rj == std::array<int, 3>{0, 0, 0}) out.emplace_back(cur);
    return;
  }
  const int i = cell / 12, j = (cell / 4) % 3, k = cell % 4;
  const int cap = std::min({ri[i], rj[j], rk[k]});
  for (int e = 0; e <= cap; ++e) {
    if (e > 0) cur.push_back({static_cast<std::uint32_t>(reg->x(i + 1, j + 1, k + 1)), static_cast<std::uint32_t>(e)});
    ri[i] -= e;
    rj[j] -= e;
    rk[k] -= e;
    enumerate(reg, cell + 1, ri, rj, rk, cur, out);
    ri[i] += e;
    rj[j] += e;
    rk[k] += e;
    if (e > 0) cur.pop_back();
  }
}

// n/d with |n|, d <= sqrt(p/2) and n = a d mod p, by the half extended Euclid.
std::optional<mpq_class> rational_reconstruct(std::uint64_t a, std::uint64_t p) {
  std::int64_t r0 = static_cast<std::int64_t>(p), r1 = static_cast<std::int64_t>(a);
  std::int64_t t0 = 0, t1 = 1;
  const double bound = std::sqrt(static_cast<double>(p) / 2);
  while (static_cast<double>(r1) > bound) {
    const std::int64_t q = r0 / r1;
    std::tie(r0, r1) = std::pair{r1, r0 - q * r1};
    std::tie(t0, t1) = std::pair{t1, t0 - q * t1};
  }
  if (t1 == 0 || static_cast<double>(std::llabs(t1)) > bound) return std::nullopt;
  mpq_class v(r1, 1);
  v /= t1;
  return v;
}

// Random point sum_{s<4} a_s (x) b_s (x) c_s over GF(p), indexed by variable id.
std::vector<std::uint64_t> rank4_point_modp(const RegistryPtr& reg, Rng& rng) {
  std::vector<std::uint64_t> x(reg->size(), 0);
  for (int s = 0; s < 4; ++s) {
    std::uint64_t a[3], b[3], c[4];
    for (auto& v : a) v = rng.uniform_residue(kP);
    for (auto& v : b) v = rng.uniform_residue(kP);
    for (auto& v : c) v = rng.uniform_residue(kP);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 4; ++k) {
          auto& e = x[reg->x(i + 1, j + 1, k + 1)];
          e = modp::add(e, modp::mul(modp::mul(a[i], b[j], kP), c[k], kP), kP);
        }
  }
  return x;
}

MultiPoly make_primitive(const MultiPoly& f) {
  mpz_class g = 0, l = 1;
  for (const auto& t : f.terms()) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.rational_value().get_num().get_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coeff.rational_value().get_den().get_mpz_t());
  }
  mpq_class s(l, g);
  if (f.leading_term().coeff.rational_value() < 0) s = -s;
  return f * Scalar(s);
}

}  // namespace

std::vector<Monomial> weight_space_monomials(const RegistryPtr& reg, const std::array<int, 4>& k_content) {
  std::array<int, 3> ri{2, 2, 2}, rj{2, 2, 2};
  std::array<int, 4> rk = k_content;
  std::vector<VarPower> cur;
  std::vector<Monomial> out;
  enumerate(reg, 0, ri, rj, rk, cur, out);
  return out;
}

MultiPoly lower_slice(const MultiPoly& f, int to, int from) {
  const RegistryPtr& reg = f.registry();
  MultiPoly out(reg, f.field());
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) {
      MultiPoly d = f.derivative(reg->x(i, j, from));
      if (!d.is_zero()) out += d * MultiPoly::variable(reg, reg->x(i, j, to), f.field());
    }
  return out;
}

std::vector<MultiPoly> derive_lm_family(std::uint64_t seed, std::ostream* log) {
  const RegistryPtr reg = VarRegistry::tensor(3, 3, 4);
  const Field Q = Field::rational();
  const auto monos = weight_space_monomials(reg, {3, 1, 1, 1});
  if (log) *log << "weight (3,1,1,1): " << monos.size() << " monomials\n";

  Rng rng(derive_seed(seed, {0x1a6}));
  ModpDense a{monos.size() + 32, monos.size(), kP, {}};
  a.a.resize(a.rows * a.cols);
  for (std::size_t r = 0; r < a.rows; ++r) {
    const auto x = rank4_point_modp(reg, rng);
    for (std::size_t c = 0; c < monos.size(); ++c) {
      std::uint64_t v = 1;
      for (const auto& vp : monos[c].factors()) v = modp::mul(v, modp::pow(x[vp.var], vp.exp, kP), kP);
      a(r, c) = v;
    }
  }
  auto ker = modp_kernel(std::move(a));
  if (log) *log << "interpolation kernel dimension: " << ker.size() << "\n";
  if (ker.size() != 1) {
    throw ValidationError("expected a one-dimensional space of vanishing polynomials, found " +
                          std::to_string(ker.size()));
  }

  std::vector<Term> terms;
  for (std::size_t c = 0; c < monos.size(); ++c) {
    if (ker[0][c] == 0) continue;
    auto q = rational_reconstruct(ker[0][c], kP);
    if (!q) throw ValidationError("rational reconstruction failed for an interpolated coefficient");
    terms.push_back({monos[c], Scalar(*q)});
  }
  const MultiPoly top = make_primitive(MultiPoly::from_terms(reg, Q, std::move(terms)));
  if (log) *log << "highest weight polynomial: " << top.term_count() << " terms\n";

  std::vector<MultiPoly> family;
  std::array<MultiPoly, 5> row1{top, top, top, top, top};  // row1[k] ~ p_{1k}
  for (int k = 2; k <= 4; ++k) row1[k] = lower_slice(top, k, 1);
  for (int k = 1; k <= 4; ++k) family.push_back(make_primitive(row1[k]));
  for (int k = 2; k <= 4; ++k)
    for (int l = k; l <= 4; ++l) family.push_back(make_primitive(lower_slice(row1[k], l, 1)));

  for (int trial = 0; trial < 4; ++trial) {
    Tensor3 t = sample_rank_r({3, 3, 4}, 4, Q, derive_seed(seed, {0x1a7, static_cast<std::uint64_t>(trial)}));
    const auto vals = x_assignment(t, *reg);
    for (std::size_t i = 0; i < family.size(); ++i) {
      if (family[i].is_zero() || !family[i].eval(vals).is_zero()) {
        throw ValidationError("reconstructed polynomial " + std::to_string(i + 1) + " does not vanish on rank 4");
      }
    }
  }
  if (log) {
    for (std::size_t i = 0; i < family.size(); ++i) *log << "polynomial " << i + 1 << ": " << family[i].term_count() << " terms\n";
  }
  return family;
}

}  // namespace salmon
