#include "salmon/strassen.hpp"

#include <algorithm>
#include <unordered_set>

#include "salmon/errors.hpp"
#include "salmon/modarith.hpp"
#include "salmon/random.hpp"

namespace salmon {

namespace {

void require_444(const Tensor3& t, const char* op) {
  if (t.dims() != Tensor3::Dims{4, 4, 4}) throw DomainError(std::string(op) + ": tensor must be 4x4x4");
}

void require_direction(int l) {
  if (l < 1 || l > 3) throw DomainError("direction l must be 1, 2 or 3");
}

using PolyMatrix = std::vector<MultiPoly>;  // 4x4 row-major

PolyMatrix poly_mul(const PolyMatrix& a, const PolyMatrix& b, std::size_t& processed, std::size_t cap) {
  const RegistryPtr& reg = a[0].registry();
  const Field field = a[0].field();
  PolyMatrix out;
  out.reserve(16);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      PolyBuilder acc(reg, field);
      for (int k = 0; k < 4; ++k) {
        const MultiPoly& x = a[r * 4 + k];
        const MultiPoly& y = b[k * 4 + c];
        processed += x.term_count() * y.term_count();
        if (processed > cap) {
          throw BudgetExceeded("strassen_generate: term cap " + std::to_string(cap) + " exceeded");
        }
        for (const auto& t : x.terms()) acc.add_product(t.coeff, t.mono, y);
      }
      out.push_back(std::move(acc).build());
    }
  return out;
}

PolyMatrix poly_adjugate(const PolyMatrix& m, std::size_t& processed, std::size_t cap) {
  PolyMatrix out(16, MultiPoly(m[0].registry(), m[0].field()));
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      int rows[3], cols[3];
      for (int t = 0, r = 0; t < 4; ++t)
        if (t != a) rows[r++] = t;
      for (int t = 0, c = 0; t < 4; ++t)
        if (t != b) cols[c++] = t;
      MultiPoly det(m[0].registry(), m[0].field());
      static constexpr int perms[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}, {2, 1, 0}, {1, 0, 2}};
      for (int s = 0; s < 6; ++s) {
        MultiPoly prod = m[rows[0] * 4 + cols[perms[s][0]]] * m[rows[1] * 4 + cols[perms[s][1]]];
        prod = prod * m[rows[2] * 4 + cols[perms[s][2]]];
        processed += prod.term_count();
        det = s < 3 ? det + prod : det - prod;
      }
      if (processed > cap) throw BudgetExceeded("strassen_generate: term cap " + std::to_string(cap) + " exceeded");
      out[b * 4 + a] = (a + b) % 2 == 0 ? det : -det;
    }
  return out;
}

}  // namespace

std::array<int, 3> section_position(int l, int j, int r, int c) {
  std::array<int, 3> idx{};
  idx[l - 1] = j;
  const int p = l == 1 ? 1 : 0, q = l == 3 ? 1 : 2;
  idx[p] = r;
  idx[q] = c;
  return idx;
}

Matrix strassen_commutator(const std::vector<Matrix>& sections, std::span<const Scalar> u) {
  if (sections.size() != 4 || u.size() != 12) throw DomainError("strassen_commutator: need 4 sections and 12 u values");
  const Field field = sections[0].field();
  std::vector<Matrix> us;
  for (int i = 0; i < 3; ++i) {
    Matrix m(4, 4, field);
    for (int j = 0; j < 4; ++j) m = m + sections[j] * u[j * 3 + i];
    us.push_back(std::move(m));
  }
  const Matrix adj = adjugate(us[1]);
  return us[0] * adj * us[2] - us[2] * adj * us[0];
}

nlohmann::json StrassenWitness::to_json() const {
  nlohmann::json uj = nlohmann::json::array();
  for (const auto& v : u) uj.push_back(v.to_string());
  return {{"l", l}, {"trial", trial}, {"u", uj}, {"entry", {row, col}}, {"value", value.to_string()}};
}

StrassenResult strassen_eval(const Tensor3& t, int l, int trials, std::uint64_t seed) {
  require_444(t, "strassen_eval");
  require_direction(l);
  if (!t.field().is_exact()) throw ModeMismatch("strassen_eval needs an exact mode");
  if (trials < 1) throw DomainError("strassen_eval: trials must be positive");
  const Field field = t.field();
  const auto sections = t.slices(l);
  StrassenResult res;
  res.l = l;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(derive_seed(seed, {0x5754, static_cast<std::uint64_t>(l), static_cast<std::uint64_t>(trial)}));
    std::vector<Scalar> u;
    for (int v = 0; v < 12; ++v) {
      u.push_back(field.is_prime_field()
                      ? field.from_int(static_cast<std::int64_t>(rng.uniform_residue(field.modulus())))
                      : field.from_int(rng.uniform_int(-kRationalDrawBound, kRationalDrawBound)));
    }
    const Matrix e = strassen_commutator(sections, u);
    ++res.trials;
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) {
        if (e(r, c).is_zero()) continue;
        res.pass = false;
        res.witness = StrassenWitness{l, trial, u, r, c, e(r, c)};
        return res;
      }
  }
  return res;
}

const RegistryPtr& strassen_registry() {
  static const RegistryPtr reg = VarRegistry::make({{4, 4, 4}, {4, 3}, 0, 0});
  return reg;
}

StrassenFamily strassen_generate(int l, const Field& field, std::size_t term_cap) {
  require_direction(l);
  if (!field.is_exact()) throw ModeMismatch("strassen_generate needs an exact mode");
  const RegistryPtr& reg = strassen_registry();
  std::vector<PolyMatrix> us;
  for (int i = 1; i <= 3; ++i) {
    PolyMatrix m;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        std::vector<Term> terms;
        for (int j = 0; j < 4; ++j) {
          const auto pos = section_position(l, j, r, c);
          Monomial mono = Monomial::variable(reg->u(j + 1, i)) * Monomial::variable(reg->x(pos[0] + 1, pos[1] + 1, pos[2] + 1));
          terms.push_back({std::move(mono), field.one()});
        }
        m.push_back(MultiPoly::from_terms(reg, field, std::move(terms)));
      }
    us.push_back(std::move(m));
  }

  StrassenFamily fam;
  fam.l = l;
  fam.field = field;
  std::size_t& processed = fam.terms_processed;
  const PolyMatrix adj = poly_adjugate(us[1], processed, term_cap);
  const PolyMatrix left = poly_mul(poly_mul(us[0], adj, processed, term_cap), us[2], processed, term_cap);
  const PolyMatrix right = poly_mul(poly_mul(us[2], adj, processed, term_cap), us[0], processed, term_cap);

  const auto uvars = reg->ids_of(VarClass::U);
  std::unordered_set<std::string> seen;
  for (std::size_t e = 0; e < 16; ++e) {
    const MultiPoly entry = left[e] - right[e];
    for (auto& [mono, coeff] : poly_extract_coeffs(entry, uvars)) {
      if (coeff.is_zero()) continue;
      if (seen.insert(coeff.to_text()).second) fam.spanning.push_back(coeff);
      fam.coefficients.push_back({e / 4, e % 4, mono, coeff});
    }
  }
  return fam;
}

std::vector<std::uint64_t> strassen_coefficient_values(std::span<const std::uint64_t> x, std::uint64_t p) {
  using namespace modp;
  if (x.size() != 64) throw DomainError("strassen_coefficient_values: need 4 sections of 4x4");
  auto at = [&](int j, int r, int c) { return x[j * 16 + r * 4 + c]; };

  // adj coefficient of u2^J, J = j0 <= j1 <= j2, by mixed cofactors.
  std::vector<std::array<int, 3>> monos;
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b)
      for (int c = b; c < 4; ++c) monos.push_back({a, b, c});
  auto mono_index = [&](std::array<int, 3> j) {
    std::sort(j.begin(), j.end());
    for (std::size_t m = 0; m < monos.size(); ++m)
      if (monos[m] == j) return m;
    return std::size_t{0};
  };
  std::vector<std::array<std::uint64_t, 16>> adj(monos.size());
  for (auto& m : adj) m.fill(0);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      int rows[3], cols[3];
      for (int t = 0, r = 0; t < 4; ++t)
        if (t != a) rows[r++] = t;
      for (int t = 0, c = 0; t < 4; ++t)
        if (t != b) cols[c++] = t;
      const bool negate = (a + b) % 2 == 1;
      for (int j0 = 0; j0 < 4; ++j0)
        for (int j1 = 0; j1 < 4; ++j1)
          for (int j2 = 0; j2 < 4; ++j2) {
            // det of the 3x3 matrix whose row t is row rows[t] of X_{j_t} on cols.
            const int js[3] = {j0, j1, j2};
            std::uint64_t m[3][3];
            for (int t = 0; t < 3; ++t)
              for (int s = 0; s < 3; ++s) m[t][s] = at(js[t], rows[t], cols[s]);
            std::uint64_t d = mul(m[0][0], sub(mul(m[1][1], m[2][2], p), mul(m[1][2], m[2][1], p), p), p);
            d = sub(d, mul(m[0][1], sub(mul(m[1][0], m[2][2], p), mul(m[1][2], m[2][0], p), p), p), p);
            d = add(d, mul(m[0][2], sub(mul(m[1][0], m[2][1], p), mul(m[1][1], m[2][0], p), p), p), p);
            if (negate) d = neg(d, p);
            auto& slot = adj[mono_index({j0, j1, j2})][b * 4 + a];
            slot = add(slot, d, p);
          }
    }

  auto mat_mul = [&](const std::uint64_t* a, const std::uint64_t* b, std::uint64_t* out) {
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        std::uint64_t s = 0;
        for (int k = 0; k < 4; ++k) s = add(s, mul(a[r * 4 + k], b[k * 4 + c], p), p);
        out[r * 4 + c] = s;
      }
  };
  std::vector<std::uint64_t> out;
  out.reserve(kStrassenColumns);
  std::uint64_t xa_adj[16], left[16], xc_adj[16], right[16];
  for (int a = 0; a < 4; ++a)
    for (int c = a + 1; c < 4; ++c)
      for (std::size_t m = 0; m < monos.size(); ++m) {
        mat_mul(&x[a * 16], adj[m].data(), xa_adj);
        mat_mul(xa_adj, &x[c * 16], left);
        mat_mul(&x[c * 16], adj[m].data(), xc_adj);
        mat_mul(xc_adj, &x[a * 16], right);
        for (int e = 0; e < 16; ++e) out.push_back(sub(left[e], right[e], p));
      }
  return out;
}

nlohmann::json StrassenDimension::to_json() const {
  return {{"ls", ls},
          {"prime", prime},
          {"seed", seed},
          {"samples", samples},
          {"columns", columns},
          {"dimension", dimension},
          {"saturated", saturated},
          {"below_polynomial_count", below_polynomial_count}};
}

StrassenDimension strassen_dimension(const std::vector<int>& ls, std::uint64_t prime, std::size_t samples,
                                     std::uint64_t seed) {
  if (ls.empty()) throw DomainError("strassen_dimension: empty direction set");
  for (int l : ls) require_direction(l);
  if (samples == 0) throw DomainError("strassen_dimension: need at least one sample");
  StrassenDimension res;
  res.ls = ls;
  res.prime = prime;
  res.seed = seed;
  res.samples = samples;
  res.columns = kStrassenColumns * ls.size();
  res.below_polynomial_count = samples < res.columns;

  // Rows are polynomials, columns sample points: rank is the same and the
  // elimination touches fewer rows when samples < columns.
  ModpDense m{res.columns, samples, prime, std::vector<std::uint64_t>(res.columns * samples)};
  for (std::size_t s = 0; s < samples; ++s) {
    Rng rng(derive_seed(seed, {0xd1e, s}));
    std::vector<std::uint64_t> x(64);
    for (auto& v : x) v = rng.uniform_residue(prime);
    for (std::size_t li = 0; li < ls.size(); ++li) {
      // Gather the l-sections of the point (x stored as tensor entries, k slowest).
      std::vector<std::uint64_t> sec(64);
      for (int j = 0; j < 4; ++j)
        for (int r = 0; r < 4; ++r)
          for (int c = 0; c < 4; ++c) {
            const auto pos = section_position(ls[li], j, r, c);
            sec[j * 16 + r * 4 + c] = x[(pos[2] * 4 + pos[0]) * 4 + pos[1]];
          }
      const auto vals = strassen_coefficient_values(sec, prime);
      for (std::size_t c = 0; c < vals.size(); ++c) m(li * kStrassenColumns + c, s) = vals[c];
    }
  }
  res.dimension = modp_rank(std::move(m));
  res.saturated = res.dimension == samples;
  return res;
}

}  // namespace salmon
