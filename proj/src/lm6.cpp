#include "salmon/lm6.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <map>

#include "salmon/assign.hpp"
#include "salmon/errors.hpp"
#include "salmon/modarith.hpp"
#include "salmon/random.hpp"
#include "salmon/sym9.hpp"
#include "salmon/tensor_io.hpp"

namespace salmon {

namespace {

void require_334(const Tensor3& t, const char* op) {
  if (t.dims() != Tensor3::Dims{3, 3, 4}) throw DomainError(std::string(op) + ": tensor must be 3x3x4");
}

std::vector<std::size_t> off_block_vars() {
  const auto& reg = registry_334();
  std::vector<std::size_t> v;
  for (int k = 1; k <= 4; ++k) {
    v.push_back(reg->x(1, 3, k));
    v.push_back(reg->x(2, 3, k));
    v.push_back(reg->x(3, 1, k));
    v.push_back(reg->x(3, 2, k));
  }
  return v;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

const RegistryPtr& registry_334() {
  static const RegistryPtr reg = VarRegistry::tensor(3, 3, 4);
  return reg;
}

Scalar f_det(const Tensor3& t) {
  require_334(t, "f_det");
  Matrix y(4, 4, t.field());
  for (int k = 0; k < 4; ++k) {
    y(k, 0) = t(0, 0, k);
    y(k, 1) = t(0, 1, k);
    y(k, 2) = t(1, 0, k);
    y(k, 3) = t(1, 1, k);
  }
  if (!t.field().is_exact()) {
    // Float mode: Leibniz formula, 24 products.
    double acc = 0;
    std::array<int, 4> perm{0, 1, 2, 3};
    do {
      int inv = 0;
      for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) inv += perm[a] > perm[b];
      double prod = (inv % 2) ? -1.0 : 1.0;
      for (int k = 0; k < 4; ++k) prod *= y(k, perm[k]).float_value();
      acc += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return Scalar(acc);
  }
  return det(y);
}

MultiPoly f_polynomial() {
  const auto& reg = registry_334();
  const Field q = Field::rational();
  const std::array<std::pair<int, int>, 4> cols{{{1, 1}, {1, 2}, {2, 1}, {2, 2}}};
  std::vector<Term> terms;
  std::array<int, 4> perm{0, 1, 2, 3};
  do {
    int inv = 0;
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) inv += perm[a] > perm[b];
    std::vector<VarPower> f;
    for (int k = 0; k < 4; ++k) {
      auto [i, j] = cols[perm[k]];
      f.push_back({static_cast<std::uint32_t>(reg->x(i, j, k + 1)), 1});
    }
    terms.push_back({Monomial(std::move(f)), q.from_int(inv % 2 ? -1 : 1)});
  } while (std::next_permutation(perm.begin(), perm.end()));
  return MultiPoly::from_terms(reg, q, std::move(terms));
}

std::size_t lm_independence_rank(const std::vector<MultiPoly>& polys, std::uint64_t p, std::uint64_t seed) {
  const auto& reg = registry_334();
  Rng rng(seed);
  const std::size_t points = 16;
  ModpDense m{polys.size(), points, p, std::vector<std::uint64_t>(polys.size() * points)};
  std::vector<ModpEvaluator> evals;
  for (const auto& f : polys) evals.emplace_back(f, p);
  for (std::size_t c = 0; c < points; ++c) {
    std::vector<std::uint64_t> x(reg->size());
    for (auto& v : x) v = rng.uniform_residue(p);
    for (std::size_t r = 0; r < polys.size(); ++r) m(r, c) = evals[r](x);
  }
  return modp_rank(std::move(m));
}

LMFamily parse_lm_file(std::string_view text, std::string source) {
  LMFamily fam{parse_poly_file(text, registry_334(), Field::rational()), std::move(source)};
  if (fam.polys.size() != 10) {
    throw ValidationError("LM family must contain 10 polynomials, found " + std::to_string(fam.polys.size()));
  }
  for (std::size_t i = 0; i < fam.polys.size(); ++i) {
    const auto& f = fam.polys[i];
    if (f.is_zero()) throw ValidationError("LM polynomial " + std::to_string(i + 1) + " is zero");
    if (!f.is_homogeneous() || f.degree() != 6) {
      throw ValidationError("LM polynomial " + std::to_string(i + 1) + " is not homogeneous of degree 6");
    }
  }
  const std::size_t r = lm_independence_rank(fam.polys, modp::kMersenne31, 0x5eed);
  if (r != 10) throw ValidationError("LM polynomials are dependent: evaluation rank " + std::to_string(r));
  return fam;
}

LMFamily load_lm_file(const std::filesystem::path& path) { return parse_lm_file(read_text_file(path), path.string()); }

std::filesystem::path default_lm_path() {
  if (const char* env = std::getenv("SALMON_LM_FILE"); env && *env) return env;
  return SALMON_DEFAULT_LM_FILE;
}

nlohmann::json RestrictedReport::to_json() const {
  nlohmann::json j;
  j["pass"] = pass;
  nlohmann::json es = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json x{{"index", e.index + 1}, {"restricted_terms", e.restricted_terms}, {"divisible", e.divisible}};
    if (e.pair) x["pair"] = {e.pair->first, e.pair->second};
    if (e.scalar) x["scalar"] = e.scalar->to_string();
    if (!e.problem.empty()) x["problem"] = e.problem;
    es.push_back(std::move(x));
  }
  j["entries"] = std::move(es);
  j["problems"] = problems;
  return j;
}

RestrictedReport restricted_identity_check(const LMFamily& fam) {
  const auto& reg = registry_334();
  const MultiPoly f = f_polynomial();
  const auto zero_vars = off_block_vars();
  RestrictedReport rep;
  std::map<std::pair<int, int>, std::size_t> seen;
  for (std::size_t i = 0; i < fam.polys.size(); ++i) {
    RestrictedEntry e;
    e.index = i;
    const MultiPoly r = fam.polys[i].substitute_zero(zero_vars);
    e.restricted_terms = r.term_count();
    if (r.is_zero()) {
      e.problem = "restriction is zero";
    } else {
      try {
        const MultiPoly quot = poly_div_exact(r, f);
        e.divisible = true;
        std::optional<std::pair<int, int>> pair;
        if (quot.term_count() == 1 && quot.degree() == 2) {
          std::vector<int> ks;
          for (const auto& vp : quot.leading_term().mono.factors()) {
            const VarName& n = reg->name(vp.var);
            if (n.idx[0] == 3 && n.idx[1] == 3)
              for (std::uint32_t t = 0; t < vp.exp; ++t) ks.push_back(n.idx[2]);
          }
          if (ks.size() == 2) pair = std::pair{ks[0], ks[1]};
        }
        if (pair) {
          e.pair = pair;
          e.scalar = quot.leading_term().coeff;
        } else {
          e.problem = "quotient " + quot.to_text() + " is not c*x_3_3_k*x_3_3_l";
        }
      } catch (const NotDivisible&) {
        e.problem = "restriction is not divisible by f";
      }
    }
    if (e.problem.empty() && e.restricted_terms != 24) {
      e.problem = "restriction has " + std::to_string(e.restricted_terms) + " terms, expected 24";
    }
    if (e.pair) ++seen[*e.pair];
    if (!e.problem.empty()) rep.problems.push_back("polynomial " + std::to_string(i + 1) + ": " + e.problem);
    rep.entries.push_back(std::move(e));
  }
  for (int k = 1; k <= 4; ++k)
    for (int l = k; l <= 4; ++l) {
      const std::size_t c = seen.count({k, l}) ? seen[{k, l}] : 0;
      if (c != 1) {
        rep.problems.push_back("pair (" + std::to_string(k) + "," + std::to_string(l) + ") covered " +
                               std::to_string(c) + " times");
      }
    }
  rep.pass = rep.problems.empty() && rep.entries.size() == 10;
  if (rep.entries.size() != 10) rep.problems.push_back("family does not have 10 polynomials");
  return rep;
}

std::vector<Scalar> eval_lm(const LMFamily& fam, const Tensor3& t) {
  require_334(t, "eval_lm");
  std::vector<Scalar> out;
  if (t.field().is_prime_field()) {
    LMModpEvaluator ev(fam, t.field().modulus());
    for (auto v : ev(x_residues(t, *registry_334()))) out.push_back(Scalar(Residue{v, t.field().modulus()}));
    return out;
  }
  const auto vals = x_assignment(t, *registry_334());
  for (const auto& f : fam.polys) {
    out.push_back(t.field().is_rational() ? f.eval(vals) : f.convert(t.field()).eval(vals));
  }
  return out;
}

LMModpEvaluator::LMModpEvaluator(const LMFamily& f, std::uint64_t p) : p_(p) {
  for (const auto& poly : f.polys) evals_.emplace_back(poly, p);
}

std::vector<std::uint64_t> LMModpEvaluator::operator()(std::span<const std::uint64_t> values) const {
  std::vector<std::uint64_t> out;
  out.reserve(evals_.size());
  for (const auto& e : evals_) out.push_back(e(values));
  return out;
}

std::optional<std::size_t> LMModpEvaluator::first_nonzero(std::span<const std::uint64_t> values) const {
  for (std::size_t i = 0; i < evals_.size(); ++i)
    if (evals_[i](values) != 0) return i;
  return std::nullopt;
}

bool special_membership(const Tensor3& t) {
  if (!special_form_flags(t).is_special) throw DomainError("special_membership: tensor is not of special form");
  if (f_det(t).is_zero()) return true;
  for (int k = 0; k < 4; ++k)
    if (!t(2, 2, k).is_zero()) return false;
  return true;
}

SpecialBasis special_basis_change(const Tensor3& t) {
  if (!special_form_flags(t).is_special) throw DomainError("special_basis_change: tensor is not of special form");
  const Field& fld = t.field();
  if (!f_det(t).is_zero()) throw PreconditionViolation("special_basis_change: f does not vanish");
  // Column k of `flat` is vec(X_k).
  Matrix flat(9, 4, fld);
  for (int k = 0; k < 4; ++k)
    for (int e = 0; e < 9; ++e) flat(e, k) = t(e / 3, e % 3, k);
  if (rank(flat) < 4) throw PreconditionViolation("special_basis_change: frontal slices are linearly dependent");

  Matrix blocks(4, 4, fld);  // column k is vec(Y_k)
  Matrix x33(1, 4, fld);
  for (int k = 0; k < 4; ++k) {
    blocks(0, k) = t(0, 0, k);
    blocks(1, k) = t(0, 1, k);
    blocks(2, k) = t(1, 0, k);
    blocks(3, k) = t(1, 1, k);
    x33(0, k) = t(2, 2, k);
  }
  // Independent slices force exactly one relation among the Y_k.
  auto c = kernel_basis(blocks).at(0);
  Scalar s = fld.zero();
  for (int k = 0; k < 4; ++k) s += c[k] * x33(0, k);
  for (auto& ck : c) ck /= s;
  auto d = kernel_basis(x33);

  SpecialBasis out{{}, Matrix(4, 4, fld)};
  const auto front = t.slices(3);
  auto combine = [&](const std::vector<Scalar>& w, int row) {
    Matrix z(3, 3, fld);
    for (int k = 0; k < 4; ++k) {
      out.coeffs(row, k) = w[k];
      if (!w[k].is_zero()) z = z + front[k] * w[k];
    }
    return z;
  };
  for (int r = 0; r < 3; ++r) out.z.push_back(combine(d.at(r), r));
  out.z.push_back(combine(c, 3));
  return out;
}

std::pair<Matrix, Matrix> rank_one_factor(const Matrix& m) {
  if (rank(m) != 1) throw DomainError("rank_one_factor: matrix rank is " + std::to_string(rank(m)) + ", not 1");
  std::size_t col = 0;
  while (m.column_values(col) == std::vector<Scalar>(m.rows(), m.field().zero())) ++col;
  Matrix u = Matrix::column(m.column_values(col), m.field());
  std::size_t row = 0;
  while (u(row, 0).is_zero()) ++row;
  const Scalar inv = u(row, 0).inverse();
  Matrix v(m.cols(), 1, m.field());
  for (std::size_t j = 0; j < m.cols(); ++j) v(j, 0) = m(row, j) * inv;
  return {u, v};
}

std::string to_string(NormalCase c) {
  switch (c) {
    case NormalCase::E33_E33:
      return "E33_E33";
    case NormalCase::E33_E32:
      return "E33_E32";
    case NormalCase::E23_E33:
      return "E23_E33";
    case NormalCase::E22_E22:
      return "E22_E22";
  }
  return "?";
}

namespace {

// Invertible P with zero third row off the diagonal and P y = e3 (y3 != 0) or e2 (y3 == 0).
Matrix lemma_matrix(const Matrix& y) {
  const Field& f = y.field();
  const Scalar y1 = y(0, 0), y2 = y(1, 0), y3 = y(2, 0);
  Matrix p(3, 3, f);
  if (!y3.is_zero()) {
    p(0, 0) = y3;
    p(0, 2) = -y1;
    p(1, 1) = y3;
    p(1, 2) = -y2;
    p(2, 2) = y3.inverse();
  } else if (!y1.is_zero()) {
    p(0, 0) = y2;
    p(0, 1) = -y1;
    p(1, 0) = y1.inverse();
    p(2, 2) = f.one();
  } else {
    p(0, 0) = f.one();
    p(1, 1) = y2.inverse();
    p(2, 2) = f.one();
  }
  return p;
}

// Index (0-based) of the last nonzero coordinate of a column vector.
std::size_t last_nonzero(const Matrix& v) {
  for (std::size_t i = v.rows(); i-- > 0;)
    if (!v(i, 0).is_zero()) return i;
  throw DomainError("zero vector");
}

// Rows e_a, e_b (a, b != skip) and w^T.
Matrix complete_rows(const Matrix& w, std::size_t skip) {
  const Field& f = w.field();
  Matrix m(3, 3, f);
  std::size_t r = 0;
  for (std::size_t a = 0; a < 3; ++a) {
    if (a == skip) continue;
    m(r++, a) = f.one();
  }
  for (std::size_t c = 0; c < 3; ++c) m(2, c) = w(c, 0);
  return m;
}

}  // namespace

NormalFormCase normalize_pair_raw(const Matrix& l, const Matrix& r) {
  const auto [u, v] = rank_one_factor(l);
  const auto [x, y] = rank_one_factor(r);
  // Stage 0: Q0^T u = e3 and P0^{-T} v = e3.
  // Q0^T is the inverse of the column matrix [e_a e_b u].
  const Matrix q0 = inverse(complete_rows(u, last_nonzero(u)));
  const Matrix p0 = complete_rows(v, last_nonzero(v));
  const Matrix x1 = inverse(q0) * x;
  const Matrix y1 = p0 * y;
  // Stage 1: lemma on both sides, preserving the third-row pattern.
  const Matrix p1 = lemma_matrix(y1);
  const Matrix m1 = lemma_matrix(x1);
  const Matrix q1 = inverse(m1);
  const Field& f = l.field();
  NormalFormCase out{NormalCase::E33_E33, p1 * p0, q0 * q1, false, Matrix(3, 3, f), Matrix(3, 3, f), p1, q1};
  out.l1 = out.q.transpose() * l * inverse(out.p);
  out.r1 = inverse(out.q) * r * out.p.transpose();
  const bool x_e3 = !x1(2, 0).is_zero(), y_e3 = !y1(2, 0).is_zero();
  out.case_id = x_e3 ? (y_e3 ? NormalCase::E33_E33 : NormalCase::E33_E32)
                     : (y_e3 ? NormalCase::E23_E33 : NormalCase::E22_E22);
  return out;
}

NormalFormCase normalize_pair(const Matrix& l, const Matrix& r) {
  NormalFormCase c = normalize_pair_raw(l, r);
  if (c.case_id != NormalCase::E23_E33) return c;
  NormalFormCase t = normalize_pair_raw(r.transpose(), l.transpose());
  t.transposed = true;
  return t;
}

MembershipReport membership_route_b(const Tensor3& t, const LMFamily& fam) {
  require_334(t, "membership_route_b");
  if (!t.field().is_exact()) throw ModeMismatch("route B needs an exact mode");
  MembershipReport rep;
  rep.route = "B";
  rep.mode = t.field().name();

  auto t0 = std::chrono::steady_clock::now();
  const Sym9Result r9 = sym9_test(build_sym_matrices(t));
  Stage st9{"sym9", r9.pass, std::nullopt, {{"rank_CL", r9.rank_l}, {"rank_CR", r9.rank_r}}, 0};
  if (!r9.pass) {
    nlohmann::json w = nlohmann::json::array();
    if (r9.witness_l) w.push_back(minor_to_json(*r9.witness_l, "CL"));
    if (r9.witness_r) w.push_back(minor_to_json(*r9.witness_r, "CR"));
    st9.witness = std::move(w);
  }
  st9.seconds = seconds_since(t0);
  rep.stages.push_back(std::move(st9));
  if (!r9.pass) {
    rep.verdict = Verdict::NonMember;
    rep.decided_by = "sym9";
    return rep;
  }

  t0 = std::chrono::steady_clock::now();
  const auto values = eval_lm(fam, t);
  Stage st6{"lm6", true, std::nullopt, {{"source", fam.source}}, 0};
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values[i].is_zero()) {
      st6.pass = false;
      st6.witness = nlohmann::json{{"index", i + 1}, {"value", values[i].to_string()}};
      break;
    }
  }
  st6.seconds = seconds_since(t0);
  rep.stages.push_back(std::move(st6));
  if (!rep.stages.back().pass) {
    rep.verdict = Verdict::NonMember;
    rep.decided_by = "lm6";
  }
  return rep;
}

}  // namespace salmon
