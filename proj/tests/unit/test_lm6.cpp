#include <doctest.h>

#include <set>

#include "salmon/assign.hpp"
#include "salmon/errors.hpp"
#include "salmon/lm6.hpp"
#include "salmon/lm_derive.hpp"
#include "salmon/modarith.hpp"
#include "salmon/sampling.hpp"
#include "salmon/sym9.hpp"
#include "salmon/tensor_io.hpp"

using namespace salmon;

namespace {

const Field Q = Field::rational();

const LMFamily& family() {
  static const LMFamily f = load_lm_file(SALMON_DEFAULT_LM_FILE);
  return f;
}

Tensor3 unit_block_tensor() {
  Tensor3 t({3, 3, 4}, Q);
  t(0, 0, 0) = Q.one();
  t(0, 1, 1) = Q.one();
  t(1, 0, 2) = Q.one();
  t(1, 1, 3) = Q.one();
  return t;
}

Tensor3 swap_slices(const Tensor3& t, int a, int b) {
  auto s = t.slices(3);
  std::swap(s[a], s[b]);
  return Tensor3::from_frontal(s);
}

// Solutions A of "L A and A R symmetric", as a random combination of a kernel basis.
std::optional<Matrix> random_symmetrizer(const Matrix& l, const Matrix& r, Rng& rng) {
  Matrix sys(6, 9, Q);
  int row = 0;
  for (auto [a, b] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
    for (int c = 0; c < 3; ++c) {
      // (L A)[a][b] - (L A)[b][a], A entry (c, d) at column 3c + d.
      sys(row, 3 * c + b) += l(a, c);
      sys(row, 3 * c + a) -= l(b, c);
      // (A R)[a][b] - (A R)[b][a]
      sys(row + 3, 3 * a + c) += r(c, b);
      sys(row + 3, 3 * b + c) -= r(c, a);
    }
    ++row;
  }
  auto ker = kernel_basis(sys);
  if (ker.empty()) return std::nullopt;
  Matrix a(3, 3, Q);
  for (const auto& v : ker) {
    Scalar w = Q.from_int(rng.uniform_int(-5, 5));
    for (int e = 0; e < 9; ++e) a(e / 3, e % 3) += v[e] * w;
  }
  return a;
}

Matrix cross(const Matrix& a, const Matrix& b) {
  Matrix c(3, 1, Q);
  for (int i = 0; i < 3; ++i) c(i, 0) = a((i + 1) % 3, 0) * b((i + 2) % 3, 0) - a((i + 2) % 3, 0) * b((i + 1) % 3, 0);
  return c;
}

}  // namespace

TEST_SUITE("f_det") {
  TEST_CASE("named values") {
    CHECK(f_det(unit_block_tensor()).is_one());
    Tensor3 t = unit_block_tensor();
    t(1, 1, 3) = Q.zero();
    t(0, 0, 3) = Q.one();
    t(0, 1, 3) = Q.one();
    CHECK(f_det(t).is_zero());
    CHECK_THROWS_AS(f_det(Tensor3({4, 4, 4}, Q)), DomainError);
  }

  TEST_CASE("alternating under every slice transposition") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Tensor3 t = sample_dense({3, 3, 4}, Q, seed);
      for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) CHECK(f_det(swap_slices(t, a, b)) == -f_det(t));
    }
  }

  TEST_CASE("multilinear in the slices") {
    Tensor3 t = sample_dense({3, 3, 4}, Q, 1), u = sample_dense({3, 3, 4}, Q, 2);
    for (int k = 0; k < 4; ++k) {
      Tensor3 mix = t;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) mix(i, j, k) = t(i, j, k) * Q.from_int(3) + u(i, j, k);
      Tensor3 only_u = t;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) only_u(i, j, k) = u(i, j, k);
      CHECK(f_det(mix) == f_det(t) * Q.from_int(3) + f_det(only_u));
    }
  }

  TEST_CASE("polynomial form has 24 terms and agrees with the determinant") {
    MultiPoly f = f_polynomial();
    CHECK(f.term_count() == 24);
    CHECK(f.degree() == 4);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Tensor3 t = sample_dense({3, 3, 4}, Q, seed);
      CHECK(f.eval(x_assignment(t, *registry_334())) == f_det(t));
    }
  }
}

TEST_SUITE("lm family file") {
  TEST_CASE("shipped family validates") {
    const LMFamily& f = family();
    CHECK(f.polys.size() == 10);
    for (const auto& p : f.polys) {
      CHECK(p.is_homogeneous());
      CHECK(p.degree() == 6);
    }
    CHECK(lm_independence_rank(f.polys, modp::kMersenne61, 77) == 10);
  }

  TEST_CASE("structural errors") {
    std::string text = read_text_file(SALMON_DEFAULT_LM_FILE);
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
      auto end = text.find('\n', pos);
      std::string line = text.substr(pos, end - pos);
      if (!line.empty() && line[0] != '#') lines.push_back(line);
      pos = end + 1;
    }
    REQUIRE(lines.size() == 10);
    auto join = [](const std::vector<std::string>& ls) {
      std::string s;
      for (const auto& l : ls) s += l + "\n";
      return s;
    };
    auto nine = lines;
    nine.pop_back();
    CHECK_THROWS_AS(parse_lm_file(join(nine)), ValidationError);
    auto deg5 = lines;
    deg5[3] += " + 1*x_1_1_1^5";
    CHECK_THROWS_AS(parse_lm_file(join(deg5)), ValidationError);
    auto dup = lines;
    dup[9] = dup[0];
    CHECK_THROWS_AS(parse_lm_file(join(dup)), ValidationError);
    auto bad = lines;
    bad[0] = "x_4_1_1";
    CHECK_THROWS_AS(parse_lm_file(join(bad)), ParseError);
  }
}

TEST_SUITE("restricted identity") {
  TEST_CASE("shipped family: 24 terms, f divides, pairs covered once") {
    RestrictedReport r = restricted_identity_check(family());
    CHECK(r.pass);
    CHECK(r.problems.empty());
    std::set<std::pair<int, int>> pairs;
    for (const auto& e : r.entries) {
      CHECK(e.restricted_terms == 24);
      CHECK(e.divisible);
      REQUIRE(e.pair.has_value());
      pairs.insert(*e.pair);
    }
    CHECK(pairs.size() == 10);
  }

  TEST_CASE("reconstruction: scalar * x33k * x33l * f equals each restriction") {
    RestrictedReport r = restricted_identity_check(family());
    const auto& reg = registry_334();
    std::vector<std::size_t> zero;
    for (int k = 1; k <= 4; ++k)
      for (auto [i, j] : {std::pair{1, 3}, std::pair{2, 3}, std::pair{3, 1}, std::pair{3, 2}}) zero.push_back(reg->x(i, j, k));
    for (const auto& e : r.entries) {
      MultiPoly q = MultiPoly::variable(reg, reg->x(3, 3, e.pair->first), Q) *
                    MultiPoly::variable(reg, reg->x(3, 3, e.pair->second), Q) * *e.scalar;
      CHECK(q * f_polynomial() == family().polys[e.index].substitute_zero(zero));
    }
  }

  TEST_CASE("a planted bad polynomial is flagged") {
    LMFamily bad = family();
    const auto& reg = registry_334();
    MultiPoly x111 = MultiPoly::variable(reg, reg->x(1, 1, 1), Q);
    bad.polys[4] = f_polynomial() * x111 * x111;
    RestrictedReport r = restricted_identity_check(bad);
    CHECK_FALSE(r.pass);
    CHECK_FALSE(r.entries[4].pair.has_value());
    CHECK_FALSE(r.entries[4].problem.empty());
    CHECK(r.problems.size() >= 2);  // the bad quotient and the now uncovered pair
  }
}

TEST_SUITE("eval_lm") {
  TEST_CASE("vanishes on rank <= 4 samples, exactly and mod p") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Tensor3 t = sample_rank_r({3, 3, 4}, 4, Q, seed);
      for (const auto& v : eval_lm(family(), t)) CHECK(v.is_zero());
      for (const auto& v : eval_lm(family(), t.convert(Field::prime(modp::kMersenne31)))) CHECK(v.is_zero());
    }
    for (const auto& v : eval_lm(family(), Tensor3({3, 3, 4}, Q))) CHECK(v.is_zero());
  }

  TEST_CASE("special form values follow the closed form") {
    RestrictedReport r = restricted_identity_check(family());
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Tensor3 t = sample_special_form(false, false, Q, seed);
      auto vals = eval_lm(family(), t);
      const Scalar f = f_det(t);
      bool some_nonzero = false;
      for (const auto& e : r.entries) {
        const Scalar expect = *e.scalar * t(2, 2, e.pair->first - 1) * t(2, 2, e.pair->second - 1) * f;
        CHECK(vals[e.index] == expect);
        some_nonzero |= !vals[e.index].is_zero();
      }
      CHECK(some_nonzero == (!f.is_zero()));
    }
  }

  TEST_CASE("modular evaluation is the image of the rational one") {
    const Field p = Field::prime(modp::kMersenne61);
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      Tensor3 t = sample_dense({3, 3, 4}, Q, seed);
      auto exact = eval_lm(family(), t);
      auto mod = eval_lm(family(), t.convert(p));
      for (int i = 0; i < 10; ++i) CHECK(convert_scalar(exact[i], p) == mod[i]);
    }
  }
}

TEST_SUITE("special stratum") {
  TEST_CASE("special_membership") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      CHECK(special_membership(sample_special_form(false, true, Q, seed)));
      CHECK(special_membership(sample_special_form(true, false, Q, seed)));
    }
    Tensor3 t = unit_block_tensor();
    t(2, 2, 0) = Q.one();
    CHECK_FALSE(special_membership(t));
    CHECK_THROWS_AS(special_membership(sample_dense({3, 3, 4}, Q, 1)), DomainError);
  }

  TEST_CASE("special_basis_change on f = 0 samples") {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Tensor3 t = sample_special_form(false, true, Q, seed);
      std::optional<SpecialBasis> sb;
      try {
        sb = special_basis_change(t);
      } catch (const PreconditionViolation&) {
        continue;
      }
      const SpecialBasis& b = *sb;
      ++checked;
      REQUIRE(b.z.size() == 4);
      for (int r = 0; r < 3; ++r)
        for (int e = 0; e < 3; ++e) {
          CHECK(b.z[r](2, e).is_zero());
          CHECK(b.z[r](e, 2).is_zero());
        }
      Matrix e3 = Matrix::unit_vector(3, 3, Q);
      CHECK(b.z[3] == e3 * e3.transpose());
      CHECK_FALSE(det(b.coeffs).is_zero());  // same span
      const auto x = t.slices(3);
      for (int r = 0; r < 4; ++r) {
        Matrix s(3, 3, Q);
        for (int k = 0; k < 4; ++k) s = s + x[k] * b.coeffs(r, k);
        CHECK(s == b.z[r]);
      }
    }
    CHECK(checked >= 15);
  }

  TEST_CASE("special_basis_change preconditions and identity case") {
    Tensor3 t = unit_block_tensor();
    t(1, 1, 3) = Q.zero();
    t(2, 2, 3) = Q.one();  // X4 = e3 e3^T, f = 0
    SpecialBasis b = special_basis_change(t);
    CHECK(b.z[3] == t.slices(3)[3]);
    Tensor3 dep = sample_special_form(false, true, Q, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) dep(i, j, 3) = dep(i, j, 0);
    CHECK_THROWS_AS(special_basis_change(dep), PreconditionViolation);
    CHECK_THROWS_AS(special_basis_change(unit_block_tensor()), PreconditionViolation);
  }

  TEST_CASE("rank_one_factor") {
    Matrix e3 = Matrix::unit_vector(3, 3, Q);
    auto [u, v] = rank_one_factor(e3 * e3.transpose());
    CHECK(u == e3);
    CHECK(v == e3);
    Matrix m = Matrix::from_ints(3, 3, Q, {2, 4, 0, 1, 2, 0, 0, 0, 0});
    auto [u2, v2] = rank_one_factor(m);
    CHECK(u2 == Matrix::from_ints(3, 1, Q, {2, 1, 0}));
    CHECK(v2 == Matrix::from_ints(3, 1, Q, {1, 2, 0}));
    CHECK(u2 * v2.transpose() == m);
    CHECK_THROWS_AS(rank_one_factor(Matrix::identity(3, Q)), DomainError);
    CHECK_THROWS_AS(rank_one_factor(Matrix(3, 3, Q)), DomainError);
  }
}

TEST_SUITE("normalize_pair") {
  const Matrix e2 = Matrix::unit_vector(3, 2, Q), e3 = Matrix::unit_vector(3, 3, Q);

  TEST_CASE("named cases") {
    auto c = normalize_pair(e3 * e3.transpose(), e3 * e3.transpose());
    CHECK(c.case_id == NormalCase::E33_E33);
    CHECK(c.p == Matrix::identity(3, Q));
    CHECK(c.q == Matrix::identity(3, Q));
    auto d = normalize_pair(e3 * e3.transpose(), e3 * e2.transpose());
    CHECK(d.case_id == NormalCase::E33_E32);
    CHECK((d.l1 * d.r1.transpose()).is_zero());
    CHECK_FALSE((d.r1.transpose() * d.l1).is_zero());
    auto raw = normalize_pair_raw(e3 * e3.transpose(), e2 * e3.transpose());
    CHECK(raw.case_id == NormalCase::E23_E33);
    auto t = normalize_pair(e3 * e3.transpose(), e2 * e3.transpose());
    CHECK(t.transposed);
    CHECK(t.case_id == NormalCase::E33_E32);
    CHECK(normalize_pair(e3 * e3.transpose(), e2 * e2.transpose()).case_id == NormalCase::E22_E22);
    CHECK_THROWS_AS(normalize_pair(Matrix::identity(3, Q), e3 * e3.transpose()), DomainError);
  }

  TEST_CASE("random rank-one pairs: forms, patterns, symmetry transport") {
    Rng rng(31);
    int generic = 0;
    for (int trial = 0; trial < 60; ++trial) {
      Matrix u = random_matrix(3, 1, Q, 4, rng), v = random_matrix(3, 1, Q, 4, rng);
      Matrix x = random_matrix(3, 1, Q, 4, rng), y = random_matrix(3, 1, Q, 4, rng);
      // Plant the degenerate orientations: y orthogonal to v, x orthogonal to u.
      if (trial % 4 == 1 || trial % 4 == 3) y = cross(v, y);
      if (trial % 4 == 2 || trial % 4 == 3) x = cross(u, x);
      if (u.is_zero() || v.is_zero() || x.is_zero() || y.is_zero()) continue;
      Matrix l = u * v.transpose(), r = x * y.transpose();
      NormalFormCase c = normalize_pair_raw(l, r);
      CHECK_FALSE(det(c.p).is_zero());
      CHECK_FALSE(det(c.q).is_zero());
      // L1 = e3 e3^T up to scale.
      CHECK(rank(c.l1) == 1);
      CHECK((c.l1 - e3 * e3.transpose() * c.l1(2, 2)).is_zero());
      const Matrix xs = c.case_id == NormalCase::E33_E33 || c.case_id == NormalCase::E33_E32 ? e3 : e2;
      const Matrix ys = c.case_id == NormalCase::E33_E33 || c.case_id == NormalCase::E23_E33 ? e3 : e2;
      Matrix form = xs * ys.transpose();
      Scalar s = (form.transpose() * c.r1).trace();
      CHECK((c.r1 - form * s).is_zero());
      // Lemma factors keep the third-row pattern.
      Matrix qi = inverse(c.q1);
      CHECK(c.p1(2, 0).is_zero());
      CHECK(c.p1(2, 1).is_zero());
      CHECK(qi(2, 0).is_zero());
      CHECK(qi(2, 1).is_zero());
      generic += c.case_id == NormalCase::E33_E33;
      if (auto a = random_symmetrizer(l, r, rng)) {
        Matrix a1 = c.p * *a * c.q;
        CHECK((c.l1 * a1).is_symmetric());
        CHECK((a1 * c.r1).is_symmetric());
      }
    }
    CHECK(generic >= 10);
  }
}

TEST_SUITE("route B") {
  TEST_CASE("verdicts and witnesses") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      CHECK(membership_route_b(sample_rank_r({3, 3, 4}, 4, Q, seed), family()).verdict == Verdict::Member);
      auto neg = membership_route_b(sample_dense({3, 3, 4}, Q, seed), family());
      CHECK(neg.verdict == Verdict::NonMember);
      CHECK(neg.stages.back().witness.has_value());
    }
    auto rep = membership_route_b(sample_special_form(false, false, Q, 5), family());
    CHECK(rep.verdict == Verdict::NonMember);
    CHECK(rep.decided_by == "lm6");
  }

  TEST_CASE("agrees with route A and is invariant under scaling") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      Tensor3 t = seed % 5 == 0   ? sample_rank_r({3, 3, 4}, 4, Q, seed)
                  : seed % 5 == 1 ? sample_dense({3, 3, 4}, Q, seed)
                  : seed % 5 == 2 ? sample_special_form(false, false, Q, seed)
                  : seed % 5 == 3 ? sample_special_form(true, false, Q, seed)
                                  : sample_special_form(false, true, Q, seed);
      Verdict b = membership_route_b(t, family()).verdict;
      CHECK(b == membership_route_a(t).verdict);
      CHECK(membership_route_b(t * Q.parse("-7/3"), family()).verdict == b);
      if (special_form_flags(t).is_special) CHECK((b == Verdict::Member) == special_membership(t));
    }
  }
}
