#include <doctest.h>

#include "salmon/assign.hpp"
#include "salmon/driver.hpp"
#include "salmon/errors.hpp"
#include "salmon/linalg.hpp"
#include "salmon/random.hpp"
#include "salmon/salmon444.hpp"
#include "salmon/sampling.hpp"
#include "salmon/sym9.hpp"

using namespace salmon;

namespace {

const Field Q = Field::rational();
const Field P31 = Field::prime(modp::kMersenne31);

const LMFamily& family() {
  static const LMFamily f = load_lm_file(SALMON_DEFAULT_LM_FILE);
  return f;
}

LiftConfig quick(int trials = 6, std::uint64_t seed = 1) {
  LiftConfig c;
  c.trials = trials;
  c.seed = seed;
  return c;
}

// Direct value of a lifted condition at Y.
Scalar condition_value(LiftFamily fam, std::size_t condition, const Tensor3& y) {
  if (fam == LiftFamily::LM6) return eval_lm(family(), y)[condition - 1];
  const SymSystem s = build_sym_matrices(y);
  const auto minors = condition < 220 ? minor_values(s.cl, 9) : minor_values(s.cr, 9);
  return minors[condition % 220].value;
}

// Checks the extraction identity on supports that were fully processed: with P,
// Q supported on S, the condition equals the sum of emitted coefficients whose
// support lies inside S.
void check_resummation(const LiftGeneration& g, std::size_t max_supports) {
  const RegistryPtr& reg = lift_registry();
  std::vector<std::uint32_t> supports;
  for (const auto& c : g.coefficients) {
    const std::uint32_t s = lift_support(c.pq);
    if (std::find(supports.begin(), supports.end(), s) == supports.end()) supports.push_back(s);
  }
  REQUIRE_FALSE(supports.empty());
  Rng rng(404);
  for (std::size_t n = 0; n < std::min(max_supports, supports.size()); ++n) {
    const std::uint32_t s = supports[n];
    const Tensor3 t = sample_dense({4, 4, 4}, P31, 500 + n);
    Matrix p(4, 4, P31), q(4, 4, P31);
    auto values = x_assignment(t, *reg);
    for (int i = 1; i <= 3; ++i)
      for (int a = 1; a <= 4; ++a)
        if (s >> lift_p_bit(i, a) & 1) p(i - 1, a - 1) = values[reg->p(i, a)] = P31.from_int(rng.uniform_int(1, 1000));
    for (int b = 1; b <= 4; ++b)
      for (int j = 1; j <= 3; ++j)
        if (s >> lift_q_bit(b, j) & 1) q(b - 1, j - 1) = values[reg->q(b, j)] = P31.from_int(rng.uniform_int(1, 1000));
    const Tensor3 y = lift_tensor(t, g.l, p, q);
    std::vector<std::size_t> conds;
    for (const auto& c : g.coefficients)
      if (lift_support(c.pq) == s && std::find(conds.begin(), conds.end(), c.condition) == conds.end())
        conds.push_back(c.condition);
    for (std::size_t cond : conds) {
      Scalar sum = P31.zero();
      for (const auto& c : g.coefficients) {
        if (c.condition != cond || (lift_support(c.pq) & ~s) != 0) continue;
        sum += c.coeff.eval(values) * MultiPoly::from_terms(reg, P31, {{c.pq, P31.one()}}).eval(values);
      }
      CHECK(sum == condition_value(g.family, cond, y));
    }
  }
}

}  // namespace

TEST_SUITE("lift_eval") {
  TEST_CASE("lift_tensor with identities is the leading block") {
    const Tensor3 t = sample_dense({4, 4, 4}, Q, 2);
    const Matrix id = Matrix::identity(4, Q);
    for (int l = 1; l <= 3; ++l) {
      const Tensor3 y = lift_tensor(t, l, id, id);
      const auto sec = t.slices(l);
      for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) CHECK(y(i, j, k) == sec[k](i, j));
    }
  }

  TEST_CASE("rank four and zero tensors pass both families") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      const Tensor3 t = sample_rank_r({4, 4, 4}, 4, Q, seed);
      for (int l = 1; l <= 3; ++l) {
        CHECK(lift_eval(t, l, LiftFamily::LM6, &family(), quick()).pass);
        CHECK(lift_eval(t, l, LiftFamily::SYM9, nullptr, quick()).pass);
      }
    }
    CHECK(lift_eval(Tensor3({4, 4, 4}, Q), 2, LiftFamily::LM6, &family(), quick()).pass);
    CHECK(lift_eval(Tensor3({4, 4, 4}, Q), 2, LiftFamily::SYM9, nullptr, quick()).pass);
  }

  TEST_CASE("rational mode agrees on rank four") {
    LiftConfig c = quick(2);
    c.field = Q;
    const Tensor3 t = sample_rank_r({4, 4, 4}, 4, Q, 11);
    CHECK(lift_eval(t, 1, LiftFamily::LM6, &family(), c).pass);
    CHECK(lift_eval(t, 1, LiftFamily::SYM9, nullptr, c).pass);
  }

  TEST_CASE("dense tensors fail with witnesses that recompute") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Tensor3 t = sample_dense({4, 4, 4}, Q, seed);
      for (LiftFamily f : {LiftFamily::LM6, LiftFamily::SYM9}) {
        const LiftResult r = lift_eval(t, 3, f, &family(), quick());
        REQUIRE_FALSE(r.pass);
        REQUIRE(r.witness.has_value());
        const Tensor3 y = lift_tensor(t.convert(P31), 3, r.witness->p, r.witness->q);
        CHECK(condition_value(f, r.witness->condition, y) == r.witness->value);
        CHECK_FALSE(r.witness->value.is_zero());
      }
    }
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(lift_eval(Tensor3({4, 4, 4}, Q), 1, LiftFamily::LM6, nullptr, quick()), PreconditionViolation);
    CHECK_THROWS_AS(lift_eval(Tensor3({3, 3, 4}, Q), 1, LiftFamily::SYM9, nullptr, quick()), DomainError);
    CHECK_THROWS_AS(lift_eval(Tensor3({4, 4, 4}, Field::prime(101)), 1, LiftFamily::SYM9, nullptr, quick()),
                    ModeMismatch);
  }
}

TEST_SUITE("membership444") {
  TEST_CASE("rank four samples are members, before and after a basis change") {
    Rng rng(8);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Tensor3 t = sample_rank_r({4, 4, 4}, 4, Q, seed);
      const MembershipReport r = membership444(t, family(), quick(8, seed));
      CHECK(r.verdict == Verdict::Member);
      CHECK(r.stages.size() == 9);
      const Tensor3 moved = t.change_basis(random_invertible(4, Q, 3, rng), random_invertible(4, Q, 3, rng),
                                           random_invertible(4, Q, 3, rng));
      CHECK(membership444(moved, family(), quick(8, seed)).verdict == Verdict::Member);
    }
  }

  TEST_CASE("matrix multiplication tensor: exact degree-5 witness") {
    LiftConfig c = quick(4);
    c.field = Q;
    const MembershipReport r = membership444(matmul_tensor(), family(), c);
    CHECK(r.verdict == Verdict::NonMember);
    CHECK(r.decided_by == "strassen5.l1");
    CHECK(r.stages.size() == 9);
    CHECK(r.stages[0].witness.has_value());
    CHECK(r.mode == Q.name());
  }

  TEST_CASE("verdicts survive axis permutations") {
    const std::array<std::array<int, 3>, 3> perms = {{{1, 0, 2}, {2, 1, 0}, {1, 2, 0}}};
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      for (const Tensor3& t : {sample_rank_r({4, 4, 4}, 4, Q, seed), sample_dense({4, 4, 4}, Q, seed)}) {
        const Verdict v = membership444(t, family(), quick(6, seed)).verdict;
        for (const auto& p : perms) CHECK(membership444(t.permute_axes(p), family(), quick(6, seed)).verdict == v);
      }
    }
  }

  TEST_CASE("embedded 3x3x4 tensors agree with route B") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      const Tensor3 t = seed % 5 == 0   ? sample_rank_r({3, 3, 4}, 4, Q, seed)
                        : seed % 5 == 1 ? sample_dense({3, 3, 4}, Q, seed)
                        : seed % 5 == 2 ? sample_special_form(false, false, Q, seed)
                        : seed % 5 == 3 ? sample_special_form(false, true, Q, seed)
                                        : sample_essentially_234(Q, seed);
      const Verdict b = membership_route_b(t, family()).verdict;
      CHECK(membership444(t.embed({4, 4, 4}), family(), quick(8, seed)).verdict == b);
    }
  }
}

TEST_SUITE("lift_generate_modp") {
  TEST_CASE("LM6 lift: degree 6, vanishing on rank four, re-summation") {
    const LiftGeneration g = lift_generate_modp(LiftFamily::LM6, 3, modp::kMersenne31, 600'000, 3, &family());
    CHECK(g.exhausted);
    CHECK(g.frontier["size"].get<int>() >= 6);
    REQUIRE_FALSE(g.coefficients.empty());
    std::vector<ModpEvaluator> evals;
    for (const auto& c : g.coefficients) {
      CHECK(c.coeff.is_homogeneous());
      CHECK(c.coeff.degree() == 6);
      evals.emplace_back(c.coeff, modp::kMersenne31);
    }
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto x = x_residues(sample_rank_r({4, 4, 4}, 4, P31, seed), *lift_registry());
      std::size_t nonzero = 0;
      for (const auto& e : evals) nonzero += e(x) != 0;
      CHECK(nonzero == 0);
    }
    check_resummation(g, 3);
  }

  TEST_CASE("SYM9 lift of one minor") {
    const LiftGeneration g = lift_generate_modp(LiftFamily::SYM9, 2, modp::kMersenne31, 1'200'000, 5, nullptr, {7});
    REQUIRE_FALSE(g.coefficients.empty());
    std::vector<ModpEvaluator> evals;
    for (const auto& c : g.coefficients) {
      CHECK(c.condition == 7);
      CHECK(c.coeff.is_homogeneous());
      CHECK(c.coeff.degree() == 9);
      evals.emplace_back(c.coeff, modp::kMersenne31);
    }
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto x = x_residues(sample_rank_r({4, 4, 4}, 4, P31, seed), *lift_registry());
      std::size_t nonzero = 0;
      for (const auto& e : evals) nonzero += e(x) != 0;
      CHECK(nonzero == 0);
    }
    check_resummation(g, 2);
  }

  TEST_CASE("seeded and budgeted") {
    const auto a = lift_generate_modp(LiftFamily::LM6, 1, modp::kMersenne31, 100'000, 9, &family(), {1});
    const auto b = lift_generate_modp(LiftFamily::LM6, 1, modp::kMersenne31, 100'000, 9, &family(), {1});
    CHECK(a.to_json() == b.to_json());
    CHECK(a.exhausted);
    CHECK(a.complete_through >= 5);
    CHECK_THROWS_AS(lift_generate_modp(LiftFamily::LM6, 1, modp::kMersenne31, 10, 0, &family(), {11}), DomainError);
    CHECK_THROWS_AS(lift_generate_modp(LiftFamily::LM6, 1, modp::kMersenne31, 10, 0), PreconditionViolation);
  }
}
