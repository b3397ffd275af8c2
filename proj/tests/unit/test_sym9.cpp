#include <doctest.h>

#include "salmon/errors.hpp"
#include "salmon/sampling.hpp"
#include "salmon/sym9.hpp"

using namespace salmon;

namespace {

const Field Q = Field::rational();

// Strict-upper entries of A - A^T, k-major, stacked.
std::vector<Scalar> skew_stack(const std::vector<Matrix>& prods) {
  std::vector<Scalar> out;
  for (const auto& a : prods)
    for (auto [r, c] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) out.push_back(a(r, c) - a(c, r));
  return out;
}

Matrix vec(const Matrix& m) {
  Matrix v(9, 1, m.field());
  for (int i = 0; i < 9; ++i) v(i, 0) = m(i / 3, i % 3);
  return v;
}

}  // namespace

TEST_SUITE("build_sym_matrices") {
  TEST_CASE("zero tensor and linearity") {
    SymSystem z = build_sym_matrices(Tensor3({3, 3, 4}, Q));
    CHECK(z.cl.rows() == 12);
    CHECK(z.cl.cols() == 9);
    CHECK(z.cl.is_zero());
    CHECK(z.cr.is_zero());
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Tensor3 t = sample_dense({3, 3, 4}, Q, seed), u = sample_dense({3, 3, 4}, Q, seed + 100);
      Scalar a = Q.from_int(3), b = Q.parse("-2/5");
      SymSystem st = build_sym_matrices(t), su = build_sym_matrices(u), s = build_sym_matrices(t * a + u * b);
      CHECK(s.cl == st.cl * a + su.cl * b);
      CHECK(s.cr == st.cr * a + su.cr * b);
      CHECK(build_sym_matrices(t * Q.from_int(2)).cl == st.cl * Q.from_int(2));
    }
  }

  TEST_CASE("C_L vec(L) and C_R vec(R) against direct products") {
    Rng rng(3);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Tensor3 t = sample_dense({3, 3, 4}, Q, seed);
      Matrix l = random_matrix(3, 3, Q, 9, rng), r = random_matrix(3, 3, Q, 9, rng);
      std::vector<Matrix> lx, xr;
      for (const auto& x : t.slices(3)) {
        lx.push_back(l * x);
        xr.push_back(x * r);
      }
      SymSystem s = build_sym_matrices(t);
      CHECK((s.cl * vec(l)).column_values(0) == skew_stack(lx));
      CHECK((s.cr * vec(r)).column_values(0) == skew_stack(xr));
    }
  }

  TEST_CASE("row and column maps") {
    SymSystem s = build_sym_matrices(Tensor3({3, 3, 4}, Q));
    REQUIRE(s.row_map.size() == 12);
    CHECK(s.row_map[4].k == 1);
    CHECK(s.row_map[4].a == 0);
    CHECK(s.row_map[4].b == 2);
    CHECK(s.col_map[5] == std::array<int, 2>{1, 2});
    CHECK_THROWS_AS(build_sym_matrices(Tensor3({4, 4, 4}, Q)), DomainError);
  }
}

TEST_SUITE("sym9") {
  TEST_CASE("rank <= 4 samples: rank <= 8, all 440 minors vanish") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      SymSystem s = build_sym_matrices(sample_rank_r({3, 3, 4}, 4, Q, seed));
      Sym9Result r = sym9_test(s);
      CHECK(r.pass);
      CHECK(r.rank_l <= 8);
      auto minors = sym9_minors(s);
      CHECK(minors.size() == 440);
      for (const auto& m : minors) CHECK(m.value.is_zero());
    }
  }

  TEST_CASE("dense tensors fail with a nonzero witness") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      SymSystem s = build_sym_matrices(sample_dense({3, 3, 4}, Q, seed));
      Sym9Result r = sym9_test(s);
      CHECK_FALSE(r.pass);
      REQUIRE((r.witness_l || r.witness_r));
      if (r.witness_l) {
        CHECK_FALSE(r.witness_l->value.is_zero());
        CHECK(det(s.cl.submatrix(r.witness_l->rows, r.witness_l->cols)) == r.witness_l->value);
      }
    }
  }

  TEST_CASE("zero tensor passes with ranks 0") {
    Sym9Result r = sym9_test(build_sym_matrices(Tensor3({3, 3, 4}, Q)));
    CHECK(r.pass);
    CHECK(r.rank_l == 0);
    CHECK(r.rank_r == 0);
  }
}

TEST_SUITE("extract_lr and trace16") {
  TEST_CASE("generic rank <= 4 sample: symmetric products") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Tensor3 t = sample_rank_r({3, 3, 4}, 4, Q, seed);
      LRPair lr = extract_lr(build_sym_matrices(t));
      REQUIRE(lr.defined);
      for (const auto& x : t.slices(3)) {
        CHECK((lr.l * x).is_symmetric());
        CHECK((x * lr.r).is_symmetric());
      }
      CHECK(trace16_check(lr.l, lr.r));
    }
  }

  TEST_CASE("symmetric slices put the identity in the kernel of C_L") {
    Rng rng(2);
    std::vector<Matrix> xs;
    for (int k = 0; k < 4; ++k) {
      Matrix a = random_matrix(3, 3, Q, 5, rng);
      xs.push_back(a + a.transpose());
    }
    SymSystem s = build_sym_matrices(Tensor3::from_frontal(xs));
    CHECK((s.cl * vec(Matrix::identity(3, Q))).is_zero());
    CHECK((s.cr * vec(Matrix::identity(3, Q))).is_zero());
  }

  TEST_CASE("undefined and precondition cases") {
    CHECK_FALSE(extract_lr(build_sym_matrices(Tensor3({3, 3, 4}, Q))).defined);
    CHECK_THROWS_AS(extract_lr(build_sym_matrices(sample_dense({3, 3, 4}, Q, 1))), PreconditionViolation);
  }

  TEST_CASE("trace16 named cases") {
    CHECK(trace16_check(Matrix::identity(3, Q), Matrix::identity(3, Q)));
    Matrix e2 = Matrix::unit_vector(3, 2, Q), e3 = Matrix::unit_vector(3, 3, Q);
    CHECK_FALSE(trace16_check(e3 * e3.transpose(), e3 * e2.transpose()));
    CHECK_FALSE(trace16_check(e3 * e3.transpose(), e3 * e3.transpose()));
    CHECK(trace16_check(Matrix(3, 3, Q), Matrix(3, 3, Q)));
  }

  TEST_CASE("trace16 is invariant under independent scalings") {
    Rng rng(6);
    for (int t = 0; t < 200; ++t) {
      Matrix l = random_matrix(3, 3, Q, 3, rng), r(3, 3, Q);
      if (t % 2) {
        // A passing pair: R^T = c L^{-1} makes L R^T = c I.
        if (det(l).is_zero()) continue;
        r = inverse(l).transpose() * Q.from_int(rng.uniform_int(1, 5));
      } else {
        r = random_matrix(3, 3, Q, 3, rng);
      }
      Scalar a = Q.from_int(rng.uniform_int(1, 9) * (rng.uniform_int(0, 1) ? 1 : -1));
      Scalar b = Q.parse(std::to_string(rng.uniform_int(1, 9)) + "/" + std::to_string(rng.uniform_int(1, 9)));
      CHECK(trace16_check(l * a, r * b) == trace16_check(l, r));
    }
  }
}

TEST_SUITE("route A") {
  TEST_CASE("verdicts") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      CHECK(membership_route_a(sample_rank_r({3, 3, 4}, 4, Q, seed)).verdict == Verdict::Member);
      auto neg = membership_route_a(sample_dense({3, 3, 4}, Q, seed));
      CHECK(neg.verdict == Verdict::NonMember);
      CHECK(neg.decided_by == "sym9");
      CHECK(neg.stages[0].witness.has_value());
    }
    CHECK(membership_route_a(Tensor3({3, 3, 4}, Q)).verdict == Verdict::Member);
  }

  TEST_CASE("special form with f != 0 and x33 != 0 is rejected at the trace stage") {
    Tensor3 t = sample_special_form(false, false, Q, 3);
    auto rep = membership_route_a(t);
    CHECK(rep.verdict == Verdict::NonMember);
    CHECK(rep.decided_by == "trace16");
  }

  TEST_CASE("invariant under swapping axes 1 and 2 and under basis change") {
    Rng rng(10);
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
      Tensor3 t = seed % 3 == 0   ? sample_rank_r({3, 3, 4}, 4, Q, seed)
                  : seed % 3 == 1 ? sample_special_form(false, false, Q, seed)
                                  : sample_dense({3, 3, 4}, Q, seed);
      Verdict v = membership_route_a(t).verdict;
      CHECK(membership_route_a(t.swap12()).verdict == v);
      Tensor3 u = t.change_basis(random_invertible(3, Q, 3, rng), random_invertible(3, Q, 3, rng),
                                 random_invertible(4, Q, 3, rng));
      CHECK(membership_route_a(u).verdict == v);
    }
  }

  TEST_CASE("report json") {
    auto j = membership_route_a(sample_dense({3, 3, 4}, Q, 1)).to_json();
    CHECK(j["verdict"] == "NON_MEMBER");
    CHECK(j["route"] == "A");
    CHECK(j["stages"][0]["name"] == "sym9");
    CHECK(j["stages"][0].contains("witness"));
  }
}
