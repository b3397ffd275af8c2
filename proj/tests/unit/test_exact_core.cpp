#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "salmon/errors.hpp"
#include "salmon/linalg.hpp"
#include "salmon/modarith.hpp"
#include "salmon/poly.hpp"

using namespace salmon;

namespace {

const Field Q = Field::rational();
const Field P31 = Field::prime(modp::kMersenne31);

MultiPoly random_sparse_poly(const RegistryPtr& reg, std::mt19937_64& rng, int terms, int max_deg) {
  std::uniform_int_distribution<int> coef(-5, 5), var(0, static_cast<int>(reg->size()) - 1), deg(0, max_deg);
  PolyBuilder b(reg, Q);
  for (int t = 0; t < terms; ++t) {
    std::vector<VarPower> f;
    int d = deg(rng);
    for (int i = 0; i < d; ++i) f.push_back({static_cast<std::uint32_t>(var(rng)), 1});
    b.add(Monomial(std::move(f)), Q.from_int(coef(rng)));
  }
  return std::move(b).build();
}

}  // namespace

TEST_SUITE("scalar") {
  TEST_CASE("rationals are canonical") {
    Scalar a = Q.parse("3/6");
    CHECK(a.to_string() == "1/2");
    CHECK(Q.parse("4/-8").to_string() == "-1/2");
    CHECK((a + a).is_one());
  }

  TEST_CASE("prime field residues stay in range") {
    Scalar a = P31.from_int(-1);
    CHECK(a.residue_value() == modp::kMersenne31 - 1);
    CHECK((a * a).is_one());
    CHECK((P31.from_int(7) / P31.from_int(7)).is_one());
  }

  TEST_CASE("mixed modes are rejected") {
    CHECK_THROWS_AS(Q.one() + P31.one(), ModeMismatch);
    CHECK_THROWS_AS(P31.one() * Field::prime(101).one(), ModeMismatch);
    CHECK_THROWS_AS(Q.one() - Field::float64().one(), ModeMismatch);
  }

  TEST_CASE("only odd primes make fields") {
    CHECK_THROWS_AS(Field::prime(2), DomainError);
    CHECK_THROWS_AS(Field::prime(91), DomainError);
    CHECK_NOTHROW(Field::prime(modp::kMersenne61));
  }

  TEST_CASE("division by zero") { CHECK_THROWS_AS(Q.one() / Q.zero(), DomainError); }
}

TEST_SUITE("det") {
  TEST_CASE("identity and 2x2") {
    CHECK(det(Matrix::identity(3, Q)).is_one());
    CHECK(det(Matrix::from_ints(2, 2, Q, {1, 2, 3, 4})) == Q.from_int(-2));
    CHECK(det(Matrix::from_ints(2, 2, P31, {1, 2, 3, 4})) == P31.from_int(-2));
  }

  TEST_CASE("non-square and float input") {
    CHECK_THROWS_AS(det(Matrix(2, 3, Q)), DomainError);
    CHECK_THROWS_AS(det(Matrix::identity(2, Field::float64())), ModeMismatch);
  }

  TEST_CASE("Bareiss agrees with Laplace expansion on random integer matrices") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 150; ++trial) {
      const std::size_t n = 1 + static_cast<std::size_t>(trial % 5);
      Matrix m = oracle::random_int_matrix(n, n, 9, rng);
      CHECK(det(m).rational_value() == oracle::laplace_det(oracle::to_q(m)));
    }
  }

  TEST_CASE("rational entries and singular inputs") {
    Matrix m(3, 3, Q, {Q.parse("1/2"), Q.parse("1/3"), Q.one(), Q.parse("2/5"), Q.from_int(3), Q.parse("-7/4"),
                        Q.from_int(1), Q.parse("2/3"), Q.from_int(2)});
    CHECK(det(m).rational_value() == oracle::laplace_det(oracle::to_q(m)));
    CHECK(det(Matrix::from_ints(3, 3, Q, {1, 2, 3, 2, 4, 6, 0, 1, 1})).is_zero());
  }

  TEST_CASE("modular determinant is the image of the rational one") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
      Matrix m = oracle::random_int_matrix(5, 5, 9, rng);
      CHECK(det(m.convert(P31)) == P31.from_rational(det(m).rational_value()));
    }
  }
}

TEST_SUITE("adjugate") {
  TEST_CASE("identity and the 2x2 formula") {
    CHECK(adjugate(Matrix::identity(4, Q)) == Matrix::identity(4, Q));
    CHECK(adjugate(Matrix::from_ints(2, 2, Q, {2, 3, 5, 7})) == Matrix::from_ints(2, 2, Q, {7, -3, -5, 2}));
  }

  TEST_CASE("M adj(M) = det(M) I on random matrices") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t n = 1 + static_cast<std::size_t>(trial % 5);
      const Field& f = trial % 2 ? Q : P31;
      Matrix m = oracle::random_int_matrix(n, n, 9, rng, f);
      CHECK(m * adjugate(m) == Matrix::identity(n, f) * det(m));
      CHECK(adjugate(m) * m == Matrix::identity(n, f) * det(m));
    }
  }

  TEST_CASE("singular rank-one matrix") {
    Matrix m = Matrix::from_ints(3, 3, Q, {1, 2, 3, 2, 4, 6, 3, 6, 9});
    CHECK((m * adjugate(m)).is_zero());
  }
}

TEST_SUITE("rank and kernel") {
  TEST_CASE("named cases") {
    CHECK(rank(Matrix(12, 9, Q)) == 0);
    Matrix e3 = Matrix::unit_vector(3, 3, Q);
    Matrix e33 = e3 * e3.transpose();
    CHECK(rank(e33) == 1);
    CHECK(kernel_basis(Matrix::identity(3, Q)).empty());
    auto ker = kernel_basis(e33);
    REQUIRE(ker.size() == 2);
    for (const auto& v : ker) CHECK(v[2].is_zero());
    Matrix span(3, 2, Q);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t r = 0; r < 3; ++r) span(r, i) = ker[i][r];
    CHECK(rank(span) == 2);
  }

  TEST_CASE("float rank is rejected") { CHECK_THROWS_AS(rank(Matrix::identity(2, Field::float64())), ModeMismatch); }

  TEST_CASE("rank = cols - nullity, kernel vectors annihilate") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 80; ++trial) {
      const Field& f = trial % 2 ? Q : P31;
      const std::size_t rows = 1 + rng() % 6, cols = 1 + rng() % 6, inner = 1 + rng() % 4;
      Matrix m = oracle::random_int_matrix(rows, inner, 3, rng, f) * oracle::random_int_matrix(inner, cols, 3, rng, f);
      auto ker = kernel_basis(m);
      CHECK(rank(m) + ker.size() == cols);
      for (const auto& v : ker) CHECK((m * Matrix::column(v, f)).is_zero());
    }
  }

  TEST_CASE("inverse") {
    Matrix m = Matrix::from_ints(3, 3, Q, {2, 1, 0, 1, 3, 1, 0, 1, 4});
    CHECK(m * inverse(m) == Matrix::identity(3, Q));
    CHECK_THROWS_AS(inverse(Matrix(2, 2, Q)), DomainError);
  }
}

TEST_SUITE("minors") {
  TEST_CASE("12x9 has 220 maximal minors in lexicographic order") {
    std::mt19937_64 rng(2);
    Matrix m = oracle::random_int_matrix(12, 9, 5, rng);
    auto minors = minor_values(m, 9);
    CHECK(minors.size() == 220);
    CHECK(minors.front().rows == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7, 8});
    CHECK(minors.back().rows == std::vector<std::size_t>{3, 4, 5, 6, 7, 8, 9, 10, 11});
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(minors[i].value.rational_value() == oracle::laplace_det(oracle::to_q(m.submatrix(minors[i].rows, minors[i].cols))));
    }
  }

  TEST_CASE("zero matrix and oversized request") {
    for (const auto& mi : minor_values(Matrix(4, 3, Q), 2)) CHECK(mi.value.is_zero());
    CHECK(minor_values(Matrix(4, 3, Q), 2).size() == 18);
    CHECK_THROWS_AS(minor_values(Matrix(4, 3, Q), 4), DomainError);
    CHECK_FALSE(first_nonzero_minor(Matrix(4, 3, Q), 2).has_value());
  }
}

TEST_SUITE("polynomials") {
  const RegistryPtr reg = VarRegistry::tensor(3, 3, 4);

  TEST_CASE("degree sentinel and canonical order") {
    MultiPoly zero(reg, Q);
    CHECK(zero.degree() == -1);
    CHECK(zero.to_text() == "0");
    MultiPoly f = parse_poly("x_1_1_1 + 2*x_1_1_2^2 - 3", reg, Q);
    CHECK(f.degree() == 2);
    CHECK(f.to_text() == "2*x_1_1_2^2 + 1*x_1_1_1 - 3");
  }

  TEST_CASE("text format round trip and comments") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 30; ++t) {
      MultiPoly f = random_sparse_poly(reg, rng, 12, 6);
      CHECK(parse_poly(f.to_text(), reg, Q) == f);
    }
    auto polys = parse_poly_file("# header\n\n x_1_1_1*x_2_2_2 # trailing\n-4*x_3_3_4^3\n", reg, Q);
    REQUIRE(polys.size() == 2);
    CHECK(polys[1].leading_term().coeff == Q.from_int(-4));
    CHECK_THROWS_AS(parse_poly("2*y_1_1", reg, Q), ParseError);
    CHECK_THROWS_AS(parse_poly("x_1_1_1 x_1_1_2", reg, Q), ParseError);
    CHECK_THROWS_AS(parse_poly("x_4_1_1", reg, Q), ParseError);
  }

  TEST_CASE("coefficient extraction") {
    VarRegistry::Layout lay;
    lay.x_dims = {1, 1, 2};
    lay.u_dims = {1, 1};
    auto r = VarRegistry::make(lay);
    const std::size_t u = r->u(1, 1);
    MultiPoly f = parse_poly("u_1_1*x_1_1_1 + u_1_1*x_1_1_2", r, Q);
    auto c = poly_extract_coeffs(f, std::vector<std::size_t>{u});
    REQUIRE(c.size() == 1);
    CHECK(c.begin()->first == Monomial::variable(u));
    CHECK(c.begin()->second == parse_poly("x_1_1_1 + x_1_1_2", r, Q));
    auto c2 = poly_extract_coeffs(parse_poly("x_1_1_1^2", r, Q), std::vector<std::size_t>{u});
    REQUIRE(c2.size() == 1);
    CHECK(c2.begin()->first.is_one());
  }

  TEST_CASE("extraction reassembles the input") {
    VarRegistry::Layout lay;
    lay.x_dims = {3, 3, 4};
    lay.u_dims = {4, 3};
    auto r = VarRegistry::make(lay);
    auto uvars = r->ids_of(VarClass::U);
    std::mt19937_64 rng(4);
    for (int t = 0; t < 20; ++t) {
      MultiPoly f = random_sparse_poly(r, rng, 25, 5);
      PolyBuilder b(r, Q);
      for (const auto& [m, coeff] : poly_extract_coeffs(f, uvars)) {
        for (auto v : coeff.variables()) CHECK(r->name(v).cls != VarClass::U);
        b.add_product(Q.one(), m, coeff);
      }
      CHECK(std::move(b).build() == f);
    }
  }

  TEST_CASE("exact division") {
    auto r = VarRegistry::tensor(1, 1, 2);
    MultiPoly f = parse_poly("x_1_1_1^2 - x_1_1_2^2", r, Q);
    MultiPoly g = parse_poly("x_1_1_1 - x_1_1_2", r, Q);
    CHECK(poly_div_exact(f, g) == parse_poly("x_1_1_1 + x_1_1_2", r, Q));
    CHECK(poly_div_exact(MultiPoly(r, Q), g).is_zero());
    CHECK_THROWS_AS(poly_div_exact(f + MultiPoly::constant(r, Q.one()), g), NotDivisible);
    CHECK_THROWS_AS(poly_div_exact(f, MultiPoly(r, Q)), DomainError);
  }

  TEST_CASE("poly_div_exact(f*g, g) = f") {
    std::mt19937_64 rng(21);
    int checked = 0;
    for (int t = 0; t < 120; ++t) {
      MultiPoly f = random_sparse_poly(reg, rng, 6, 3);
      MultiPoly g = random_sparse_poly(reg, rng, 4, 3);
      if (g.is_zero()) continue;
      CHECK(poly_div_exact(f * g, g) == f);
      ++checked;
    }
    CHECK(checked >= 100);
  }

  TEST_CASE("evaluation") {
    auto r = VarRegistry::tensor(1, 1, 2);
    MultiPoly f = parse_poly("x_1_1_1 + x_1_1_2", r, Q);
    std::map<std::size_t, Scalar> a{{r->x(1, 1, 1), Q.from_int(1)}, {r->x(1, 1, 2), Q.from_int(2)}};
    CHECK(poly_eval(f, a) == Q.from_int(3));
    a.erase(r->x(1, 1, 2));
    CHECK_THROWS_AS(poly_eval(f, a), DomainError);
  }

  TEST_CASE("evaluation is a ring homomorphism; mod-p fast path agrees") {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 40; ++t) {
      MultiPoly f = random_sparse_poly(reg, rng, 10, 4), g = random_sparse_poly(reg, rng, 10, 4);
      std::vector<Scalar> pt;
      std::vector<std::uint64_t> raw;
      for (std::size_t v = 0; v < reg->size(); ++v) {
        pt.push_back(Q.from_int(static_cast<int>(rng() % 21) - 10));
        raw.push_back(P31.from_rational(pt.back().rational_value()).residue_value());
      }
      CHECK((f * g).eval(pt) == f.eval(pt) * g.eval(pt));
      ModpEvaluator ev(f * g, modp::kMersenne31);
      CHECK(ev(raw) == P31.from_rational((f * g).eval(pt).rational_value()).residue_value());
    }
  }

  TEST_CASE("derivative") {
    auto r = VarRegistry::tensor(1, 1, 2);
    MultiPoly f = parse_poly("3*x_1_1_1^2*x_1_1_2 + x_1_1_2", r, Q);
    CHECK(f.derivative(r->x(1, 1, 1)) == parse_poly("6*x_1_1_1*x_1_1_2", r, Q));
  }
}
