#include <doctest.h>

#include "salmon/errors.hpp"
#include "salmon/linalg.hpp"
#include "salmon/modarith.hpp"
#include "salmon/sampling.hpp"
#include "salmon/tensor_io.hpp"

using namespace salmon;

namespace {
const Field Q = Field::rational();
}

TEST_SUITE("slices") {
  TEST_CASE("shapes per direction") {
    Tensor3 t = sample_dense({3, 3, 4}, Q, 1);
    auto front = t.slices(3);
    CHECK(front.size() == 4);
    CHECK(front[0].rows() == 3);
    CHECK(front[0].cols() == 3);
    auto s1 = sample_dense({4, 4, 4}, Q, 2).slices(1);
    CHECK(s1.size() == 4);
    CHECK(s1[0].rows() == 4);
    auto s2 = sample_dense({2, 3, 4}, Q, 3).slices(2);
    CHECK(s2.size() == 3);
    CHECK(s2[0].rows() == 2);
    CHECK(s2[0].cols() == 4);
    CHECK_THROWS_AS(t.slices(0), DomainError);
    CHECK_THROWS_AS(t.slices(4), DomainError);
  }

  TEST_CASE("frontal slice entry (i,j) is T(i,j,k)") {
    Tensor3 t = sample_dense({3, 2, 4}, Q, 7);
    auto front = t.slices(3);
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) CHECK(front[k](i, j) == t(i, j, k));
  }

  TEST_CASE("sections in every direction reconstruct the tensor") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Tensor3 t = sample_dense({2 + static_cast<int>(seed % 3), 3, 4}, Q, seed);
      for (int d = 1; d <= 3; ++d) CHECK(Tensor3::from_slices(d, t.slices(d)) == t);
      auto s1 = t.slices(1);
      for (int i = 0; i < t.m(); ++i)
        for (int j = 0; j < t.n(); ++j)
          for (int k = 0; k < t.l(); ++k) CHECK(s1[i](j, k) == t(i, j, k));
    }
  }

  TEST_CASE("rank-one tensor: slice k is c_k a b^T") {
    Rng rng(4);
    Matrix a = random_matrix(3, 1, Q, 9, rng), b = random_matrix(3, 1, Q, 9, rng), c = random_matrix(4, 1, Q, 9, rng);
    Tensor3 t({3, 3, 4}, Q);
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t(i, j, k) = a(i, 0) * b(j, 0) * c(k, 0);
    auto front = t.slices(3);
    for (int k = 0; k < 4; ++k) CHECK(front[k] == a * b.transpose() * c(k, 0));
  }
}

TEST_SUITE("samplers") {
  TEST_CASE("rank r bounds every flattening and every slice for r = 1") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Tensor3 t1 = sample_rank_r({3, 3, 4}, 1, Q, seed);
      for (const auto& s : t1.slices(3)) CHECK(rank(s) <= 1);
      Tensor3 t4 = sample_rank_r({3, 3, 4}, 4, Q, seed);
      for (int a = 1; a <= 3; ++a) CHECK(rank(t4.flattening(a)) <= 4);
      Tensor3 t2 = sample_rank_r({4, 4, 4}, 2, Q, seed);
      for (int a = 1; a <= 3; ++a) CHECK(rank(t2.flattening(a)) <= 2);
    }
  }

  TEST_CASE("reproducible from the seed") {
    CHECK(sample_rank_r({4, 4, 4}, 4, Q, 99) == sample_rank_r({4, 4, 4}, 4, Q, 99));
    CHECK(sample_rank_r({4, 4, 4}, 4, Q, 99) != sample_rank_r({4, 4, 4}, 4, Q, 100));
    CHECK(sample_dense({3, 3, 4}, Q, 5) == sample_dense({3, 3, 4}, Q, 5));
    CHECK(sample_special_form(false, true, Q, 5) == sample_special_form(false, true, Q, 5));
  }

  TEST_CASE("special form samples carry the pattern") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      for (bool x33 : {false, true})
        for (bool fz : {false, true}) {
          Tensor3 t = sample_special_form(x33, fz, Q, seed);
          auto flags = special_form_flags(t);
          CHECK(flags.is_special);
          CHECK(flags.zero_positions.size() == 16);
          if (x33)
            for (int k = 0; k < 4; ++k) CHECK(t(2, 2, k).is_zero());
          if (fz) {
            Matrix y(4, 4, Q);
            for (int k = 0; k < 4; ++k) {
              y(k, 0) = t(0, 0, k);
              y(k, 1) = t(0, 1, k);
              y(k, 2) = t(1, 0, k);
              y(k, 3) = t(1, 1, k);
            }
            CHECK(det(y).is_zero());
          }
        }
    }
    CHECK_FALSE(special_form_flags(sample_dense({3, 3, 4}, Q, 1)).is_special);
    CHECK_FALSE(special_form_flags(Tensor3({4, 4, 4}, Q)).is_special);
  }

  TEST_CASE("essentially 2x3x4 pattern") {
    Tensor3 t = sample_essentially_234(Q, 3);
    for (int k = 0; k < 4; ++k) {
      CHECK(t(0, 2, k).is_zero());
      for (int j = 0; j < 3; ++j) CHECK(t(2, j, k).is_zero());
    }
  }

  TEST_CASE("random_invertible") {
    Rng rng(1);
    for (int i = 0; i < 20; ++i) CHECK_FALSE(det(random_invertible(4, Q, 1, rng)).is_zero());
    const Field p = Field::prime(101);
    for (int i = 0; i < 20; ++i) CHECK_FALSE(det(random_invertible(3, p, 9, rng)).is_zero());
  }
}

TEST_SUITE("transformations") {
  TEST_CASE("basis change composes and preserves flattening ranks") {
    Rng rng(12);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Tensor3 t = sample_rank_r({3, 3, 4}, 2, Q, seed);
      Matrix a = random_invertible(3, Q, 5, rng), b = random_invertible(3, Q, 5, rng), c = random_invertible(4, Q, 5, rng);
      Tensor3 u = t.change_basis(a, b, c);
      for (int ax = 1; ax <= 3; ++ax) CHECK(rank(u.flattening(ax)) == rank(t.flattening(ax)));
      CHECK(u.change_basis(inverse(a), inverse(b), inverse(c)) == t);
    }
  }

  TEST_CASE("axis permutation") {
    Tensor3 t = sample_dense({2, 3, 4}, Q, 8);
    Tensor3 s = t.swap12();
    CHECK(s.dims() == Tensor3::Dims{3, 2, 4});
    for (int k = 0; k < 4; ++k) CHECK(s.slices(3)[k] == t.slices(3)[k].transpose());
    Tensor3 r = t.permute_axes({1, 2, 0});
    CHECK(r.dims() == Tensor3::Dims{4, 2, 3});
    CHECK(r(3, 1, 2) == t(1, 2, 3));
    CHECK_THROWS_AS(t.permute_axes({0, 0, 1}), DomainError);
  }

  TEST_CASE("embedding pads with zeros") {
    Tensor3 t = sample_dense({3, 3, 4}, Q, 2);
    Tensor3 e = t.embed({4, 4, 4});
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(e(i, j, k) == (i < 3 && j < 3 ? t(i, j, k) : Q.zero()));
  }
}

TEST_SUITE("tensor_io") {
  TEST_CASE("round trip in every mode") {
    Tensor3 q = sample_dense({3, 3, 4}, Q, 4) * Q.parse("5/7");
    CHECK(tensor_from_json(tensor_to_json(q)) == q);
    Tensor3 p = sample_dense({4, 4, 4}, Field::prime(modp::kMersenne61), 4);
    CHECK(tensor_from_json(tensor_to_json(p)) == p);
    Tensor3 f = q.convert(Field::float64()) * Scalar(0.1);
    Tensor3 back = tensor_from_json(tensor_to_json(f));
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(back.entries()[i].float_value() == f.entries()[i].float_value());
  }

  TEST_CASE("canonical rationals") {
    Tensor3 t = tensor_from_json(R"({"dims":[1,1,1],"mode":"rational","entries":["3/6"]})");
    CHECK(t(0, 0, 0).to_string() == "1/2");
  }

  TEST_CASE("errors") {
    std::string e35 = R"({"dims":[3,3,4],"mode":"rational","entries":[)";
    for (int i = 0; i < 35; ++i) e35 += (i ? ",\"1\"" : "\"1\"");
    e35 += "]}";
    CHECK_THROWS_AS(tensor_from_json(e35), DomainError);
    CHECK_THROWS_AS(tensor_from_json("{"), ParseError);
    CHECK_THROWS_AS(tensor_from_json(R"({"dims":[1,1,1],"mode":"complex","entries":[1]})"), ParseError);
    CHECK_THROWS_AS(tensor_from_json(R"({"dims":[1,1,2],"mode":"rational","entries":["1",2.5]})"), ModeMismatch);
    CHECK_THROWS_AS(tensor_from_json(R"({"dims":[1,1,1],"mode":"gfp","entries":[1]})"), ParseError);
    CHECK_THROWS_AS(tensor_from_json(R"({"dims":[5,1,1],"mode":"rational","entries":[1,1,1,1,1]})"), DomainError);
  }
}
