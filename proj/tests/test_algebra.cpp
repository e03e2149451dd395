#include <doctest.h>

#include <random>

#include "orbitherm/algebra.hpp"

using namespace orbitherm;

namespace {

Vec randn(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = nd(rng);
  return v;
}

std::vector<LieAlgebra> catalog() {
  std::vector<LieAlgebra> out;
  out.push_back(build_sl2());
  out.push_back(build_su2());
  out.push_back(build_so12());
  out.push_back(build_heis(2));
  out.push_back(build_osc());
  out.push_back(build_mot2());
  out.push_back(build_hsp(1));
  out.push_back(build_hsp(2));
  out.push_back(build_abelian(3));
  out.push_back(direct_sum(build_su2(), build_osc()));
  return out;
}

}  // namespace

TEST_SUITE("algebra") {

TEST_CASE("catalog brackets satisfy antisymmetry, bilinearity, Jacobi") {
  std::mt19937_64 rng(7);
  for (const auto& g : catalog()) {
    CAPTURE(g.name());
    CHECK(g.jacobi_residual() <= tols().algebraic);
    for (int k = 0; k < 10; ++k) {
      Vec a = randn(g.dim(), rng), b = randn(g.dim(), rng);
      CHECK((g.bracket(a, b) + g.bracket(b, a)).norm() <= tols().algebraic * 10);
      CHECK((g.bracket(2.5 * a, b) - 2.5 * g.bracket(a, b)).norm() <= tols().algebraic * 10);
      CHECK(g.bracket(a, a).norm() <= tols().algebraic * 10);
    }
  }
}

TEST_CASE("ad is the bracket in matrix form") {
  std::mt19937_64 rng(8);
  for (const auto& g : catalog()) {
    Vec a = randn(g.dim(), rng), b = randn(g.dim(), rng);
    CHECK((g.ad(a) * b - g.bracket(a, b)).norm() <= tols().algebraic * 10);
  }
}

TEST_CASE("Killing form: ad-invariance on 100 random triples") {
  std::mt19937_64 rng(9);
  for (const auto& g : catalog()) {
    CAPTURE(g.name());
    for (int k = 0; k < 100; ++k) {
      Vec x = randn(g.dim(), rng), y = randn(g.dim(), rng), z = randn(g.dim(), rng);
      double lhs = g.killing(g.bracket(x, y), z) + g.killing(y, g.bracket(x, z));
      double scale = 1.0 + x.norm() * y.norm() * z.norm() * double(g.dim());
      CHECK(std::abs(lhs) <= 1e-9 * scale);
    }
  }
}

TEST_CASE("Killing form catalog values") {
  auto sl2 = build_sl2();
  Mat k = sl2.killing_matrix();
  CHECK(k(0, 0) == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(k(1, 2) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(k(1, 1) == doctest::Approx(0.0).epsilon(1e-12));

  auto su2 = build_su2();
  Mat ks = su2.killing_matrix();
  CHECK((ks + 2.0 * Mat::Identity(3, 3)).norm() <= 1e-12);

  // the compactly embedded z0 of sl2 has killing(z0, z0) = -2
  Vec z0 = Vec::Zero(3);
  z0[1] = 0.5;
  z0[2] = -0.5;
  CHECK(sl2.killing(z0, z0) == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("ellipticity of catalog elements") {
  auto sl2 = build_sl2();
  CHECK_FALSE(sl2.is_elliptic_element(sl2.basis_vector(0)));  // h is a boost
  Vec z0 = 0.5 * (sl2.basis_vector(1) - sl2.basis_vector(2));
  CHECK(sl2.is_elliptic_element(z0));
  CHECK_FALSE(sl2.is_elliptic_element(sl2.basis_vector(1)));  // nilpotent e

  auto su2 = build_su2();
  for (int i = 0; i < 3; ++i) CHECK(su2.is_elliptic_element(su2.basis_vector(i)));

  auto so12 = build_so12();
  CHECK(so12.is_elliptic_element(so12.basis_vector(0)));
  CHECK_FALSE(so12.is_elliptic_element(so12.basis_vector(1)));
}

TEST_CASE("builder dimensions and meta shapes") {
  CHECK(build_heis(2).dim() == 5);
  CHECK(build_osc().dim() == 4);
  for (int n = 1; n <= 3; ++n) {
    auto g = build_hsp(n);
    CHECK(g.dim() == 1 + 2 * n + n * (2 * n + 1));
    REQUIRE(g.meta().has_value());
    CHECK(g.meta()->center.cols() == 1);
    CHECK(g.meta()->cartan.cols() == 1 + n);
    CHECK(g.meta()->v_space.cols() == 2 * n);
    CHECK(g.meta()->levi.cols() == n * (2 * n + 1));
  }
  CHECK(build_heis(1).meta()->cartan.cols() == 0);
}

TEST_CASE("index_of and basis_vector") {
  auto osc = build_osc();
  CHECK(osc.index_of("z0") == 3);
  CHECK(osc.index_of("nope") == -1);
  CHECK(osc.basis_vector(1)[1] == 1.0);
  CHECK(osc.basis_vector(1).sum() == 1.0);
}

TEST_CASE("constructor rejects malformed input") {
  CHECK_THROWS_AS(LieAlgebra("bad", {"a", "a"}, {}), Error);
  CHECK_THROWS_AS(LieAlgebra("bad", {"a", "b"}, {{0, 5, 0, 1.0}}), Error);
  CHECK_THROWS_AS(LieAlgebra("bad", {"a", "b"}, {{1, 0, 0, 1.0}}), Error);  // needs i < j
  CHECK_THROWS_AS(LieAlgebra("bad", {"a", "b"}, {{0, 1, 1, 1.0}, {0, 1, 1, 2.0}}), Error);
  // Jacobi violation: [a,b] = c, [a,c] = a gives jacobiator [[c,a],b] = -c
  CHECK_THROWS_AS(LieAlgebra("bad", {"a", "b", "c"}, {{0, 1, 2, 1.0}, {0, 2, 0, 1.0}}), Error);
}

TEST_CASE("star involution") {
  CVec z(2);
  z << Complex(1, 2), Complex(-3, 0.5);
  CVec s = star(z);
  CHECK(s[0] == Complex(-1, 2));
  CHECK(s[1] == Complex(3, 0.5));
  CHECK((star(s) - z).norm() <= 1e-15);
}

TEST_CASE("direct sum: summands commute, dims and meta stack") {
  auto g = direct_sum(build_su2(), build_osc());
  CHECK(g.dim() == 7);
  std::mt19937_64 rng(11);
  for (int k = 0; k < 5; ++k) {
    Vec a = Vec::Zero(7), b = Vec::Zero(7);
    a.head(3) = randn(3, rng);
    b.tail(4) = randn(4, rng);
    CHECK(g.bracket(a, b).norm() <= tols().algebraic);
  }
  // su2 part still cyclic
  CHECK((g.bracket(g.basis_vector(0), g.basis_vector(1)) - g.basis_vector(2)).norm() <= 1e-14);
  REQUIRE(g.meta().has_value());
  CHECK(g.meta()->cartan.cols() == 3);  // u3 + (c, z0)
  CHECK(g.meta()->center.cols() == 1);
}

TEST_CASE("semidirect reproduces the motion algebra") {
  // R^2 extended by the rotation generator
  Mat rot(2, 2);
  rot << 0, 1, -1, 0;  // d(e1) = -e2, d(e2) = e1
  auto g = semidirect(build_abelian(2, "r2"), build_abelian(1, "rot"), {rot}, "mot2-sd");
  auto ref = build_mot2();
  CHECK(g.dim() == 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Vec got = g.bracket(g.basis_vector(i), g.basis_vector(j));
      Vec want = ref.bracket(ref.basis_vector(i), ref.basis_vector(j));
      CHECK((got - want).norm() <= 1e-14);
    }
}

TEST_CASE("semidirect rejects a non-derivation action") {
  // scaling is not a derivation of heis(1): it breaks [p,q] = c
  auto g = build_heis(1);
  Mat scale = Mat::Identity(3, 3);
  CHECK_THROWS_AS(semidirect(g, build_abelian(1, "s"), {scale}, "bad"), Error);
}

TEST_CASE("JSON round trip preserves the algebra") {
  for (const auto& g : catalog()) {
    CAPTURE(g.name());
    auto h = algebra_from_json_text(algebra_to_json_text(g));
    CHECK(h.dim() == g.dim());
    CHECK(h.name() == g.name());
    CHECK(h.basis_names() == g.basis_names());
    std::mt19937_64 rng(13);
    for (int k = 0; k < 5; ++k) {
      Vec a = randn(g.dim(), rng), b = randn(g.dim(), rng);
      CHECK((h.bracket(a, b) - g.bracket(a, b)).norm() <= 1e-14);
    }
    CHECK(h.meta().has_value() == g.meta().has_value());
    if (g.meta())
      CHECK(h.meta()->cartan.cols() == g.meta()->cartan.cols());
  }
}

TEST_CASE("JSON parse errors name the offending field") {
  CHECK_THROWS_WITH_AS(algebra_from_json_text("{}"), doctest::Contains("basis"), Error);
  CHECK_THROWS_WITH_AS(algebra_from_json_text(R"({"basis": ["a", "b"], "structure": [[0]]})"),
                       doctest::Contains("structure[0]"), Error);
  CHECK_THROWS_WITH_AS(
      algebra_from_json_text(R"({"basis": ["a", "b"], "structure": [[0, 1, 7, 1.0]]})"),
      doctest::Contains("structure[0]"), Error);
  CHECK_THROWS_AS(algebra_from_json_text("not json at all"), Error);
  CHECK_THROWS_WITH_AS(
      algebra_from_json_text(
          R"({"basis": ["a", "b"], "structure": [], "meta": {"cartan": [[1.0]]}})"),
      doctest::Contains("meta.cartan"), Error);
}

TEST_CASE("file fixture loads") {
  // the same fixture the CLI smoke test uses
  auto g = algebra_from_json_text(R"({
    "name": "sl2", "basis": ["h", "e", "f"],
    "structure": [[0, 1, 1, 2.0], [0, 2, 2, -2.0], [1, 2, 0, 1.0]],
    "meta": {"cartan": [[0.0, 0.5, -0.5]],
             "levi": [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]}
  })");
  auto ref = build_sl2();
  CHECK(g.killing_matrix().isApprox(ref.killing_matrix(), 1e-12));
}

}  // TEST_SUITE
