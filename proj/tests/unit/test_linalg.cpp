#include "orthoflow/errors.hpp"
#include "orthoflow/linalg.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <numbers>

using namespace orthoflow;
namespace ot = orthoflow::testing;

TEST_CASE("hat follows the cross-product template") {
  SUBCASE("benchmark rate") {
    CHECK(hat(AngularRate(0.0, -0.1, -2.0)).matrix() == ot::paper_matrix());
  }
  SUBCASE("zero rate") {
    CHECK(hat(AngularRate(0, 0, 0)).matrix() == SquareMatrix::Zero(3, 3));
  }
  SUBCASE("(1, 2, 3)") {
    SquareMatrix expected(3, 3);
    expected << 0, -3, 2, 3, 0, -1, -2, 1, 0;
    CHECK(hat(AngularRate(1, 2, 3)).matrix() == expected);
  }
}

TEST_CASE("vee inverts hat") {
  CHECK(vee(hat(AngularRate(1, 2, 3))).omega == Vector3(1, 2, 3));
  CHECK(vee(SkewMatrix::zero(3)).omega == Vector3::Zero());
  CHECK(vee(assert_skew(ot::paper_matrix())).omega == Vector3(0.0, -0.1, -2.0));
  CHECK_THROWS_AS(vee(SkewMatrix::zero(2)), DimensionError);
}

TEST_CASE("hat/vee round trip and cross product on random rates") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 200; ++i) {
    const Vector3 w(u(rng), u(rng), u(rng));
    const Vector3 x(u(rng), u(rng), u(rng));
    CHECK(vee(hat(AngularRate(w))).omega == w);
    const Vector3 got = apply_velocity(AngularRate(w), x);
    const Vector3 want = ot::cross(w, x);
    for (int k = 0; k < 3; ++k) {
      CHECK(std::abs(got(k) - want(k)) <= 1e-15 * std::max(1.0, w.norm() * x.norm()));
    }
  }
}

TEST_CASE("assert_skew gates non-skew input") {
  SquareMatrix ok(2, 2);
  ok << 0, 1, -1, 0;
  CHECK_NOTHROW(assert_skew(ok, 1e-12));
  CHECK_NOTHROW(assert_skew(ot::paper_matrix(), 1e-12));

  SquareMatrix sym(2, 2);
  sym << 0, 1, 1, 0;
  try {
    assert_skew(sym, 1e-12);
    FAIL("expected SkewnessError");
  } catch (const SkewnessError& e) {
    CHECK(e.defect() == doctest::Approx(2.0));
  }

  SquareMatrix diag = ok;
  diag(0, 0) = 1e-6;
  CHECK_THROWS_AS(assert_skew(diag), SkewnessError);
  CHECK_THROWS_AS(assert_skew(SquareMatrix::Zero(2, 3)), DimensionError);
  CHECK_THROWS_AS(assert_skew(ok, 0.0), std::invalid_argument);

  // Tolerance is relative to max(1, ||A||_inf).
  SquareMatrix big(2, 2);
  big << 0, 1e6, -1e6 + 1e-7, 0;
  CHECK_NOTHROW(assert_skew(big));
}

TEST_CASE("apply_velocity examples") {
  CHECK(apply_velocity(AngularRate(0, 0, 1), Vector3(1, 0, 0)) == Vector3(0, 1, 0));
  CHECK(apply_velocity(AngularRate(0, 0, 0), Vector3(3, -1, 2)) == Vector3::Zero());
  CHECK(apply_velocity(AngularRate(1, 2, 3), Vector3(4, 5, 6)) == Vector3(-3, 6, -3));
}

TEST_CASE("expm examples against the series oracle") {
  CHECK(expm(SkewMatrix::zero(3), 12.5) == SquareMatrix::Identity(3, 3));
  CHECK(expm(SkewMatrix::zero(5), -3.0) == SquareMatrix::Identity(5, 5));

  const SkewMatrix ez = hat(AngularRate(0, 0, 1));
  const SquareMatrix quarter = expm(ez, std::numbers::pi / 2);
  SquareMatrix expected(3, 3);
  expected << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  CHECK((quarter - expected).norm() <= 1e-14);
  CHECK((quarter - ot::series_expm(std::numbers::pi / 2 * ez.matrix())).norm() <= 1e-14);

  const SkewMatrix p = hat(AngularRate(0.0, -0.1, -2.0));
  const SquareMatrix e = expm(p, 0.1);
  CHECK((e.transpose() * e - SquareMatrix::Identity(3, 3)).norm() <= 1e-14);
  CHECK((e - ot::series_expm(0.1 * p.matrix())).norm() <= 1e-15);

  // Small-angle branch of the rotation formula.
  const SkewMatrix tiny = hat(AngularRate(3e-5, -2e-5, 1e-5));
  CHECK((expm(tiny, 1.0) - ot::series_expm(tiny.matrix())).norm() <= 1e-17);
}

TEST_CASE("expm general-dimension path matches the series oracle") {
  std::mt19937_64 rng(11);
  for (int dim : {1, 2, 4, 5, 6}) {
    for (int i = 0; i < 10; ++i) {
      const SkewMatrix s = assert_skew(ot::random_skew(rng, dim, 2.0));
      const SquareMatrix got = expm(s, 0.7);
      CHECK((got - ot::series_expm(0.7 * s.matrix())).norm() <= 1e-14);
    }
  }
}

TEST_CASE("expm invariants on random skew S, ||S|| <= 10, |t| <= 10") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dims(2, 6);
  std::uniform_real_distribution<double> times(-10.0, 10.0);
  for (int i = 0; i < 150; ++i) {
    const int dim = i % 3 == 0 ? 3 : dims(rng);
    const SkewMatrix s = assert_skew(ot::random_skew(rng, dim, 10.0));
    const double t1 = times(rng);
    const double t2 = times(rng);
    const SquareMatrix e1 = expm(s, t1);
    const SquareMatrix id = SquareMatrix::Identity(dim, dim);
    CAPTURE(dim);
    CHECK((e1.transpose() * e1 - id).norm() <= 1e-13);
    CHECK(std::abs(determinant(e1) - 1.0) <= 1e-12);
    CHECK((expm(s, t1 + t2) - e1 * expm(s, t2)).norm() <= 1e-12);
    CHECK((e1 - ot::pade_expm(t1 * s.matrix())).norm() <= 1e-11);
  }
}

TEST_CASE("solve_linear examples and residual bound") {
  SquareMatrix b(2, 2);
  b << 1, 2, 3, 4;
  CHECK(solve_linear(SquareMatrix::Identity(2, 2), b) == b);
  CHECK((solve_linear(2.0 * SquareMatrix::Identity(3, 3), SquareMatrix::Identity(3, 3)) -
         0.5 * SquareMatrix::Identity(3, 3))
            .norm() == 0.0);
  SquareMatrix a(2, 2);
  a << 1, -1, 1, 1;
  SquareMatrix inv(2, 2);
  inv << 0.5, 0.5, -0.5, 0.5;
  CHECK((solve_linear(a, SquareMatrix::Identity(2, 2)) - inv).norm() <= 1e-16);

  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const int dim = 1 + i % 12;
    // Diagonally shifted to keep the conditioning moderate.
    const SquareMatrix m = ot::random_matrix(rng, dim) + 3.0 * dim * SquareMatrix::Identity(dim, dim);
    const SquareMatrix rhs = ot::random_matrix(rng, dim);
    const SquareMatrix x = solve_linear(m, rhs);
    CHECK((m * x - rhs).norm() <= 1e-12 * rhs.norm());
  }
}

TEST_CASE("solve_linear refuses singular systems") {
  SquareMatrix a(2, 2);
  a << 1, 2, 2, 4;
  CHECK_THROWS_AS(solve_linear(a, SquareMatrix::Identity(2, 2)), SingularityError);
  CHECK_THROWS_AS(solve_linear(SquareMatrix::Zero(3, 3), SquareMatrix::Identity(3, 3)), SingularityError);

  SquareMatrix nearly = SquareMatrix::Identity(2, 2);
  nearly(1, 1) = 1e-15;
  CHECK_THROWS_AS(solve_linear(nearly, SquareMatrix::Identity(2, 2)), SingularityError);
}

TEST_CASE("determinant via pivoted LU") {
  SquareMatrix a(2, 2);
  a << 0.5, 1, -1, 0.5;
  CHECK(determinant(a) == doctest::Approx(1.25).epsilon(1e-15));
  SquareMatrix p(3, 3);
  p << 0, 1, 0, 1, 0, 0, 0, 0, 1;
  CHECK(determinant(p) == -1.0);
  CHECK(determinant(SquareMatrix::Zero(2, 2)) == 0.0);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const SquareMatrix m = ot::random_matrix(rng, 1 + i % 6);
    CHECK(determinant(m) == doctest::Approx(m.determinant()).epsilon(1e-10));
  }
}
