#include "orthoflow/errors.hpp"
#include "orthoflow/navkit.hpp"
#include "orthoflow/propagate.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace orthoflow;
namespace ot = orthoflow::testing;

namespace {

SquareMatrix rot_z(double angle) {
  SquareMatrix m(3, 3);
  m << std::cos(angle), -std::sin(angle), 0, std::sin(angle), std::cos(angle), 0, 0, 0, 1;
  return m;
}

// Smooth rate history sampled every `dt` over [0, t_end].
GyroLog smooth_log(double dt, int intervals) {
  std::vector<GyroSample> samples;
  for (int k = 0; k <= intervals; ++k) {
    const double t = k * dt;
    samples.push_back({t, AngularRate(std::sin(t), 0.5 * std::cos(2.0 * t), 0.3 + 0.1 * t)});
  }
  return GyroLog(std::move(samples));
}

IntegratorConfig cayley_config(double h) { return IntegratorConfig{Method(ClosedForm::cayley_midpoint), h}; }

}  // namespace

TEST_CASE("parse_gyro_csv examples") {
  const auto log = parse_gyro_csv("t,wx,wy,wz\n0,0,0,1\n1,0,0,1\n");
  REQUIRE(log.size() == 2);
  CHECK(log.samples()[0].rate.omega == Vector3(0, 0, 1));
  CHECK(log.samples()[1].t == 1.0);

  try {
    parse_gyro_csv("t,wx,wy,wz\n0,0,0,1\n0,0,0,1\n");
    FAIL("expected OrderingError");
  } catch (const OrderingError& e) {
    CHECK(e.line() == 3);
  }

  const auto paper = parse_gyro_csv("t,wx,wy,wz\n0,0,-0.1,-2\n2000,0,-0.1,-2\n");
  CHECK(hat(paper.samples()[0].rate).matrix() == ot::paper_matrix());
  CHECK(paper.samples()[1].t == 2000.0);
}

TEST_CASE("parse_gyro_csv tolerates comments, CRLF and scientific notation") {
  const auto log = parse_gyro_csv("# recorded on bench\nt,wx,wy,wz\r\n0,1e-3,-2E-1,+3\r\n# gap\n\n0.5, 0 ,0,0\n");
  REQUIRE(log.size() == 2);
  CHECK(log.samples()[0].rate.omega == Vector3(1e-3, -0.2, 3.0));
}

TEST_CASE("parse_gyro_csv error paths") {
  CHECK_THROWS_AS(parse_gyro_csv(""), ParseError);
  CHECK_THROWS_AS(parse_gyro_csv("time,wx,wy,wz\n0,0,0,0\n"), ParseError);
  try {
    parse_gyro_csv("t,wx,wy,wz\n0,0,0,1\n1,0,0\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  try {
    parse_gyro_csv("t,wx,wy,wz\n0,0,0,1\n# c\n1,0,zero,1\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
  CHECK_THROWS_AS(parse_gyro_csv("t,wx,wy,wz\n0,0,0,nan\n"), ParseError);
  try {
    parse_gyro_csv("t,wx,wy,wz\n0,0,0,1\n2,0,0,1\n1,0,0,1\n");
    FAIL("expected OrderingError");
  } catch (const OrderingError& e) {
    CHECK(e.line() == 4);
  }
}

TEST_CASE("propagate_gyro: zero rates keep attitude constant") {
  const auto log = parse_gyro_csv("t,wx,wy,wz\n0,0,0,0\n0.5,0,0,0\n2,0,0,0\n");
  const auto traj = propagate_gyro(log, cayley_config(0.1), OrthogonalState::identity(3), {0, true});
  REQUIRE(traj.records.size() == 3);
  for (const auto& r : traj.records) CHECK(*r.q == SquareMatrix::Identity(3, 3));
  const auto ref = reference_gyro(log, OrthogonalState::identity(3));
  for (const auto& r : ref.records) CHECK(*r.q == SquareMatrix::Identity(3, 3));
}

TEST_CASE("propagate_gyro: constant rate quarter turn") {
  const double end = std::numbers::pi / 2;
  std::vector<GyroSample> samples{{0.0, AngularRate(0, 0, 1)}, {end, AngularRate(0, 0, 1)}};
  const GyroLog log(std::move(samples));
  const auto traj = propagate_gyro(log, cayley_config(1e-3), OrthogonalState::identity(3), {0, true});
  CHECK(traj.records.back().t == end);
  CHECK((*traj.records.back().q - rot_z(end)).norm() <= 1e-6);
}

TEST_CASE("propagate_gyro on the benchmark log matches propagate record for record") {
  const auto log = parse_gyro_csv("t,wx,wy,wz\n0,0,-0.1,-2\n2000,0,-0.1,-2\n");
  const auto via_gyro = propagate_gyro(log, cayley_config(0.1), OrthogonalState::identity(3), {1, false});
  const auto direct =
      propagate(cayley_config(0.1), assert_skew(ot::paper_matrix()), OrthogonalState::identity(3), 2000.0, 1);
  REQUIRE(via_gyro.records.size() == direct.records.size());
  for (std::size_t i = 0; i < direct.records.size(); ++i) {
    const auto& a = via_gyro.records[i];
    const auto& b = direct.records[i];
    CHECK(a.t == b.t);
    CHECK(a.energy == b.energy);
    CHECK(a.orth_defect == b.orth_defect);
    CHECK(a.det_drift == b.det_drift);
  }
  const auto boundaries = propagate_gyro(log, cayley_config(0.1), OrthogonalState::identity(3));
  CHECK(boundaries.records.size() == 2);
  CHECK(boundaries.records.back().energy == direct.records.back().energy);
}

TEST_CASE("reference_gyro examples") {
  std::vector<GyroSample> samples{{0.0, AngularRate(0, 0, 1)}, {std::numbers::pi, AngularRate(0, 0, 0)}};
  const auto half = reference_gyro(GyroLog(std::move(samples)), OrthogonalState::identity(3));
  CHECK((*half.records.back().q - rot_z(std::numbers::pi)).norm() <= 1e-15);

  const auto log = smooth_log(0.05, 400);
  const auto ref = reference_gyro(log, OrthogonalState::identity(3));
  for (const auto& r : ref.records) CHECK(r.orth_defect <= 1e-12);
}

TEST_CASE("propagate_gyro converges to the reference at second order") {
  const auto log = smooth_log(0.5, 10);
  const auto ref = reference_gyro(log, OrthogonalState::identity(3));
  std::vector<double> errs;
  const std::vector<double> steps{0.1, 0.05, 0.025, 0.0125};
  for (double h : steps) {
    const auto traj = propagate_gyro(log, cayley_config(h), OrthogonalState::identity(3), {0, true});
    errs.push_back((*traj.records.back().q - *ref.records.back().q).norm());
  }
  for (std::size_t i = 1; i < errs.size(); ++i) {
    const double slope = std::log(errs[i - 1] / errs[i]) / std::log(steps[i - 1] / steps[i]);
    CHECK(std::abs(slope - 2.0) <= 0.1);
  }
}

TEST_CASE("propagate_gyro keeps orthogonality over a long log") {
  const auto log = smooth_log(0.01, 100000);
  const auto traj = propagate_gyro(log, cayley_config(0.01), OrthogonalState::identity(3));
  REQUIRE(traj.records.size() == 100001);
  double worst = 0.0;
  double worst_energy = 0.0;
  for (const auto& r : traj.records) {
    worst = std::max(worst, r.orth_defect);
    worst_energy = std::max(worst_energy, std::abs(r.energy - 3.0));
  }
  CHECK(worst <= 1e-9);
  CHECK(worst_energy <= 1e-9);
}

TEST_CASE("propagate_gyro preconditions") {
  const auto log = parse_gyro_csv("t,wx,wy,wz\n1,0,0,1\n2,0,0,1\n");
  CHECK_THROWS_AS(propagate_gyro(log, cayley_config(0.1), OrthogonalState::identity(3, 0.0)), std::invalid_argument);
  CHECK_NOTHROW(propagate_gyro(log, cayley_config(0.1), OrthogonalState::identity(3, 1.0)));

  const OrthogonalState scaled{2.0 * SquareMatrix::Identity(3, 3), 1.0};
  CHECK_THROWS_AS(propagate_gyro(log, cayley_config(0.1), scaled), OrthogonalityError);
  GyroOptions allow;
  allow.allow_nonorthogonal = true;
  const auto traj = propagate_gyro(log, cayley_config(0.1), scaled, allow);
  CHECK(traj.records.back().energy == doctest::Approx(12.0).epsilon(1e-12));

  const auto single = parse_gyro_csv("t,wx,wy,wz\n1,0,0,1\n");
  CHECK_THROWS_AS(propagate_gyro(single, cayley_config(0.1), OrthogonalState::identity(3, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(propagate_gyro(log, cayley_config(0.1), OrthogonalState::identity(2, 1.0)), DimensionError);
}
