#include "orthoflow/diagnostics.hpp"

#include "orthoflow/errors.hpp"
#include "orthoflow/propagate.hpp"
#include "recorder.hpp"

#include <cmath>
#include <stdexcept>

namespace orthoflow {

double energy(const SquareMatrix& q) { return q.squaredNorm(); }

double orthogonality_defect(const SquareMatrix& q) {
  return (q.transpose() * q - SquareMatrix::Identity(q.cols(), q.cols())).norm();
}

double det_drift(const SquareMatrix& q, double det0) { return determinant(q) - det0; }

double pseudo_symplectic_defect(const TransferMatrix& phi, const SkewMatrix& s) {
  if (phi.phi.rows() != s.dim() || phi.phi.cols() != s.dim()) {
    throw DimensionError("transfer matrix and coefficient differ in dimension");
  }
  return (phi.phi.transpose() * s.matrix() * phi.phi - s.matrix()).norm();
}

double rk2_energy_forecast(double theta_sq, double h, long long k, int m) {
  if (theta_sq < 0.0 || !(h > 0.0) || k < 0) {
    throw std::invalid_argument("rk2_energy_forecast: need theta_sq >= 0, h > 0, k >= 0");
  }
  const double growth = std::pow(h, 4) * theta_sq * theta_sq / 4.0;
  return static_cast<double>(m - 2) + 2.0 * std::exp(static_cast<double>(k) * std::log1p(growth));
}

double global_error(const Method& method, const SkewMatrix& s, const OrthogonalState& q0, double t_end, double h,
                    const StageSolver& solver) {
  IntegratorConfig config{method, h, solver};
  const Trajectory traj = propagate(config, s, q0, t_end, 0, true);
  const SquareMatrix exact = expm(s, t_end - q0.t) * q0.q;
  return (*traj.records.back().q - exact).norm();
}

std::optional<double> convergence_order(const Method& method, const SkewMatrix& s, const OrthogonalState& q0,
                                        double t_end, std::span<const double> steps, const StageSolver& solver) {
  if (steps.size() < 3) {
    throw std::invalid_argument("convergence_order needs at least three step sizes");
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (double h : steps) {
    if (!(h > 0.0)) throw std::invalid_argument("step sizes must be positive");
    const double err = global_error(method, s, q0, t_end, h, solver);
    if (err >= 1e-14) {
      xs.push_back(std::log(h));
      ys.push_back(std::log(err));
    }
  }
  if (xs.size() < 2) return std::nullopt;

  const auto n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

namespace detail {

Recorder::Recorder(Trajectory& out, const SquareMatrix& q0, bool keep_snapshots)
    : out_(out), energy0_(energy(q0)), det0_(determinant(q0)), keep_(keep_snapshots) {}

void Recorder::record(const OrthogonalState& state) {
  if (!state.q.allFinite()) {
    throw NumericalError("state became non-finite at t = " + std::to_string(state.t));
  }
  StepRecord r;
  r.t = state.t;
  r.energy = energy(state.q);
  r.energy_err = r.energy - energy0_;
  r.orth_defect = orthogonality_defect(state.q);
  r.det_drift = det_drift(state.q, det0_);
  if (keep_) r.q = state.q;
  out_.records.push_back(std::move(r));
}

OrthogonalState advance_segment(const IntegratorConfig& config, const SkewMatrix& s, OrthogonalState state,
                                double t_end, int record_every, Recorder& recorder) {
  const double t0 = state.t;
  const double h = config.step;
  const long long n = step_count(t_end - t0, h);
  for (long long k = 1; k <= n; ++k) {
    const double t_next = (k == n) ? t_end : t0 + static_cast<double>(k) * h;
    const double dt = (k == n) ? t_end - (t0 + static_cast<double>(n - 1) * h) : h;
    state = step(config.method, s, state, dt, config.stage_solver);
    state.t = t_next;
    if (k == n || (record_every > 0 && k % record_every == 0)) {
      recorder.record(state);
    }
  }
  return state;
}

}  // namespace detail

}  // namespace orthoflow
