#include "orthoflow/propagate.hpp"

#include "orthoflow/errors.hpp"
#include "recorder.hpp"

#include <cmath>
#include <stdexcept>

namespace orthoflow {

long long step_count(double span, double h) {
  if (!(span > 0.0) || !(h > 0.0)) {
    throw std::invalid_argument("step_count: span and h must be positive");
  }
  const double ratio = span / h;
  const double nearest = std::round(ratio);
  if (nearest >= 1.0 && std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio)) {
    return static_cast<long long>(nearest);
  }
  return static_cast<long long>(std::ceil(ratio));
}

Trajectory propagate(const IntegratorConfig& config, const SkewMatrix& s, const OrthogonalState& q0, double t_end,
                     int record_every, bool keep_snapshots) {
  config.check();
  if (!(t_end > q0.t)) {
    throw std::invalid_argument("t_end must exceed the initial time");
  }
  if (record_every < 0) {
    throw std::invalid_argument("record_every must be non-negative");
  }
  if (q0.q.rows() != s.dim() || q0.q.cols() != s.dim()) {
    throw DimensionError("initial matrix and coefficient differ in dimension");
  }
  Trajectory traj;
  traj.method = config.method.label();
  traj.step = config.step;
  detail::Recorder recorder(traj, q0.q, keep_snapshots);
  recorder.record(q0);
  detail::advance_segment(config, s, q0, t_end, record_every, recorder);
  return traj;
}

}  // namespace orthoflow
