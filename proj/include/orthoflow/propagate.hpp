#pragma once

#include "orthoflow/diagnostics.hpp"
#include "orthoflow/integrate.hpp"

namespace orthoflow {

/// Fixed-step integration from q0.t to t_end.
///
/// Step k ends at q0.t + k h (recomputed from k, never accumulated); the last
/// step is shortened to land exactly on t_end. A record is emitted for q0,
/// after every `record_every` steps (0: endpoints only), and for the final
/// state. With
/// `keep_snapshots` each record also carries the matrix.
Trajectory propagate(const IntegratorConfig& config, const SkewMatrix& s, const OrthogonalState& q0, double t_end,
                     int record_every = 1, bool keep_snapshots = false);

/// Number of steps of size h needed to cover `span`, treating a ratio within
/// 1e-9 of an integer as exact.
long long step_count(double span, double h);

}  // namespace orthoflow
