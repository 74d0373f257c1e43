#pragma once

#include "orthoflow/diagnostics.hpp"
#include "orthoflow/integrate.hpp"

namespace orthoflow::detail {

/// Builds StepRecords relative to the first recorded state.
class Recorder {
 public:
  Recorder(Trajectory& out, const SquareMatrix& q0, bool keep_snapshots);

  void record(const OrthogonalState& state);

 private:
  Trajectory& out_;
  double energy0_;
  double det0_;
  bool keep_;
};

/// Advances `state` to t_end on the grid state.t + k h, recording every
/// `record_every` steps (0 disables intermediate records) and always at
/// t_end. Returns the final state.
OrthogonalState advance_segment(const IntegratorConfig& config, const SkewMatrix& s, OrthogonalState state,
                                double t_end, int record_every, Recorder& recorder);

}  // namespace orthoflow::detail
