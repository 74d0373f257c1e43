#pragma once

#include "orthoflow/diagnostics.hpp"
#include "orthoflow/integrate.hpp"
#include "orthoflow/linalg.hpp"

#include <cstddef>
#include <istream>
#include <string_view>
#include <vector>

namespace orthoflow {

struct GyroSample {
  double t = 0.0;  // seconds
  AngularRate rate;
};

/// Gyro samples with strictly increasing timestamps. The rate of sample k
/// is held over [t_k, t_{k+1}); the last sample only closes the final
/// interval.
class GyroLog {
 public:
  GyroLog() = default;
  /// Throws OrderingError when times do not strictly increase. `lines`
  /// (optional, same length) gives source line numbers for the message.
  explicit GyroLog(std::vector<GyroSample> samples, const std::vector<std::size_t>& lines = {});

  const std::vector<GyroSample>& samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }

 private:
  std::vector<GyroSample> samples_;
};

/// Parses the `t,wx,wy,wz` CSV format; '#' lines and blank lines skipped.
GyroLog parse_gyro_csv(std::istream& in);
GyroLog parse_gyro_csv(std::string_view text);

/// Orthogonality tolerance for a caller-supplied initial attitude.
inline constexpr double kInitialOrthogonalityTolerance = 1e-8;

struct GyroOptions {
  /// Extra records every n steps inside each interval; 0 records only at
  /// sample boundaries.
  int record_every = 0;
  bool keep_snapshots = false;
  /// Skip the orthogonality check on q0.
  bool allow_nonorthogonal = false;
};

/// Zero-order-hold propagation: on each interval S = hat(omega_k) and the
/// configured method steps on the grid t_k + j h, shortening the last step.
/// q0.t must equal the first sample time.
Trajectory propagate_gyro(const GyroLog& log, const IntegratorConfig& config, const OrthogonalState& q0,
                          const GyroOptions& options = {});

/// Exact per-interval flow expm(hat(omega_k), t_{k+1} - t_k), recorded at
/// sample boundaries.
Trajectory reference_gyro(const GyroLog& log, const OrthogonalState& q0, bool keep_snapshots = true);

/// Throws OrthogonalityError when ||Q^T Q - I||_F > tol.
void require_orthogonal(const SquareMatrix& q, double tol = kInitialOrthogonalityTolerance);

}  // namespace orthoflow
