#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace orthoflow {

/// Dense M x M real matrix. Square shape and finiteness are checked at the
/// API boundaries that need them rather than by the type itself.
using SquareMatrix = Eigen::MatrixXd;
using Vector3 = Eigen::Vector3d;

/// Relative tolerance used by assert_skew when none is given.
inline constexpr double kSkewTolerance = 1e-12;

/// Body angular rate in rad/s.
struct AngularRate {
  Vector3 omega = Vector3::Zero();

  AngularRate() = default;
  explicit AngularRate(const Vector3& w);
  AngularRate(double wx, double wy, double wz) : AngularRate(Vector3(wx, wy, wz)) {}

  double norm_squared() const { return omega.squaredNorm(); }
};

/// Skew-symmetric coefficient matrix. Only hat(), assert_skew() and zero()
/// produce one, so every instance has passed the skewness gate.
class SkewMatrix {
 public:
  static SkewMatrix zero(Eigen::Index dim);

  const SquareMatrix& matrix() const noexcept { return inner_; }
  Eigen::Index dim() const noexcept { return inner_.rows(); }

 private:
  explicit SkewMatrix(SquareMatrix m) : inner_(std::move(m)) {}
  SquareMatrix inner_;

  friend SkewMatrix hat(const AngularRate&);
  friend SkewMatrix assert_skew(const SquareMatrix&, double);
};

/// Solution sample Q at time t (seconds).
struct OrthogonalState {
  SquareMatrix q;
  double t = 0.0;

  static OrthogonalState identity(Eigen::Index dim, double t0 = 0.0);
};

/// [[0, -w3, w2], [w3, 0, -w1], [-w2, w1, 0]], so hat(w) * x == w.cross(x).
SkewMatrix hat(const AngularRate& rate);

/// Inverse of hat. Throws DimensionError unless s is 3 x 3.
AngularRate vee(const SkewMatrix& s);

/// Accepts `a` when ||a + a^T||_inf <= tol * max(1, ||a||_inf) and every
/// diagonal entry is within the same bound; throws SkewnessError otherwise.
SkewMatrix assert_skew(const SquareMatrix& a, double tol = kSkewTolerance);

/// omega x x.
Vector3 apply_velocity(const AngularRate& rate, const Vector3& x);

/// exp(t S). Closed-form rotation formula for 3 x 3, scaling and squaring of
/// a truncated Taylor series otherwise.
SquareMatrix expm(const SkewMatrix& s, double t);

/// Maximum absolute row sum.
double norm_inf(const SquareMatrix& a);

bool all_finite(const SquareMatrix& a);

/// LU factorization with partial pivoting, P A = L U.
///
/// Factorization never throws on a tiny pivot; it records the smallest pivot
/// so that solve() can refuse and determinant() can still report a value.
class LuFactorization {
 public:
  explicit LuFactorization(const SquareMatrix& a);

  /// Pivot magnitude below this fraction of ||A||_inf counts as singular.
  static constexpr double kPivotTolerance = 1e-14;

  bool singular() const noexcept { return singular_; }
  double min_pivot() const noexcept { return min_pivot_; }

  /// Solves A X = B. Throws SingularityError when singular().
  SquareMatrix solve(const Eigen::MatrixXd& b) const;

  /// Signed product of pivots.
  double determinant() const;

 private:
  Eigen::MatrixXd lu_;
  std::vector<Eigen::Index> perm_;
  int sign_ = 1;
  double min_pivot_ = 0.0;
  bool singular_ = false;
};

/// X with A X = B via LuFactorization.
Eigen::MatrixXd solve_linear(const SquareMatrix& a, const Eigen::MatrixXd& b);

double determinant(const SquareMatrix& a);

}  // namespace orthoflow
