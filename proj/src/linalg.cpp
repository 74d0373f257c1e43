#include "orthoflow/linalg.hpp"

#include "orthoflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace orthoflow {

AngularRate::AngularRate(const Vector3& w) : omega(w) {
  if (!w.allFinite()) {
    throw DimensionError("angular rate has non-finite components");
  }
}

SkewMatrix SkewMatrix::zero(Eigen::Index dim) {
  if (dim < 1) {
    throw DimensionError("matrix dimension must be at least 1");
  }
  return SkewMatrix(SquareMatrix::Zero(dim, dim));
}

OrthogonalState OrthogonalState::identity(Eigen::Index dim, double t0) {
  return OrthogonalState{SquareMatrix::Identity(dim, dim), t0};
}

SkewMatrix hat(const AngularRate& rate) {
  const Vector3& w = rate.omega;
  SquareMatrix m(3, 3);
  m << 0.0, -w(2), w(1),
       w(2), 0.0, -w(0),
       -w(1), w(0), 0.0;
  return SkewMatrix(std::move(m));
}

AngularRate vee(const SkewMatrix& s) {
  const SquareMatrix& m = s.matrix();
  if (m.rows() != 3) {
    throw DimensionError("vee requires a 3x3 matrix, got " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  }
  return AngularRate(m(2, 1), m(0, 2), m(1, 0));
}

double norm_inf(const SquareMatrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().rowwise().sum().maxCoeff();
}

bool all_finite(const SquareMatrix& a) { return a.allFinite(); }

SkewMatrix assert_skew(const SquareMatrix& a, double tol) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("skewness tolerance must be positive");
  }
  if (a.rows() < 1 || a.rows() != a.cols()) {
    throw DimensionError("coefficient matrix must be square and non-empty");
  }
  if (!a.allFinite()) {
    throw SkewnessError(std::numeric_limits<double>::infinity());
  }
  const double bound = tol * std::max(1.0, norm_inf(a));
  const SquareMatrix sym = a + a.transpose();
  const double defect = norm_inf(sym);
  const double diag = a.diagonal().cwiseAbs().maxCoeff();
  if (defect > bound || diag > bound) {
    throw SkewnessError(defect);
  }
  return SkewMatrix(a);
}

Vector3 apply_velocity(const AngularRate& rate, const Vector3& x) {
  return hat(rate).matrix() * x;
}

namespace {

SquareMatrix expm_rotation3(const SquareMatrix& k) {
  // k = t * hat(w); theta = |t w|.
  const Vector3 w(k(2, 1), k(0, 2), k(1, 0));
  const double theta2 = w.squaredNorm();
  const double theta = std::sqrt(theta2);
  double sinc;
  double cosc;
  if (theta < 1e-4) {
    sinc = 1.0 - theta2 / 6.0 * (1.0 - theta2 / 20.0);
    cosc = 0.5 - theta2 / 24.0 * (1.0 - theta2 / 30.0);
  } else {
    sinc = std::sin(theta) / theta;
    cosc = (1.0 - std::cos(theta)) / theta2;
  }
  return SquareMatrix::Identity(3, 3) + sinc * k + cosc * (k * k);
}

SquareMatrix expm_taylor(const SquareMatrix& a) {
  const Eigen::Index n = a.rows();
  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  }
  const SquareMatrix scaled = a / std::ldexp(1.0, squarings);

  SquareMatrix result = SquareMatrix::Identity(n, n);
  SquareMatrix term = SquareMatrix::Identity(n, n);
  // ||scaled||_1 <= 1/2, so the remainder after term k is bounded by the
  // next term times 2; stop once that is below 1e-17 relative.
  for (int k = 1; k <= 40; ++k) {
    term = (term * scaled) / static_cast<double>(k);
    result += term;
    if (term.cwiseAbs().colwise().sum().maxCoeff() < 1e-17 * 0.5) break;
  }
  for (int i = 0; i < squarings; ++i) {
    result = (result * result).eval();
  }
  return result;
}

}  // namespace

SquareMatrix expm(const SkewMatrix& s, double t) {
  const SquareMatrix k = t * s.matrix();
  if (k.rows() == 3) {
    return expm_rotation3(k);
  }
  return expm_taylor(k);
}

LuFactorization::LuFactorization(const SquareMatrix& a) : lu_(a) {
  if (a.rows() != a.cols()) {
    throw DimensionError("LU factorization needs a square matrix");
  }
  const Eigen::Index n = a.rows();
  perm_.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) perm_[static_cast<std::size_t>(i)] = i;

  const double threshold = kPivotTolerance * norm_inf(a);
  min_pivot_ = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index p = k;
    lu_.col(k).tail(n - k).cwiseAbs().maxCoeff(&p);
    p += k;
    if (p != k) {
      lu_.row(k).swap(lu_.row(p));
      std::swap(perm_[static_cast<std::size_t>(k)], perm_[static_cast<std::size_t>(p)]);
      sign_ = -sign_;
    }
    const double pivot = lu_(k, k);
    min_pivot_ = std::min(min_pivot_, std::abs(pivot));
    if (std::abs(pivot) <= threshold || pivot == 0.0) {
      singular_ = true;
      if (pivot == 0.0) continue;
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      lu_(i, k) /= pivot;
    }
    const Eigen::Index rest = n - k - 1;
    if (rest > 0) {
      lu_.bottomRightCorner(rest, rest).noalias() -= lu_.col(k).tail(rest) * lu_.row(k).tail(rest);
    }
  }
  if (n == 0) min_pivot_ = 0.0;
}

SquareMatrix LuFactorization::solve(const Eigen::MatrixXd& b) const {
  if (singular_) {
    throw SingularityError("linear system is singular: smallest pivot " + std::to_string(min_pivot_));
  }
  const Eigen::Index n = lu_.rows();
  if (b.rows() != n) {
    throw DimensionError("right-hand side has " + std::to_string(b.rows()) + " rows, expected " +
                         std::to_string(n));
  }
  Eigen::MatrixXd x(n, b.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    x.row(i) = b.row(perm_[static_cast<std::size_t>(i)]);
  }
  lu_.triangularView<Eigen::UnitLower>().solveInPlace(x);
  lu_.triangularView<Eigen::Upper>().solveInPlace(x);
  return x;
}

double LuFactorization::determinant() const {
  double det = static_cast<double>(sign_);
  for (Eigen::Index i = 0; i < lu_.rows(); ++i) det *= lu_(i, i);
  return det;
}

Eigen::MatrixXd solve_linear(const SquareMatrix& a, const Eigen::MatrixXd& b) {
  return LuFactorization(a).solve(b);
}

double determinant(const SquareMatrix& a) { return LuFactorization(a).determinant(); }

}  // namespace orthoflow
