#include "orthoflow/integrate.hpp"

#include "orthoflow/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace orthoflow {

Method::Method(ButcherTableau t) : impl_(std::move(t)) {}
Method::Method(ClosedForm f) : impl_(f) {}

Method Method::from_label(std::string_view label) {
  if (label == "cayley-midpoint") return Method(ClosedForm::cayley_midpoint);
  if (label == "rk2-closed") return Method(ClosedForm::rk2_closed);
  return Method(builtin(label));
}

std::string Method::label() const {
  if (const auto* f = closed_form()) {
    return *f == ClosedForm::cayley_midpoint ? "cayley-midpoint" : "rk2-closed";
  }
  const auto& t = std::get<ButcherTableau>(impl_);
  return t.name.empty() ? std::string("tableau") : t.name;
}

void IntegratorConfig::check() const {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw std::invalid_argument("step must be a positive finite number");
  }
  if (const auto* fp = std::get_if<FixedPointSolve>(&stage_solver)) {
    if (!(fp->tol > 0.0)) throw std::invalid_argument("fixed-point tolerance must be positive");
    if (fp->max_iters < 1) throw std::invalid_argument("fixed-point max_iters must be at least 1");
  }
}

namespace unchecked {

namespace {

void check_conformable(const SquareMatrix& a, const SquareMatrix& q) {
  if (a.rows() != a.cols() || q.rows() != a.rows()) {
    throw DimensionError("coefficient is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                         " but state has " + std::to_string(q.rows()) + " rows");
  }
}

SquareMatrix explicit_stages(const ButcherTableau& t, const SquareMatrix& a, const SquareMatrix& q, double h) {
  const Eigen::Index s = t.stages();
  std::vector<SquareMatrix> slopes;  // S Y_i
  slopes.reserve(static_cast<std::size_t>(s));
  SquareMatrix next = q;
  for (Eigen::Index i = 0; i < s; ++i) {
    SquareMatrix y = q;
    for (Eigen::Index j = 0; j < i; ++j) {
      if (t.a(i, j) != 0.0) y += (h * t.a(i, j)) * slopes[static_cast<std::size_t>(j)];
    }
    slopes.push_back(a * y);
    if (t.b(i) != 0.0) next += (h * t.b(i)) * slopes.back();
  }
  return next;
}

// Stage matrices stacked vertically: rows [i*M, (i+1)*M) hold Y_i.
Eigen::MatrixXd direct_stages(const ButcherTableau& t, const SquareMatrix& a, const SquareMatrix& q, double h,
                              StageStats* stats) {
  const Eigen::Index s = t.stages();
  const Eigen::Index m = a.rows();
  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(s * m, s * m);
  Eigen::MatrixXd rhs(s * m, q.cols());
  for (Eigen::Index i = 0; i < s; ++i) {
    for (Eigen::Index j = 0; j < s; ++j) {
      if (t.a(i, j) != 0.0) system.block(i * m, j * m, m, m) -= (h * t.a(i, j)) * a;
    }
    rhs.middleRows(i * m, m) = q;
  }
  if (stats) ++stats->linear_solves;
  try {
    return LuFactorization(system).solve(rhs);
  } catch (const SingularityError& e) {
    throw SingularityError(std::string("stage system: ") + e.what());
  }
}

Eigen::MatrixXd fixed_point_stages(const ButcherTableau& t, const SquareMatrix& a, const SquareMatrix& q, double h,
                                   const FixedPointSolve& opts, StageStats* stats) {
  const Eigen::Index s = t.stages();
  const Eigen::Index m = a.rows();
  Eigen::MatrixXd y = q.replicate(s, 1);
  Eigen::MatrixXd slopes(s * m, q.cols());
  double residual = 0.0;
  for (int iter = 1; iter <= opts.max_iters; ++iter) {
    for (Eigen::Index j = 0; j < s; ++j) {
      slopes.middleRows(j * m, m).noalias() = a * y.middleRows(j * m, m);
    }
    Eigen::MatrixXd next = q.replicate(s, 1);
    for (Eigen::Index i = 0; i < s; ++i) {
      for (Eigen::Index j = 0; j < s; ++j) {
        if (t.a(i, j) != 0.0) next.middleRows(i * m, m) += (h * t.a(i, j)) * slopes.middleRows(j * m, m);
      }
    }
    residual = (next - y).norm() / std::max(1.0, next.norm());
    y = std::move(next);
    if (stats) ++stats->fixed_point_iterations;
    if (!std::isfinite(residual)) break;
    if (residual <= opts.tol) return y;
  }
  throw ConvergenceError(opts.max_iters, residual);
}

}  // namespace

SquareMatrix rk_step(const ButcherTableau& t, const SquareMatrix& a, const SquareMatrix& q, double h,
                     const StageSolver& solver, StageStats* stats) {
  check_conformable(a, q);
  if (is_explicit(t)) {
    return explicit_stages(t, a, q, h);
  }
  Eigen::MatrixXd stages;
  if (const auto* fp = std::get_if<FixedPointSolve>(&solver)) {
    stages = fixed_point_stages(t, a, q, h, *fp, stats);
  } else {
    stages = direct_stages(t, a, q, h, stats);
  }
  const Eigen::Index m = a.rows();
  SquareMatrix weighted = SquareMatrix::Zero(m, q.cols());
  for (Eigen::Index i = 0; i < t.stages(); ++i) {
    if (t.b(i) != 0.0) weighted += t.b(i) * stages.middleRows(i * m, m);
  }
  return q + h * (a * weighted);
}

SquareMatrix cayley_step(const SquareMatrix& a, const SquareMatrix& q, double h) {
  check_conformable(a, q);
  const Eigen::Index m = a.rows();
  const SquareMatrix half = (0.5 * h) * a;
  const SquareMatrix lhs = SquareMatrix::Identity(m, m) - half;
  const SquareMatrix rhs = q + half * q;
  try {
    return LuFactorization(lhs).solve(rhs);
  } catch (const SingularityError& e) {
    throw SingularityError(std::string("Cayley system: ") + e.what());
  }
}

SquareMatrix rk2_closed_step(const SquareMatrix& a, const SquareMatrix& q, double h) {
  check_conformable(a, q);
  const Eigen::Index m = a.rows();
  const SquareMatrix phi = SquareMatrix::Identity(m, m) + h * a + (0.5 * h * h) * (a * a);
  return phi * q;
}

}  // namespace unchecked

OrthogonalState rk_step(const ButcherTableau& t, const SkewMatrix& s, const OrthogonalState& q, double h,
                        const StageSolver& solver, StageStats* stats) {
  return {unchecked::rk_step(t, s.matrix(), q.q, h, solver, stats), q.t + h};
}

OrthogonalState cayley_step(const SkewMatrix& s, const OrthogonalState& q, double h) {
  return {unchecked::cayley_step(s.matrix(), q.q, h), q.t + h};
}

OrthogonalState rk2_closed_step(const SkewMatrix& s, const OrthogonalState& q, double h) {
  return {unchecked::rk2_closed_step(s.matrix(), q.q, h), q.t + h};
}

OrthogonalState step(const Method& method, const SkewMatrix& s, const OrthogonalState& q, double h,
                     const StageSolver& solver) {
  if (const auto* t = method.tableau()) {
    return rk_step(*t, s, q, h, solver);
  }
  switch (*method.closed_form()) {
    case ClosedForm::cayley_midpoint:
      return cayley_step(s, q, h);
    case ClosedForm::rk2_closed:
      return rk2_closed_step(s, q, h);
  }
  throw std::logic_error("unhandled closed-form method");
}

TransferMatrix transfer_matrix(const Method& method, const SkewMatrix& s, double h, const StageSolver& solver) {
  const OrthogonalState id = OrthogonalState::identity(s.dim());
  return TransferMatrix{step(method, s, id, h, solver).q, method.label(), h};
}

double adjoint_defect(const Method& method, const SkewMatrix& s, double h, const StageSolver& solver) {
  const SquareMatrix forward = transfer_matrix(method, s, h, solver).phi;
  const SquareMatrix backward = transfer_matrix(method, s, -h, solver).phi;
  return (forward * backward - SquareMatrix::Identity(s.dim(), s.dim())).norm();
}

}  // namespace orthoflow
