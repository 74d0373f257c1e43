#pragma once

#include "orthoflow/linalg.hpp"
#include "orthoflow/tableau.hpp"

#include <string>
#include <string_view>
#include <variant>

namespace orthoflow {

/// Closed-form step formulas for the linear equation Q' = S Q.
enum class ClosedForm {
  cayley_midpoint,  // (I - h/2 S)^{-1} (I + h/2 S) Q
  rk2_closed,       // (I + h S + h^2/2 S^2) Q
};

/// Either a Butcher tableau or one of the closed-form twins.
class Method {
 public:
  Method(ButcherTableau t);  // NOLINT(google-explicit-constructor)
  Method(ClosedForm f);      // NOLINT(google-explicit-constructor)

  /// "cayley-midpoint", "rk2-closed" or a builtin tableau name.
  static Method from_label(std::string_view label);

  std::string label() const;
  const ButcherTableau* tableau() const noexcept { return std::get_if<ButcherTableau>(&impl_); }
  const ClosedForm* closed_form() const noexcept { return std::get_if<ClosedForm>(&impl_); }

 private:
  std::variant<ButcherTableau, ClosedForm> impl_;
};

struct DirectSolve {};

struct FixedPointSolve {
  double tol = 1e-14;
  int max_iters = 100;
};

/// How implicit stage equations are solved.
using StageSolver = std::variant<DirectSolve, FixedPointSolve>;

struct IntegratorConfig {
  Method method;
  double step = 0.0;
  StageSolver stage_solver = DirectSolve{};

  /// Throws std::invalid_argument on step <= 0, tol <= 0 or max_iters < 1.
  void check() const;
};

/// Counters filled in by rk_step when a non-null pointer is passed.
struct StageStats {
  int linear_solves = 0;
  int fixed_point_iterations = 0;
};

/// One s-stage Runge-Kutta step, Q_{k+1} = Q_k + h sum_i b_i S Y_i with
/// Y_i = Q_k + h sum_j a_ij S Y_j. Explicit tableaux use forward
/// substitution; implicit ones solve (I - h A (x) S) Y = 1 (x) Q_k directly
/// or by fixed-point iteration. A negative h steps backwards.
OrthogonalState rk_step(const ButcherTableau& t, const SkewMatrix& s, const OrthogonalState& q, double h,
                        const StageSolver& solver = DirectSolve{}, StageStats* stats = nullptr);

OrthogonalState cayley_step(const SkewMatrix& s, const OrthogonalState& q, double h);

OrthogonalState rk2_closed_step(const SkewMatrix& s, const OrthogonalState& q, double h);

OrthogonalState step(const Method& method, const SkewMatrix& s, const OrthogonalState& q, double h,
                     const StageSolver& solver = DirectSolve{});

/// Phi with Q_{k+1} = Phi Q_k. Every scheme here is linear in Q, so Phi is
/// the step applied to the identity.
struct TransferMatrix {
  SquareMatrix phi;
  std::string method;
  double step = 0.0;
};

TransferMatrix transfer_matrix(const Method& method, const SkewMatrix& s, double h,
                               const StageSolver& solver = DirectSolve{});

/// ||Phi(h) Phi(-h) - I||_F; zero for symmetric methods.
double adjoint_defect(const Method& method, const SkewMatrix& s, double h,
                      const StageSolver& solver = DirectSolve{});

/// Steppers on an arbitrary coefficient matrix, without the skewness gate.
/// Used to show what happens when the gate is bypassed.
namespace unchecked {

SquareMatrix rk_step(const ButcherTableau& t, const SquareMatrix& a, const SquareMatrix& q, double h,
                     const StageSolver& solver = DirectSolve{}, StageStats* stats = nullptr);
SquareMatrix cayley_step(const SquareMatrix& a, const SquareMatrix& q, double h);
SquareMatrix rk2_closed_step(const SquareMatrix& a, const SquareMatrix& q, double h);

}  // namespace unchecked

}  // namespace orthoflow
