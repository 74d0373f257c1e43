#pragma once

#include "orthoflow/integrate.hpp"
#include "orthoflow/linalg.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace orthoflow {

/// Invariant meters for one recorded sample.
struct StepRecord {
  double t = 0.0;
  double energy = 0.0;       // trace(Q^T Q)
  double energy_err = 0.0;   // energy - energy of the first record
  double orth_defect = 0.0;  // ||Q^T Q - I||_F
  double det_drift = 0.0;    // det(Q) - det(Q0)
  std::optional<SquareMatrix> q;
};

/// Recorded samples of one run; times are strictly increasing.
struct Trajectory {
  std::string method;
  double step = 0.0;
  std::vector<StepRecord> records;
};

/// Generalized energy trace(Q^T Q), i.e. the squared Frobenius norm.
double energy(const SquareMatrix& q);

double orthogonality_defect(const SquareMatrix& q);

double det_drift(const SquareMatrix& q, double det0);

/// ||Phi^T S Phi - S||_F. For a linear update Q -> Phi Q this vanishes
/// exactly when the two-form dQ ^ S dQ is preserved.
double pseudo_symplectic_defect(const TransferMatrix& phi, const SkewMatrix& s);

/// Predicted energy after k explicit RK2 steps from Q0 = I for an m x m
/// skew S of rank 2 with spectral radius sqrt(theta_sq):
/// (m - 2) + 2 (1 + h^4 theta_sq^2 / 4)^k.
double rk2_energy_forecast(double theta_sq, double h, long long k, int m);

/// Least-squares slope of log(global error at t_end) against log(h), the
/// error measured against expm. Returns nullopt when the errors are too
/// small (below 1e-14) to fit. Throws std::invalid_argument for fewer than
/// three step sizes or a non-positive one.
std::optional<double> convergence_order(const Method& method, const SkewMatrix& s, const OrthogonalState& q0,
                                        double t_end, std::span<const double> steps,
                                        const StageSolver& solver = DirectSolve{});

/// Global error ||Q_N - exp((t_end - t0) S) Q0||_F of one fixed-step run.
double global_error(const Method& method, const SkewMatrix& s, const OrthogonalState& q0, double t_end, double h,
                    const StageSolver& solver = DirectSolve{});

}  // namespace orthoflow
