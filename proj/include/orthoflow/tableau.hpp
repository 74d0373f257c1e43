#pragma once

#include <Eigen/Dense>

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace orthoflow {

/// Runge-Kutta coefficients (A, b, c) for an s-stage method.
///
/// A plain aggregate: validate() checks it, and builtin()/parse_tableau()
/// only hand out tableaux that have passed validate().
struct ButcherTableau {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  std::string name;

  Eigen::Index stages() const noexcept { return b.size(); }
};

enum class TableauKind { explicit_method, implicit_method };

/// Threshold on ||c_i - sum_j a_ij|| per row.
inline constexpr double kRowSumTolerance = 1e-14;
/// Frobenius-norm threshold for the symplectic verdict.
inline constexpr double kSymplecticTolerance = 1e-14;

/// Checks shapes, finiteness and c_i = sum_j a_ij. Throws ConsistencyError
/// naming the first offending (1-based) row. Returns explicit when A is
/// strictly lower triangular.
TableauKind validate(const ButcherTableau& t);

bool is_explicit(const ButcherTableau& t);

/// midpoint, rk2-explicit, gauss2, rk4-classical. Throws CatalogueError.
ButcherTableau builtin(std::string_view name);

const std::vector<std::string>& builtin_names();

struct SymplecticityReport {
  /// B A + A^T B - b b^T with B = diag(b).
  Eigen::MatrixXd m;
  /// ||m||_F
  double defect = 0.0;
  bool symplectic = false;
};

SymplecticityReport symplecticity(const ButcherTableau& t);

/// Reads the text tableau format:
///
///     # comment
///     s
///     a_11 ... a_1s
///     ...
///     a_s1 ... a_ss
///     b_1 ... b_s
///     [c_1 ... c_s]
///
/// When the c line is absent it is filled with the row sums of A. Blank
/// and '#' lines are skipped but still counted for error line numbers.
ButcherTableau parse_tableau(std::istream& in, std::string name = {});
ButcherTableau parse_tableau(std::string_view text, std::string name = {});

/// Inverse of parse_tableau, 17 significant digits, c line always written.
std::string serialize_tableau(const ButcherTableau& t);

}  // namespace orthoflow
