#include "orthoflow/errors.hpp"

#include <sstream>

namespace orthoflow {

namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::usage:
      return 1;
    case ErrorKind::validation:
      return 2;
    case ErrorKind::numerical:
      return 3;
  }
  return 3;
}

SkewnessError::SkewnessError(double defect)
    : Error(ErrorKind::validation, "matrix is not skew-symmetric: ||A + A^T||_inf = " + fmt_double(defect)),
      defect_(defect) {}

OrthogonalityError::OrthogonalityError(double defect, double tol)
    : Error(ErrorKind::validation, "initial matrix is not orthogonal: ||Q^T Q - I||_F = " + fmt_double(defect) +
                                       " exceeds " + fmt_double(tol)),
      defect_(defect) {}

ConvergenceError::ConvergenceError(int iterations, double residual)
    : Error(ErrorKind::numerical, "fixed-point stage iteration did not converge after " + std::to_string(iterations) +
                                      " iterations; last residual " + fmt_double(residual)),
      iterations_(iterations),
      residual_(residual) {}

CatalogueError::CatalogueError(const std::string& name)
    : Error(ErrorKind::validation, "unknown method '" + name + "'") {}

ConsistencyError::ConsistencyError(std::size_t row, double c, double row_sum)
    : Error(ErrorKind::validation, "row " + std::to_string(row) + ": c = " + fmt_double(c) +
                                       " but sum_j a_ij = " + fmt_double(row_sum)),
      row_(row) {}

ConsistencyError::ConsistencyError(std::size_t row, const std::string& what)
    : Error(ErrorKind::validation, "row " + std::to_string(row) + ": " + what), row_(row) {}

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error(ErrorKind::validation, "line " + std::to_string(line) + ": " + what), line_(line) {}

OrderingError::OrderingError(std::size_t line, double previous, double current)
    : Error(ErrorKind::validation, "line " + std::to_string(line) + ": time " + fmt_double(current) +
                                       " does not exceed previous time " + fmt_double(previous)),
      line_(line) {}

}  // namespace orthoflow
