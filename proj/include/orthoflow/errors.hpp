#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace orthoflow {

/// Broad failure class; the CLI maps each one to a distinct exit code.
enum class ErrorKind {
  usage,       // exit 1
  validation,  // exit 2
  numerical,   // exit 3
};

int exit_code(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorKind::usage, what) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(ErrorKind::validation, what) {}
};

/// Coefficient matrix failed the skew-symmetry gate.
class SkewnessError : public Error {
 public:
  explicit SkewnessError(double defect);
  double defect() const noexcept { return defect_; }

 private:
  double defect_;
};

/// Non-orthogonal initial attitude where an orthogonal one is required.
class OrthogonalityError : public Error {
 public:
  OrthogonalityError(double defect, double tol);
  double defect() const noexcept { return defect_; }

 private:
  double defect_;
};

class SingularityError : public Error {
 public:
  explicit SingularityError(const std::string& what) : Error(ErrorKind::numerical, what) {}
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(int iterations, double residual);
  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  int iterations_;
  double residual_;
};

/// A state stopped being finite (overflow during a run).
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::numerical, what) {}
};

class CatalogueError : public Error {
 public:
  explicit CatalogueError(const std::string& name);
};

/// Tableau abscissa disagrees with the row sum of A. `row` is 1-based.
class ConsistencyError : public Error {
 public:
  ConsistencyError(std::size_t row, double c, double row_sum);
  ConsistencyError(std::size_t row, const std::string& what);
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

/// Malformed text input. `line` is 1-based and counts every physical line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Timestamps in a gyro log are not strictly increasing.
class OrderingError : public Error {
 public:
  OrderingError(std::size_t line, double previous, double current);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace orthoflow
