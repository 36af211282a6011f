#pragma once

#include <stdexcept>
#include <string>

namespace nlskdv {

/// Failure categories. The numeric values are the CLI exit codes.
enum class ErrorKind : int {
  validation = 2,
  io = 3,
  numerical = 4,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(ErrorKind::validation, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::numerical, what) {}
};

/// Iteration budget exhausted before the stopping criterion was met.
class NonConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The solution does not decay inside the periodic box.
class BoundaryLeak : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Raised for constrained problems whose infimum is known but not attained,
/// e.g. I(s, 0) = 0 when the NLS self-interaction vanishes.
class UnattainedInfimum : public ValidationError {
 public:
  UnattainedInfimum(const std::string& what, double infimum)
      : ValidationError(what), infimum_(infimum) {}
  double infimum() const noexcept { return infimum_; }

 private:
  double infimum_;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}

}  // namespace nlskdv
