#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace epsdyn {

/// Base class for all epsdyn failures.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// freq_eval hit a denominator zero on the imaginary axis.
class PoleEvaluationError : public Error {
 public:
  PoleEvaluationError(double omega, const std::string& what)
      : Error(what), omega_(omega) {}
  double omega() const { return omega_; }

 private:
  double omega_;
};

/// Addition of transfer functions with distinct transport delays has no
/// rational closed form; rationalize first (pade_rationalize).
class UnequalDelayError : public Error {
 public:
  using Error::Error;
};

/// Operation requires a delay-free (rational) transfer function.
class NonzeroDelayError : public Error {
 public:
  using Error::Error;
};

/// 1 + g*h vanished identically when closing a feedback loop.
class DegenerateFeedbackError : public Error {
 public:
  using Error::Error;
};

/// Transfer function is improper (numerator degree exceeds denominator).
class ImproperTfError : public Error {
 public:
  using Error::Error;
};

/// Frequency grid violates its invariants or two grids do not match.
class GridError : public Error {
 public:
  using Error::Error;
};

/// The per-frequency loop matrix of a block composition was singular.
class SingularLoopError : public Error {
 public:
  SingularLoopError(double omega, const std::string& what)
      : Error(what), omega_(omega) {}
  double omega() const { return omega_; }

 private:
  double omega_;
};

/// Config file could not be parsed.
class ConfigParseError : public Error {
 public:
  ConfigParseError(int line, int column, const std::string& what)
      : Error(what), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Config parsed but violates invariants; carries every violation found,
/// not just the first.
class ConfigValidationError : public Error {
 public:
  explicit ConfigValidationError(std::vector<std::string> violations)
      : Error(join(violations)), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s = "config validation failed:";
    for (const auto& item : v) {
      s += "\n  - " + item;
    }
    return s;
  }
  std::vector<std::string> violations_;
};

}  // namespace epsdyn
