#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mcfxt {

/// Input outside the mathematical domain of a function (x <= 0 for K1, sigma <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The coupled-mode model cannot be evaluated for this geometry (e.g. the mode is not guided).
class ModelDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Inconsistent or unsupported configuration values.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A statistic cannot be computed on the supplied series.
class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Nonlinear fit failed or the problem is rank deficient.
class FitError : public std::runtime_error {
 public:
  FitError(const std::string& what, double residual = 0.0)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Malformed input file. Carries the 1-based line number (0 when not line specific).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace mcfxt
