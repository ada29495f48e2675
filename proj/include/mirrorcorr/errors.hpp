#pragma once

#include <stdexcept>
#include <string>

namespace mirrorcorr {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical procedure ran out of budget. Carries the best value it had.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_estimate, double est_abs_err)
      : std::runtime_error(what), best_estimate_(best_estimate), est_abs_err_(est_abs_err) {}

  double best_estimate() const { return best_estimate_; }
  double est_abs_err() const { return est_abs_err_; }

 private:
  double best_estimate_;
  double est_abs_err_;
};

// Malformed or incomplete run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// CSV input that does not follow the sweep layout.
class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mirrorcorr
