#pragma once

// Continuum limit (L0 -> infinity) of the cross-cavity squared-field
// correlation at scaled distances d = k0 |x - L0| from the mirror.
//
// All quantities are evaluated at the level of the dimensionless brace
//   B(d1, d2) = F(d1) F(d2) + A(d1, d2) + A(d2, d1),
//   F(x) = f(x)/x + g(x),  S(x) = sin(x)/x - cos(x),
//   A(a, b) = int_0^inf dv v^2/(1+v) S(v a) F(v b),
// and the physical prefactor -hbar^3 c k0 / (2^6 (2 pi)^4 m) is applied last.
// At d1 = d2 = d, A(d, d) = I(d) and B = F(d)^2 + 2 I(d).

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mirrorcorr/correlation_result.hpp"
#include "mirrorcorr/model.hpp"

namespace mirrorcorr::continuum {

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int panel_max_subdivisions = 200;  // adaptive Gauss-Kronrod 7/15 per partition
  int acceleration_order = 6;        // Euler transform order on the alternating tail
  int max_partitions = 20000;
  double split_min = 10.0;           // U0 = max(split_min, split_factor * d)
  double split_factor = 5.0;
  std::vector<double> regulator_eps_ladder;  // for regulated oracles only

  // Throws DomainError on non-positive tolerances or
  // max_partitions < acceleration_order + 2.
  void validate() const;
  QuadratureSpec tightened(double factor) const;
};

struct ScaledDistances {
  double d1 = 1.0;
  double d2 = 1.0;
  void validate() const;
};

struct IntegralValue {
  double value = 0.0;
  double est_abs_err = 0.0;
  int partitions = 0;
};

// Oscillatory factor sin(u)/u - cos(u), series near zero.
double oscillatory_factor(double u);

// f(x)/x + g(x).
double smooth_factor(double x);

// The n-th positive zero of sin(u)/u - cos(u) (tan u = u), n >= 1.
double oscillatory_zero(int n);

// Integrand of I(d) in the variable u = v d:
//   u^2/(1 + u/d) F(u) S(u) / d^3.
double reduced_integrand(double u, double d);

// int int_0^inf dr ds sin(r d) sin(s d)/(q + r + s) = (f(q d)/d + q g(q d))/2.
double factorized_double_integral(double q, double d);

// A(a, b) above, in the variable u = v a; zero-partitioned at the zeros of S(u)
// on [U0, inf) with Euler acceleration of the partition sums.
// Throws ConvergenceError (carrying the best estimate) on budget exhaustion.
IntegralValue oscillatory_integral(double a, double b, const QuadratureSpec& spec);

// I(d) = d^-3 int_0^inf du u^2/(1+u/d) F(u) S(u) = A(d, d).
IntegralValue reduced_integral_I(double d, const QuadratureSpec& spec);

enum class BraceTerm { full, factorized, oscillatory };

// B(d1, d2) or one of its parts.
IntegralValue correlation_brace(const ScaledDistances& dist, const QuadratureSpec& spec,
                                BraceTerm term = BraceTerm::full);

// -hbar^3 c k0 / (2^6 (2 pi)^4 m).
double correlation_prefactor(const PhysicalParams& params);

CorrelationResult correlation_C_of_d(double d, const PhysicalParams& params,
                                     const QuadratureSpec& spec);

CorrelationResult correlation_C_general(const ScaledDistances& dist, const PhysicalParams& params,
                                        const QuadratureSpec& spec);

// -1.8 hbar^3 c k0 / (2^5 (2 pi)^4 m) / d^3, the large-d law with the
// default coefficient 1.8 for I(d) d^3 (the integral itself tends to 5 pi / 8).
double asymptotic_correlation(double d, const PhysicalParams& params, double coefficient = 1.8);

struct PowerLawFit {
  double coefficient = 0.0;
  double exponent = 0.0;
  double residual = 0.0;  // RMS of log residuals
  std::vector<double> x;
  std::vector<double> y;
};

// Least squares of log|y| = log a + b log x. With fixed_exponent, only a is fitted.
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y,
                          std::optional<double> fixed_exponent = {});

// Fit whose residual exceeds its threshold; carries the fit and its data.
class FitError : public std::runtime_error {
 public:
  FitError(const std::string& what, PowerLawFit fit)
      : std::runtime_error(what), fit_(std::move(fit)) {}
  const PowerLawFit& fit() const { return fit_; }

 private:
  PowerLawFit fit_;
};

// Fits |B(d)| over n_points log-spaced d in [d_min, d_max]. Throws FitError
// when the fit residual exceeds residual_threshold.
PowerLawFit fit_asymptotic_coefficient(double d_min, double d_max, int n_points,
                                       const QuadratureSpec& spec,
                                       BraceTerm term = BraceTerm::full,
                                       double residual_threshold = 1e-2);

std::vector<double> log_spaced(double lo, double hi, int n);

}  // namespace mirrorcorr::continuum
