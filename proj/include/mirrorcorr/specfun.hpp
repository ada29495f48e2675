#pragma once

// Sine and cosine integrals and the auxiliary functions
//   f(x) = Ci(x) sin x - si(x) cos x = int_0^inf sin t / (t + x) dt,
//   g(x) = -Ci(x) cos x - si(x) sin x = int_0^inf cos t / (t + x) dt,
// with si(x) = Si(x) - pi/2. Both branches (power series below
// kSeriesSwitch, continued fraction above) are accurate to ~1e-15.

namespace mirrorcorr::specfun {

inline constexpr double kSeriesSwitch = 4.0;
inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

struct AuxEval {
  double x = 0.0;
  double f = 0.0;
  double g = 0.0;
  double est_abs_err = 0.0;
};

// Si(x), odd in x. Throws DomainError for non-finite x.
double sin_integral(double x);

// Ci(x) for x > 0.
double cos_integral(double x);

// f(x), g(x) for x > 0.
double aux_f(double x);
double aux_g(double x);
AuxEval aux_fg(double x);

namespace detail {

struct SiCi {
  double si = 0.0;  // Si(x)
  double ci = 0.0;  // Ci(x)
  double abs_err = 0.0;
};

// Branch evaluators, exposed for the seam test. Valid for x > 0.
SiCi sici_series(double x);
AuxEval aux_continued_fraction(double x);
AuxEval aux_from_series(double x);

}  // namespace detail

}  // namespace mirrorcorr::specfun
