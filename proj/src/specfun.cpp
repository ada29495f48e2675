#include "mirrorcorr/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "mirrorcorr/errors.hpp"

namespace mirrorcorr::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_positive(double x, const char* fn) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string(fn) + ": argument must be positive and finite, got " +
                      std::to_string(x));
  }
}

}  // namespace

namespace detail {

SiCi sici_series(double x) {
  const double x2 = x * x;
  // Si: sum (-1)^n x^(2n+1) / ((2n+1) (2n+1)!)
  double term = x;  // (-1)^n x^(2n+1)/(2n+1)!
  double si = x;
  double si_abs = std::abs(x);
  for (int n = 1; n < 100; ++n) {
    term *= -x2 / ((2.0 * n) * (2.0 * n + 1.0));
    const double add = term / (2.0 * n + 1.0);
    si += add;
    si_abs += std::abs(add);
    if (std::abs(add) < kEps * std::abs(si) * 0.01) break;
  }
  // Ci: gamma + ln x + sum_{n>=1} (-1)^n x^(2n) / (2n (2n)!)
  term = 1.0;  // (-1)^n x^(2n)/(2n)!
  double tail = 0.0;
  double tail_abs = 0.0;
  for (int n = 1; n < 100; ++n) {
    term *= -x2 / ((2.0 * n - 1.0) * (2.0 * n));
    const double add = term / (2.0 * n);
    tail += add;
    tail_abs += std::abs(add);
    if (std::abs(add) < kEps * 0.01 * std::max(std::abs(tail), 1e-300)) break;
  }
  const double log_part = kEulerGamma + std::log(x);
  SiCi out;
  out.si = si;
  out.ci = log_part + tail;
  out.abs_err = 4.0 * kEps * (si_abs + tail_abs + std::abs(log_part));
  return out;
}

AuxEval aux_continued_fraction(double x) {
  // g + i f = int_0^inf e^{it}/(t+x) dt = e^{z} E1(z) at z = -ix, evaluated as
  // 1/(z+1- 1/(z+3- 4/(z+5- ...))) by the modified Lentz method.
  using cplx = std::complex<double>;
  constexpr double tiny = 1e-300;
  const cplx z(0.0, -x);
  cplx b = z + 1.0;
  cplx c = 1.0 / tiny;
  cplx d = 1.0 / b;
  cplx h = d;
  int i = 1;
  for (; i < 1000; ++i) {
    const double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const cplx delta = c * d;
    h *= delta;
    if (std::abs(delta.real() - 1.0) + std::abs(delta.imag()) < kEps) break;
  }
  if (i >= 1000) {
    throw ConvergenceError("aux_continued_fraction: no convergence at x = " + std::to_string(x),
                           h.imag(), std::abs(h));
  }
  AuxEval out;
  out.x = x;
  out.f = h.imag();
  out.g = h.real();
  out.est_abs_err = 8.0 * kEps * std::abs(h);
  return out;
}

AuxEval aux_from_series(double x) {
  const SiCi sc = sici_series(x);
  const double s = std::sin(x);
  const double c = std::cos(x);
  const double si_shift = sc.si - std::numbers::pi / 2.0;
  AuxEval out;
  out.x = x;
  out.f = sc.ci * s - si_shift * c;
  out.g = -sc.ci * c - si_shift * s;
  out.est_abs_err = sc.abs_err + 2.0 * kEps * (std::abs(sc.ci) + std::abs(si_shift));
  return out;
}

}  // namespace detail

double sin_integral(double x) {
  if (!std::isfinite(x)) throw DomainError("sin_integral: non-finite argument");
  if (x == 0.0) return 0.0;
  const double ax = std::abs(x);
  double value;
  if (ax <= kSeriesSwitch) {
    value = detail::sici_series(ax).si;
  } else {
    const AuxEval fg = detail::aux_continued_fraction(ax);
    value = std::numbers::pi / 2.0 - fg.f * std::cos(ax) - fg.g * std::sin(ax);
  }
  return x < 0.0 ? -value : value;
}

double cos_integral(double x) {
  require_positive(x, "cos_integral");
  if (x <= kSeriesSwitch) return detail::sici_series(x).ci;
  const AuxEval fg = detail::aux_continued_fraction(x);
  return fg.f * std::sin(x) - fg.g * std::cos(x);
}

AuxEval aux_fg(double x) {
  require_positive(x, "aux_fg");
  return x <= kSeriesSwitch ? detail::aux_from_series(x) : detail::aux_continued_fraction(x);
}

double aux_f(double x) { return aux_fg(x).f; }

double aux_g(double x) { return aux_fg(x).g; }

}  // namespace mirrorcorr::specfun
