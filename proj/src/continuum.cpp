#include "mirrorcorr/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mirrorcorr/errors.hpp"
#include "mirrorcorr/numerics/gauss_kronrod.hpp"
#include "mirrorcorr/numerics/series_acceleration.hpp"
#include "mirrorcorr/specfun.hpp"

namespace mirrorcorr::continuum {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double d, const char* what) {
  if (!(d > 0.0) || !std::isfinite(d)) {
    throw DomainError(std::string(what) + " must be positive and finite");
  }
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw DomainError("QuadratureSpec: tolerances must be positive");
  }
  if (acceleration_order < 1) throw DomainError("QuadratureSpec: acceleration_order must be >= 1");
  if (max_partitions < acceleration_order + 2) {
    throw DomainError("QuadratureSpec: max_partitions must be >= acceleration_order + 2");
  }
  if (panel_max_subdivisions < 1) throw DomainError("QuadratureSpec: panel subdivisions < 1");
  if (!(split_min > 0.0) || !(split_factor >= 0.0)) {
    throw DomainError("QuadratureSpec: split point parameters must be positive");
  }
}

QuadratureSpec QuadratureSpec::tightened(double factor) const {
  QuadratureSpec out = *this;
  out.rel_tol /= factor;
  out.abs_tol /= factor;
  return out;
}

void ScaledDistances::validate() const {
  require_positive(d1, "d1");
  require_positive(d2, "d2");
}

double oscillatory_factor(double u) {
  if (std::abs(u) < 0.5) {
    // sum_{n>=1} (-1)^(n+1) 2n u^(2n) / (2n+1)!
    const double u2 = u * u;
    double term = u2 / 3.0;
    double sum = term;
    for (int n = 2; n < 12; ++n) {
      term *= -u2 * n / ((n - 1.0) * (2.0 * n) * (2.0 * n + 1.0));
      sum += term;
    }
    return sum;
  }
  return std::sin(u) / u - std::cos(u);
}

double smooth_factor(double x) {
  const specfun::AuxEval fg = specfun::aux_fg(x);
  return fg.f / x + fg.g;
}

double oscillatory_zero(int n) {
  if (n < 1) throw DomainError("oscillatory_zero: n must be >= 1");
  const double q = (n + 0.5) * kPi;
  double u = q - 1.0 / q - 2.0 / (3.0 * q * q * q) - 13.0 / (15.0 * std::pow(q, 5));
  for (int it = 0; it < 20; ++it) {
    const double h = std::sin(u) - u * std::cos(u);
    const double dh = u * std::sin(u);
    const double step = h / dh;
    u -= step;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * u) break;
  }
  return u;
}

double reduced_integrand(double u, double d) {
  return u * u / (1.0 + u / d) * smooth_factor(u) * oscillatory_factor(u) / (d * d * d);
}

double factorized_double_integral(double q, double d) {
  require_positive(d, "d");
  require_positive(q, "q");
  const specfun::AuxEval fg = specfun::aux_fg(q * d);
  return 0.5 * (fg.f / d + q * fg.g);
}

IntegralValue oscillatory_integral(double a, double b, const QuadratureSpec& spec) {
  require_positive(a, "distance");
  require_positive(b, "distance");
  spec.validate();
  const double ratio = b / a;
  const double scale = 1.0 / (a * a * a);
  auto integrand = [a, ratio, scale](double u) {
    return u * u / (1.0 + u / a) * smooth_factor(u * ratio) * oscillatory_factor(u) * scale;
  };

  int partitions = 0;
  auto partition = [&](double lo, double hi) {
    ++partitions;
    auto est = numerics::integrate_adaptive<double>(integrand, lo, hi, spec.abs_tol * 1e-3,
                                                    spec.rel_tol * 1e-2,
                                                    spec.panel_max_subdivisions);
    return est;
  };

  // Head: [0, z_n0] with z_n0 the first zero of S past U0.
  const double split = std::max(spec.split_min, spec.split_factor * std::max(a, 1.0 / ratio));
  double head = 0.0;
  double head_err = 0.0;
  double lo = 0.0;
  int n = 1;
  for (;; ++n) {
    const double hi = oscillatory_zero(n);
    auto est = partition(lo, hi);
    head += est.value;
    head_err += est.abs_err;
    lo = hi;
    if (hi >= split) break;
    if (partitions >= spec.max_partitions) {
      throw ConvergenceError("oscillatory_integral: head exceeds max_partitions", head, head_err);
    }
  }

  // Tail: alternating partition integrals from z_n0, Euler-accelerated after a
  // growing block of explicitly summed terms.
  const int order = spec.acceleration_order;
  std::vector<double> terms;
  double terms_err = 0.0;
  auto extend_to = [&](std::size_t count) {
    while (terms.size() < count) {
      const double hi = oscillatory_zero(n + 1);
      auto est = partition(lo, hi);
      terms.push_back(est.value);
      terms_err += est.abs_err;
      lo = hi;
      ++n;
    }
  };
  auto accelerated = [&](std::size_t block) {
    double explicit_sum = 0.0;
    for (std::size_t i = 0; i < block; ++i) explicit_sum += terms[i];
    auto tail = numerics::euler_alternating_tail<double>(
        std::span<const double>(terms).subspan(block, order + 1), order);
    return numerics::TailEstimate<double>{explicit_sum + tail.value, tail.abs_err};
  };

  std::size_t block = 8;
  double best = head;
  double best_err = std::numeric_limits<double>::infinity();
  while (true) {
    extend_to(block + order + 2);
    const auto t0 = accelerated(block);
    const auto t1 = accelerated(block + 1);
    const double tail_err = std::max({std::abs(t1.value - t0.value), t0.abs_err, t1.abs_err});
    best = head + t1.value;
    best_err = head_err + terms_err + tail_err;
    const double target = std::max(spec.abs_tol, spec.rel_tol * std::abs(best));
    if (tail_err <= target) break;
    if (partitions + static_cast<int>(block) + order + 2 > spec.max_partitions) {
      throw ConvergenceError("oscillatory_integral: tail not converged within max_partitions",
                             best, best_err);
    }
    block *= 2;
  }
  return {best, best_err, partitions};
}

IntegralValue reduced_integral_I(double d, const QuadratureSpec& spec) {
  return oscillatory_integral(d, d, spec);
}

IntegralValue correlation_brace(const ScaledDistances& dist, const QuadratureSpec& spec,
                                BraceTerm term) {
  dist.validate();
  IntegralValue out;
  if (term != BraceTerm::oscillatory) {
    const specfun::AuxEval f1 = specfun::aux_fg(dist.d1);
    const specfun::AuxEval f2 = specfun::aux_fg(dist.d2);
    const double F1 = f1.f / dist.d1 + f1.g;
    const double F2 = f2.f / dist.d2 + f2.g;
    out.value += F1 * F2;
    out.est_abs_err += std::abs(F1) * f2.est_abs_err * 2.0 + std::abs(F2) * f1.est_abs_err * 2.0;
  }
  if (term != BraceTerm::factorized) {
    if (dist.d1 == dist.d2) {
      const IntegralValue i = oscillatory_integral(dist.d1, dist.d2, spec);
      out.value += 2.0 * i.value;
      out.est_abs_err += 2.0 * i.est_abs_err;
      out.partitions += i.partitions;
    } else {
      const IntegralValue i12 = oscillatory_integral(dist.d1, dist.d2, spec);
      const IntegralValue i21 = oscillatory_integral(dist.d2, dist.d1, spec);
      // Sum in a fixed order of (min, max) so the swap is exact.
      const bool ordered = dist.d1 < dist.d2;
      out.value += ordered ? i12.value + i21.value : i21.value + i12.value;
      out.est_abs_err += i12.est_abs_err + i21.est_abs_err;
      out.partitions += i12.partitions + i21.partitions;
    }
  }
  return out;
}

double correlation_prefactor(const PhysicalParams& params) {
  params.validate();
  const double h = params.hbar;
  return -h * h * h * params.c * params.k0() / (64.0 * std::pow(2.0 * kPi, 4) * params.m);
}

CorrelationResult correlation_C_general(const ScaledDistances& dist, const PhysicalParams& params,
                                        const QuadratureSpec& spec) {
  const double pref = correlation_prefactor(params);
  const IntegralValue brace = correlation_brace(dist, spec);
  CorrelationResult out;
  out.value = pref * brace.value;
  out.method = CorrelationMethod::continuum_quadrature;
  out.est_abs_err = std::abs(pref) * brace.est_abs_err;
  out.quadrature_partitions = brace.partitions;
  return out;
}

CorrelationResult correlation_C_of_d(double d, const PhysicalParams& params,
                                     const QuadratureSpec& spec) {
  return correlation_C_general({d, d}, params, spec);
}

double asymptotic_correlation(double d, const PhysicalParams& params, double coefficient) {
  require_positive(d, "d");
  const double h = params.hbar;
  return -coefficient * h * h * h * params.c * params.k0() /
         (32.0 * std::pow(2.0 * kPi, 4) * params.m) / (d * d * d);
}

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y,
                          std::optional<double> fixed_exponent) {
  const std::size_t n = x.size();
  if (n != y.size()) throw DomainError("fit_power_law: x and y differ in length");
  if (n < 2 || (n < 3 && !fixed_exponent)) throw DomainError("fit_power_law: too few points");
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] != 0.0) || !std::isfinite(y[i])) {
      throw DomainError("fit_power_law: need x > 0 and finite nonzero y");
    }
    lx[i] = std::log(x[i]);
    ly[i] = std::log(std::abs(y[i]));
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double slope;
  if (fixed_exponent) {
    slope = *fixed_exponent;
  } else {
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sxx += (lx[i] - mx) * (lx[i] - mx);
      sxy += (lx[i] - mx) * (ly[i] - my);
    }
    slope = sxy / sxx;
  }
  const double intercept = my - slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (intercept + slope * lx[i]);
    ss += r * r;
  }
  PowerLawFit fit;
  fit.coefficient = std::exp(intercept);
  fit.exponent = slope;
  fit.residual = std::sqrt(ss / static_cast<double>(n));
  fit.x.assign(x.begin(), x.end());
  fit.y.assign(y.begin(), y.end());
  return fit;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw DomainError("log_spaced: need 0 < lo < hi, n >= 2");
  std::vector<double> out(n);
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) out[i] = lo * std::exp(step * i);
  out.front() = lo;
  out.back() = hi;
  return out;
}

PowerLawFit fit_asymptotic_coefficient(double d_min, double d_max, int n_points,
                                       const QuadratureSpec& spec, BraceTerm term,
                                       double residual_threshold) {
  if (n_points < 4) throw DomainError("fit_asymptotic_coefficient: need n_points >= 4");
  const std::vector<double> d = log_spaced(d_min, d_max, n_points);
  std::vector<double> b(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) b[i] = correlation_brace({d[i], d[i]}, spec, term).value;
  PowerLawFit fit = fit_power_law(d, b);
  if (fit.residual > residual_threshold) {
    throw FitError("power-law fit residual " + std::to_string(fit.residual) + " above threshold " +
                       std::to_string(residual_threshold),
                   fit);
  }
  return fit;
}

}  // namespace mirrorcorr::continuum
