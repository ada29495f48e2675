#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace mirrorcorr::numerics {

template <typename Scalar>
struct QuadratureEstimate {
  Scalar value{};
  Scalar abs_err{};
  int evaluations = 0;
  bool converged = true;
};

namespace detail {

// Kronrod 15-point abscissae (non-negative half) and weights; the embedded
// Gauss 7-point rule uses the odd-indexed abscissae.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename Scalar, typename F>
QuadratureEstimate<Scalar> gk15(F& f, Scalar a, Scalar b) {
  const Scalar center = (a + b) / 2;
  const Scalar half = (b - a) / 2;
  const Scalar fc = f(center);
  Scalar kronrod = fc * Scalar(kWgk[7]);
  Scalar gauss = fc * Scalar(kWg[3]);
  for (int i = 0; i < 7; ++i) {
    const Scalar dx = half * Scalar(kXgk[i]);
    const Scalar pair = f(center - dx) + f(center + dx);
    kronrod += Scalar(kWgk[i]) * pair;
    if (i % 2 == 1) gauss += Scalar(kWg[i / 2]) * pair;
  }
  QuadratureEstimate<Scalar> out;
  out.value = kronrod * half;
  out.abs_err = std::abs((kronrod - gauss) * half);
  out.evaluations = 15;
  return out;
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod (7/15) on [a, b]: repeatedly bisects the
// panel with the largest error until the summed error meets the tolerance.
template <typename Scalar, typename F>
QuadratureEstimate<Scalar> integrate_adaptive(F&& f, Scalar a, Scalar b, Scalar abs_tol,
                                              Scalar rel_tol, int max_panels = 2000) {
  struct Panel {
    Scalar a, b;
    QuadratureEstimate<Scalar> est;
    bool operator<(const Panel& other) const { return est.abs_err < other.est.abs_err; }
  };
  std::priority_queue<Panel> panels;
  auto first = detail::gk15<Scalar>(f, a, b);
  Scalar total = first.value;
  Scalar total_err = first.abs_err;
  int evaluations = first.evaluations;
  panels.push({a, b, first});

  const Scalar roundoff = Scalar(50) * std::numeric_limits<Scalar>::epsilon();
  while (total_err > std::max(abs_tol, rel_tol * std::abs(total)) &&
         static_cast<int>(panels.size()) < max_panels) {
    Panel worst = panels.top();
    if (worst.est.abs_err <= roundoff * std::abs(worst.est.value)) break;
    panels.pop();
    const Scalar mid = (worst.a + worst.b) / 2;
    auto left = detail::gk15<Scalar>(f, worst.a, mid);
    auto right = detail::gk15<Scalar>(f, mid, worst.b);
    evaluations += left.evaluations + right.evaluations;
    total += left.value + right.value - worst.est.value;
    total_err += left.abs_err + right.abs_err - worst.est.abs_err;
    panels.push({worst.a, mid, left});
    panels.push({mid, worst.b, right});
  }

  // Re-sum to shed the drift of the running updates.
  QuadratureEstimate<Scalar> out;
  out.evaluations = evaluations;
  while (!panels.empty()) {
    out.value += panels.top().est.value;
    out.abs_err += panels.top().est.abs_err;
    panels.pop();
  }
  out.converged = out.abs_err <= std::max(abs_tol, rel_tol * std::abs(out.value));
  return out;
}

}  // namespace mirrorcorr::numerics
