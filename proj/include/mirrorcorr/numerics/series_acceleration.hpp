#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace mirrorcorr::numerics {

template <typename Scalar>
struct TailEstimate {
  Scalar value{};
  Scalar abs_err{};
};

// Euler transform of an alternating tail sum_{i>=0} terms[i], where
// terms[i] = (-1)^i b_i with b_i smooth:
//   sum = sum_{k=0}^{order} (-1)^k (Delta^k b)_0 / 2^{k+1}.
// Needs order + 1 terms. The error estimate is the last retained correction.
template <typename Scalar>
TailEstimate<Scalar> euler_alternating_tail(std::span<const Scalar> terms, int order) {
  if (order < 1 || static_cast<int>(terms.size()) < order + 1) {
    throw std::invalid_argument("euler_alternating_tail: need order >= 1 and order + 1 terms");
  }
  const Scalar sign0 = terms[0] < 0 ? Scalar(-1) : Scalar(1);
  std::vector<Scalar> diff(order + 1);
  for (int i = 0; i <= order; ++i) {
    // b_i = |terms[i]| with the sign pattern fixed by the first term.
    diff[i] = sign0 * terms[i] * ((i % 2 == 0) ? Scalar(1) : Scalar(-1));
  }
  TailEstimate<Scalar> out;
  Scalar scale = Scalar(0.5);
  Scalar last = 0;
  for (int k = 0; k <= order; ++k) {
    last = ((k % 2 == 0) ? scale : -scale) * diff[0];
    out.value += last;
    for (int i = 0; i < order - k; ++i) diff[i] = diff[i + 1] - diff[i];
    scale /= 2;
  }
  out.value *= sign0;
  out.abs_err = std::abs(last);
  return out;
}

// Neville-style Richardson extrapolation to h -> 0 of samples (h_i, v_i)
// whose error is a polynomial in h^power. Returns the fully extrapolated
// value and, as error estimate, its distance to the next-lower level.
template <typename Scalar>
TailEstimate<Scalar> richardson_extrapolate(std::span<const Scalar> h, std::span<const Scalar> v,
                                            Scalar power = 1) {
  const std::size_t n = h.size();
  if (n == 0 || v.size() != n) throw std::invalid_argument("richardson_extrapolate: size mismatch");
  std::vector<Scalar> t(v.begin(), v.end());
  std::vector<Scalar> hp(n);
  for (std::size_t i = 0; i < n; ++i) hp[i] = std::pow(h[i], power);
  Scalar prev_level_best = t[n - 1];
  for (std::size_t level = 1; level < n; ++level) {
    prev_level_best = t[n - 1];
    for (std::size_t i = n - 1; i >= level; --i) {
      t[i] = (hp[i - level] * t[i] - hp[i] * t[i - 1]) / (hp[i - level] - hp[i]);
    }
  }
  return {t[n - 1], n > 1 ? std::abs(t[n - 1] - prev_level_best) : Scalar(0)};
}

}  // namespace mirrorcorr::numerics
