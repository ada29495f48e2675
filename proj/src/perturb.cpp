#include "mirrorcorr/perturb.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mirrorcorr/errors.hpp"

namespace mirrorcorr {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Quanta carried by each family of the corrected state:
// {mirror, left cavity, right cavity}; -1 marks "any even number".
struct FamilyContent {
  int phonons;
  int left;
  int right;
};
constexpr std::array<FamilyContent, 9> kFamilies = {{
    {0, 0, 0},   // bare vacuum
    {1, 2, 0},   // first order, left pair
    {1, 0, 2},   // first order, right pair
    {0, 2, 0},   // second order pair, left
    {0, 0, 2},   // second order pair, right
    {0, 4, 0},   // second order quartet, left
    {0, 0, 4},   // second order quartet, right
    {0, 2, 2},   // second order cross
    {2, -1, -1}  // two phonons with 0, 2 or 4 quanta per cavity
}};

constexpr bool every_family_has_even_cavity_quanta() {
  for (const auto& f : kFamilies) {
    if (f.left > 0 && f.left % 2 != 0) return false;
    if (f.right > 0 && f.right % 2 != 0) return false;
  }
  return true;
}
static_assert(every_family_has_even_cavity_quanta());

void require_n_modes(const PerturbativeState& state, int minimum) {
  if (state.modes().size() < minimum) {
    throw DomainError("need at least " + std::to_string(minimum) + " modes, got " +
                      std::to_string(state.modes().size()));
  }
}

// h(n) = sum_{p+q=n} a_p a_q for n = 2..2N, stored at n - 2.
Eigen::ArrayXd self_convolution(const Eigen::ArrayXd& a) {
  const Eigen::Index n = a.size();
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(2 * n - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.segment(i, n) += a[i] * a;
  }
  return out;
}

}  // namespace

PerturbativeState::PerturbativeState(ModeSet modes, CouplingModel model)
    : modes_(std::move(modes)), model_(std::move(model)) {
  model_.params.validate();
  // Unit-lambda factors; C^c_{jk} = sign_c lambda gamma_j gamma_k.
  gamma_ = coupling_factors(modes_, CouplingModel{model_.params, 1.0});
  const Eigen::ArrayXd& w = modes_.omegas();
  const double hbar = model_.params.hbar;
  const double lambda = model_.scale;
  double sum = 0.0;
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    sum += ((lambda * gamma_ * gamma_[k]) / (hbar * (model_.params.omega0 + w + w[k]))).square().sum();
  }
  // Both cavities carry the same magnitudes.
  lambda_sq_ = 4.0 * sum;
}

double PerturbativeState::coupling_entry(Cavity cavity, Eigen::Index j, Eigen::Index k) const {
  return cavity_sign(cavity) * model_.scale * gamma_[j] * gamma_[k];
}

double PerturbativeState::amplitude_entry(Cavity cavity, Eigen::Index j, Eigen::Index k) const {
  const Eigen::ArrayXd& w = modes_.omegas();
  return coupling_entry(cavity, j, k) /
         (model_.params.hbar * (model_.params.omega0 + w[j] + w[k]));
}

Eigen::MatrixXd PerturbativeState::pair_amplitudes(Cavity cavity) const {
  const Eigen::ArrayXd& w = modes_.omegas();
  const Eigen::Index n = w.size();
  Eigen::MatrixXd A(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    A.col(k) = (cavity_sign(cavity) * model_.scale * gamma_ * gamma_[k] /
                (model_.params.hbar * (model_.params.omega0 + w + w[k])))
                   .matrix();
  }
  return A;
}

double PerturbativeState::pair_amplitude(Cavity cavity, int j, int k) const {
  modes_.check_index(j);
  modes_.check_index(k);
  return amplitude_entry(cavity, j - 1, k - 1);
}

double PerturbativeState::second_order_pair(Cavity cavity, int l, int k) const {
  modes_.check_index(l);
  modes_.check_index(k);
  // 4 sum_j C_{jl} A_{jk} / (hbar (w_l + w_k))
  double contraction = 0.0;
  for (Eigen::Index j = 0; j < gamma_.size(); ++j) {
    contraction += coupling_entry(cavity, j, l - 1) * amplitude_entry(cavity, j, k - 1);
  }
  return 4.0 * contraction /
         (model_.params.hbar * (modes_.omega(l) + modes_.omega(k)));
}

Eigen::MatrixXd PerturbativeState::second_order_pair_matrix(Cavity cavity) const {
  const Eigen::ArrayXd& w = modes_.omegas();
  const Eigen::Index n = w.size();
  const Eigen::MatrixXd A = pair_amplitudes(cavity);
  // C^c = sign lambda gamma gamma^T, so C^T A = sign lambda gamma (A^T gamma)^T.
  const Eigen::VectorXd s = A.transpose() * gamma_.matrix();
  Eigen::MatrixXd contraction =
      cavity_sign(cavity) * model_.scale * gamma_.matrix() * s.transpose();
  for (Eigen::Index k = 0; k < n; ++k) {
    contraction.col(k).array() /= model_.params.hbar * (w + w[k]);
  }
  return 4.0 * contraction;
}

double PerturbativeState::second_order_quartet(Cavity cavity, int j, int k, int l, int m) const {
  for (int i : {j, k, l, m}) modes_.check_index(i);
  const double energy =
      modes_.omega(j) + modes_.omega(k) + modes_.omega(l) + modes_.omega(m);
  return coupling_entry(cavity, m - 1, l - 1) * amplitude_entry(cavity, j - 1, k - 1) /
         (model_.params.hbar * energy);
}

double PerturbativeState::second_order_cross(int j, int k, int l, int m) const {
  for (int i : {j, k, l, m}) modes_.check_index(i);
  const double energy =
      modes_.omega(j) + modes_.omega(k) + modes_.omega(l) + modes_.omega(m);
  const double c_left = coupling_entry(Cavity::left, j - 1, k - 1);
  const double c_right = coupling_entry(Cavity::right, l - 1, m - 1);
  return (c_left * amplitude_entry(Cavity::right, l - 1, m - 1) +
          amplitude_entry(Cavity::left, j - 1, k - 1) * c_right) /
         (model_.params.hbar * energy);
}

double first_order_amplitude(Cavity cavity, int j, int k, const PerturbativeState& state) {
  const double a = state.pair_amplitude(cavity, j, k);
  return j == k ? std::numbers::sqrt2 * a : 2.0 * a;
}

double normalization_deficit(const PerturbativeState& state) { return state.lambda_sq(); }

CorrelationResult phi_phi_correlation(double x1, double x2, const PerturbativeState& state) {
  const RightCavityFrame frame = state.modes().frame();
  cavity_coordinate(x1, Cavity::left, state.params(), frame);
  cavity_coordinate(x2, Cavity::right, state.params(), frame);
  // phi changes the quanta of one cavity by one; every family holds an even
  // number per cavity, so both <phi phi> and <phi> vanish term by term.
  CorrelationResult out;
  out.value = 0.0;
  out.method = CorrelationMethod::discrete_sum;
  out.n_modes_used = state.modes().size();
  return out;
}

CorrelationResult squared_field_correlation_discrete(double x1, double x2,
                                                     const PerturbativeState& state) {
  require_n_modes(state, 2);
  const ModeSet& modes = state.modes();
  const PhysicalParams& p = state.params();
  const double lambda = state.model().scale;

  const Eigen::ArrayXd gamma = coupling_factors(modes, state.model());
  const Eigen::ArrayXd u = mode_functions(x1, Cavity::left, modes, p);
  const Eigen::ArrayXd v = mode_functions(x2, Cavity::right, modes, p);

  // h_c(n) = sum_{p+q=n} C^c_{pq} u_p u_q, n = 2..2N
  const Eigen::ArrayXd h1 = lambda * self_convolution(gamma * u);
  const Eigen::ArrayXd h2 = -lambda * self_convolution(gamma * v);
  const Eigen::ArrayXd h1_abs = std::abs(lambda) * self_convolution((gamma * u).abs());
  const Eigen::ArrayXd h2_abs = std::abs(lambda) * self_convolution((gamma * v).abs());

  const Eigen::Index len = h1.size();
  const double step = p.c * modes.spacing();
  const Eigen::ArrayXd n_total = Eigen::ArrayXd::LinSpaced(len, 2.0, static_cast<double>(len + 1));
  const Eigen::ArrayXd denom = p.omega0 + step * n_total;  // w0 + w_p + w_q

  // First term: product of single-cavity sums.
  const double first = (h1 / denom).sum() * (h2 / denom).sum();

  // Second term: sum_{n,n'} h1(n) h2(n') (1/D_n + 1/D_n') / (step (n + n')).
  // recip[m] = 1/(m + 4) covers n + n' = 4..4N.
  const Eigen::ArrayXd recip =
      Eigen::ArrayXd::LinSpaced(2 * len - 1, 4.0, static_cast<double>(2 * len + 2)).inverse();
  const Eigen::VectorXd h2_vec = h2.matrix();
  const Eigen::VectorXd h2_over_d = (h2 / denom).matrix();
  double second = 0.0;
  for (Eigen::Index i = 0; i < len; ++i) {
    const auto r = recip.segment(i, len).matrix();
    second += h1[i] * (h2_vec.dot(r) / denom[i] + h2_over_d.dot(r));
  }
  second /= step;

  const double scale = 8.0 / (p.hbar * p.hbar);
  const double bound_first = (h1_abs / denom).sum() * (h2_abs / denom).sum();
  const double bound_second =
      (h1_abs * (1.0 / denom + 1.0 / denom[0]) * recip.head(len)).sum() * h2_abs.sum() / step;

  CorrelationResult out;
  out.value = scale * (first + second);
  out.method = CorrelationMethod::discrete_sum;
  out.est_abs_err = scale * kEps * 4.0 * static_cast<double>(len) * (bound_first + bound_second);
  out.n_modes_used = modes.size();
  return out;
}

double squared_field_correlation_direct(double x1, double x2, const PerturbativeState& state) {
  require_n_modes(state, 2);
  const ModeSet& modes = state.modes();
  const PhysicalParams& p = state.params();
  const int n = modes.size();
  const Eigen::MatrixXd c1 = coupling_matrix(Cavity::left, modes, state.model());
  const Eigen::MatrixXd c2 = coupling_matrix(Cavity::right, modes, state.model());
  const Eigen::ArrayXd u = mode_functions(x1, Cavity::left, modes, p);
  const Eigen::ArrayXd v = mode_functions(x2, Cavity::right, modes, p);
  const Eigen::ArrayXd& w = modes.omegas();

  double total = 0.0;
  for (int pi = 0; pi < n; ++pi) {
    for (int qi = 0; qi < n; ++qi) {
      const double left = c1(pi, qi) * u[pi] * u[qi];
      const double d_left = p.omega0 + w[pi] + w[qi];
      for (int ri = 0; ri < n; ++ri) {
        for (int si = 0; si < n; ++si) {
          const double right = c2(ri, si) * v[ri] * v[si];
          const double d_right = p.omega0 + w[ri] + w[si];
          const double energy = w[pi] + w[qi] + w[ri] + w[si];
          total += left * right *
                   (1.0 / (d_left * d_right) + (1.0 / d_left + 1.0 / d_right) / energy);
        }
      }
    }
  }
  return 8.0 * total / (p.hbar * p.hbar);
}

double vacuum_phi_squared(double x, Cavity cavity, const ModeSet& modes,
                          const PhysicalParams& params) {
  return mode_functions(x, cavity, modes, params).square().sum();
}

double phi_squared_shift(double x, Cavity cavity, const PerturbativeState& state) {
  const ModeSet& modes = state.modes();
  const PhysicalParams& p = state.params();
  const Eigen::ArrayXd u = mode_functions(x, cavity, modes, p);
  const Eigen::ArrayXd& gamma = state.coupling_factors_unit();
  const Eigen::ArrayXd& w = modes.omegas();
  const double coef = cavity_sign(cavity) * state.model().scale / p.hbar;

  // A_{jk} = coef gamma_j gamma_k / (w0 + w_j + w_k). Au and s = lambda sign A^T gamma
  // in one O(N^2) pass.
  const Eigen::ArrayXd gu = gamma * u;
  Eigen::ArrayXd Au(w.size()), s(w.size());
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    const Eigen::ArrayXd inv = (p.omega0 + w + w[j]).inverse();
    Au[j] = coef * gamma[j] * (gu * inv).sum();
    s[j] = cavity_sign(cavity) * state.model().scale * coef * gamma[j] * (gamma.square() * inv).sum();
  }
  // <g1|N[phi^2]|g1> = 8 |A u|^2
  const double from_first = 8.0 * Au.square().sum();

  // 2 <0|N[phi^2]|g2 pair> = 4 u^T G u with G_{pq} = 4 gamma_p s_q / (hbar (w_p + w_q)).
  const Eigen::ArrayXd su = s * u;
  double uGu = 0.0;
  for (Eigen::Index q = 0; q < w.size(); ++q) {
    uGu += su[q] * (gu / (w + w[q])).sum();
  }
  uGu *= 4.0 / p.hbar;
  return from_first + 4.0 * uGu;
}

double dispersion_energy(double alpha, double x, Cavity cavity, const PerturbativeState& state,
                         DispersionPart part) {
  if (!(alpha >= 0.0)) throw DomainError("dispersion_energy: polarizability must be >= 0");
  double phi2 = phi_squared_shift(x, cavity, state);
  if (part == DispersionPart::total) {
    phi2 += vacuum_phi_squared(x, cavity, state.modes(), state.params());
  }
  return -0.5 * alpha * phi2;
}

DiscreteConvergence converge_squared_field_correlation(double x1, double x2,
                                                       const PhysicalParams& params,
                                                       double uv_cutoff, double lambda,
                                                       double rel_tol, int n_start, int n_max) {
  if (!(uv_cutoff > 0.0)) {
    throw DomainError("convergence in N needs a positive uv cutoff");
  }
  if (n_start < 2 || n_max < n_start) throw DomainError("need 2 <= n_start <= n_max");
  DiscreteConvergence out;
  double previous = 0.0;
  bool have_previous = false;
  for (int n = n_start; n <= n_max; n *= 2) {
    PerturbativeState state(ModeSet(params, n, uv_cutoff), CouplingModel{params, lambda});
    CorrelationResult r = squared_field_correlation_discrete(x1, x2, state);
    if (have_previous) {
      out.last_increment = std::abs(r.value - previous);
      out.result = r;
      out.result.est_abs_err = out.last_increment + r.est_abs_err;
      if (out.last_increment <= rel_tol * std::abs(r.value)) return out;
      ++out.doublings;
    }
    previous = r.value;
    have_previous = true;
  }
  throw ConvergenceError("discrete correlation not converged at N = " + std::to_string(n_max),
                         previous, out.last_increment);
}

}  // namespace mirrorcorr
