#pragma once

// Second-order Rayleigh-Schroedinger ground state of the two-cavity system
// and its discrete-mode expectation values.
//
// Amplitudes are kept in the operator expansion: the first-order state is
//   |g1> = sum_{jk} A^c_{jk} b^+ a_j^+ a_k^+ |0>,  A^c_{jk} = C^c_{kj} / (hbar (w0 + w_j + w_k)),
// summed over ordered pairs, so a doubly occupied mode never needs a
// hand-written sqrt(2). Second-order families with no mirror quanta are
//   pair    (one cavity):  G^c_{lk}    a_l^+ a_k^+ |0>,
//   quartet (one cavity):  Q^c_{jklm}  a_j^+ a_k^+ a_l^+ a_m^+ |0>,
//   cross   (both):        X_{jk,lm}   a_j^+ a_k^+ c_l^+ c_m^+ |0>.
// The two-phonon family never contributes to field expectation values and is
// not represented.

#include <Eigen/Core>

#include "mirrorcorr/correlation_result.hpp"
#include "mirrorcorr/model.hpp"

namespace mirrorcorr {

class PerturbativeState {
 public:
  PerturbativeState(ModeSet modes, CouplingModel model);

  const ModeSet& modes() const { return modes_; }
  const CouplingModel& model() const { return model_; }
  const PhysicalParams& params() const { return model_.params; }

  // A^c (N x N, symmetric, 0-based), built on request. Only the O(N)
  // rank-one factors are stored.
  Eigen::MatrixXd pair_amplitudes(Cavity cavity) const;
  double pair_amplitude(Cavity cavity, int j, int k) const;

  // <g1|g1> = 2 sum_{c,jk} (A^c_{jk})^2.
  double lambda_sq() const { return lambda_sq_; }

  // Second-order coefficients (1-based indices), computed on demand.
  double second_order_pair(Cavity cavity, int l, int k) const;
  double second_order_quartet(Cavity cavity, int j, int k, int l, int m) const;
  double second_order_cross(int j, int k, int l, int m) const;

  // Rank-one coupling factors at unit lambda.
  const Eigen::ArrayXd& coupling_factors_unit() const { return gamma_; }

  // Full G^c matrix, O(N^2) memory.
  Eigen::MatrixXd second_order_pair_matrix(Cavity cavity) const;

 private:
  ModeSet modes_;
  CouplingModel model_;
  double coupling_entry(Cavity cavity, Eigen::Index j, Eigen::Index k) const;
  double amplitude_entry(Cavity cavity, Eigen::Index j, Eigen::Index k) const;

  Eigen::ArrayXd gamma_;  // coupling factors at lambda = 1
  double lambda_sq_ = 0.0;
};

// Coefficient of the normalized Fock state |1; {1_j 1_k}> (j != k) or
// |1; {2_j}> (j == k) in the corrected ground state: 2 A_{jk} or sqrt(2) A_{jj}.
double first_order_amplitude(Cavity cavity, int j, int k, const PerturbativeState& state);

// Lambda^2, equal to the sum over cavities and unordered pairs j <= k of
// first_order_amplitude^2.
double normalization_deficit(const PerturbativeState& state);

// Connected <phi(x1) phi(x2)>: identically zero, because every component of
// the corrected state holds an even number of quanta in each cavity.
CorrelationResult phi_phi_correlation(double x1, double x2, const PerturbativeState& state);

// Connected <phi^2(x1) phi^2(x2)> at order lambda^2. O(N^2) via the
// dependence of all energy denominators on p + q alone.
CorrelationResult squared_field_correlation_discrete(double x1, double x2,
                                                     const PerturbativeState& state);

// Same quantity by the literal quadruple sum, O(N^4). Reference path.
double squared_field_correlation_direct(double x1, double x2, const PerturbativeState& state);

// <g~|phi^2(x)|g~> - <0|phi^2(x)|0> at order lambda^2.
double phi_squared_shift(double x, Cavity cavity, const PerturbativeState& state);

// Bare vacuum <0|phi^2(x)|0> over the truncated mode set (UV divergent as N grows).
double vacuum_phi_squared(double x, Cavity cavity, const ModeSet& modes,
                          const PhysicalParams& params);

enum class DispersionPart { interaction_induced, total };

// -alpha/2 <phi^2(x)>. By default only the interaction-induced shift.
double dispersion_energy(double alpha, double x, Cavity cavity, const PerturbativeState& state,
                         DispersionPart part = DispersionPart::interaction_induced);

struct DiscreteConvergence {
  CorrelationResult result;  // est_abs_err = |last increment|
  double last_increment = 0.0;
  int doublings = 0;
};

// Doubles N from n_start (uv regulator required) until the relative change
// drops below rel_tol. Throws ConvergenceError at n_max.
DiscreteConvergence converge_squared_field_correlation(double x1, double x2,
                                                       const PhysicalParams& params,
                                                       double uv_cutoff, double lambda,
                                                       double rel_tol, int n_start, int n_max);

}  // namespace mirrorcorr
