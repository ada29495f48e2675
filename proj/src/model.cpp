#include "mirrorcorr/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mirrorcorr/errors.hpp"

namespace mirrorcorr {

PhysicalParams PhysicalParams::natural(double m, double omega0, double L0) {
  PhysicalParams p{m, omega0, L0, UnitSystem::natural, 1.0, 1.0};
  p.validate();
  return p;
}

PhysicalParams PhysicalParams::si(double m, double omega0, double L0) {
  PhysicalParams p{m, omega0, L0, UnitSystem::si, kHbarSi, kLightSpeedSi};
  p.validate();
  return p;
}

void PhysicalParams::validate() const {
  if (!(m > 0.0) || !(omega0 > 0.0) || !(L0 > 0.0) || !std::isfinite(m) ||
      !std::isfinite(omega0) || !std::isfinite(L0)) {
    throw DomainError("PhysicalParams: m, omega0 and L0 must be positive and finite");
  }
  if (units == UnitSystem::natural && (hbar != 1.0 || c != 1.0)) {
    throw DomainError("PhysicalParams: natural units require hbar = c = 1");
  }
}

ModeSet::ModeSet(const PhysicalParams& params, int n_modes, std::optional<double> uv_cutoff,
                 std::optional<double> spacing, RightCavityFrame frame)
    : spacing_(spacing.value_or(std::numbers::pi / params.L0)), uv_cutoff_(uv_cutoff), frame_(frame) {
  params.validate();
  if (n_modes < 1) throw DomainError("ModeSet: n_modes must be at least 1");
  if (!(spacing_ > 0.0)) throw DomainError("ModeSet: spacing must be positive");
  if (uv_cutoff_ && !(*uv_cutoff_ > 0.0)) throw DomainError("ModeSet: uv_cutoff must be positive");
  k_ = Eigen::ArrayXd::LinSpaced(n_modes, 1.0, n_modes) * spacing_;
  omega_ = params.c * k_;
  weight_ = uv_cutoff_ ? Eigen::ArrayXd((-omega_ / *uv_cutoff_).exp())
                       : Eigen::ArrayXd::Ones(n_modes);
}

void ModeSet::check_index(int j) const {
  if (j < 1 || j > size()) {
    throw DomainError("mode index " + std::to_string(j) + " outside 1.." + std::to_string(size()));
  }
}

double ModeSet::k(int j) const {
  check_index(j);
  return k_[j - 1];
}

double ModeSet::omega(int j) const {
  check_index(j);
  return omega_[j - 1];
}

double ModeSet::weight(int j) const {
  check_index(j);
  return weight_[j - 1];
}

double coupling(Cavity cavity, int j, int k, const ModeSet& modes, const CouplingModel& model) {
  modes.check_index(j);
  modes.check_index(k);
  const PhysicalParams& p = model.params;
  const double sign = ((j + k) % 2 == 0) ? 1.0 : -1.0;
  const double magnitude = std::pow(p.hbar / 2.0, 1.5) / (p.L0 * std::sqrt(p.m)) *
                           std::sqrt(modes.omega(j) * modes.omega(k) / p.omega0) *
                           (modes.weight(j) * modes.weight(k));
  return model.scale * (cavity_sign(cavity) * sign * magnitude);
}

Eigen::MatrixXd coupling_matrix(Cavity cavity, const ModeSet& modes, const CouplingModel& model) {
  const int n = modes.size();
  Eigen::MatrixXd out(n, n);
  for (int k = 1; k <= n; ++k) {
    for (int j = 1; j <= n; ++j) out(j - 1, k - 1) = coupling(cavity, j, k, modes, model);
  }
  return out;
}

Eigen::ArrayXd coupling_factors(const ModeSet& modes, const CouplingModel& model) {
  const PhysicalParams& p = model.params;
  const double base = std::pow(p.hbar / 2.0, 0.75) / std::sqrt(p.L0 * std::sqrt(p.m)) /
                      std::pow(p.omega0, 0.25);
  Eigen::ArrayXd gamma = base * modes.omegas().sqrt() * modes.weights();
  for (Eigen::Index i = 0; i < gamma.size(); i += 2) gamma[i] = -gamma[i];  // j = i + 1 odd
  return gamma;
}

double cavity_coordinate(double x, Cavity cavity, const PhysicalParams& params,
                         RightCavityFrame frame) {
  const double L0 = params.L0;
  if (cavity == Cavity::left) {
    if (!(x > 0.0 && x < L0)) {
      throw DomainError("position " + std::to_string(x) + " outside the left cavity (0, L0)");
    }
    return x;
  }
  if (!(x > L0 && x < 2.0 * L0)) {
    throw DomainError("position " + std::to_string(x) + " outside the right cavity (L0, 2 L0)");
  }
  return frame == RightCavityFrame::reflected ? 2.0 * L0 - x : x - L0;
}

double mode_function(double x, int j, Cavity cavity, const ModeSet& modes,
                     const PhysicalParams& params) {
  const double xt = cavity_coordinate(x, cavity, params, modes.frame());
  return std::sqrt(params.hbar * params.c * params.c / params.L0) * std::sin(modes.k(j) * xt) /
         std::sqrt(modes.omega(j));
}

Eigen::ArrayXd mode_functions(double x, Cavity cavity, const ModeSet& modes,
                              const PhysicalParams& params) {
  const double xt = cavity_coordinate(x, cavity, params, modes.frame());
  return std::sqrt(params.hbar * params.c * params.c / params.L0) *
         (modes.wavenumbers() * xt).sin() / modes.omegas().sqrt();
}

double position_at_distance(double d, Cavity cavity, const PhysicalParams& params) {
  if (!(d > 0.0)) throw DomainError("distance from the mirror must be positive");
  const double y = d / params.k0();
  const double x = cavity == Cavity::left ? params.L0 - y : params.L0 + y;
  cavity_coordinate(x, cavity, params);  // range check
  return x;
}

}  // namespace mirrorcorr
