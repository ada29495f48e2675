#pragma once

#include <Eigen/Core>
#include <optional>

namespace mirrorcorr {

enum class UnitSystem { natural, si };

enum class Cavity { left = 1, right = 2 };

// Coordinate used inside the right cavity. `reflected` measures from the far
// wall (x~ = 2 L0 - x), the mirror image of the left cavity, which is the
// frame in which the (-1)^(j+k) coupling signs belong. `shifted` measures from
// the movable wall (x~ = x - L0); with the same couplings it describes the
// point 3 L0 - x of the reflected frame.
enum class RightCavityFrame { reflected, shifted };

struct PhysicalParams {
  double m = 1.0;       // mirror mass
  double omega0 = 1.0;  // mirror angular frequency
  double L0 = 1.0;      // equilibrium half-length
  UnitSystem units = UnitSystem::natural;
  double hbar = 1.0;
  double c = 1.0;

  static PhysicalParams natural(double m, double omega0, double L0);
  static PhysicalParams si(double m, double omega0, double L0);

  double k0() const { return omega0 / c; }

  // Throws DomainError unless m, omega0, L0 are positive.
  void validate() const;
};

inline constexpr double kHbarSi = 1.054571817e-34;  // J s
inline constexpr double kLightSpeedSi = 299792458.0;  // m / s

// Discrete cavity modes k_j = j * spacing, j = 1..n, with optional smooth
// UV regulator weight exp(-omega_j / uv_cutoff).
class ModeSet {
 public:
  ModeSet(const PhysicalParams& params, int n_modes, std::optional<double> uv_cutoff = {},
          std::optional<double> spacing = {},
          RightCavityFrame frame = RightCavityFrame::reflected);

  int size() const { return static_cast<int>(k_.size()); }
  double spacing() const { return spacing_; }
  std::optional<double> uv_cutoff() const { return uv_cutoff_; }
  RightCavityFrame frame() const { return frame_; }

  // 1-based mode accessors; throw DomainError when out of range.
  double k(int j) const;
  double omega(int j) const;
  double weight(int j) const;

  // 0-based arrays over all modes.
  const Eigen::ArrayXd& wavenumbers() const { return k_; }
  const Eigen::ArrayXd& omegas() const { return omega_; }
  const Eigen::ArrayXd& weights() const { return weight_; }

  void check_index(int j) const;

 private:
  double spacing_;
  std::optional<double> uv_cutoff_;
  RightCavityFrame frame_;
  Eigen::ArrayXd k_;
  Eigen::ArrayXd omega_;
  Eigen::ArrayXd weight_;
};

struct CouplingModel {
  PhysicalParams params;
  double scale = 1.0;  // lambda: numerical probe of the perturbative regime
};

// C^cavity_{kj} = lambda (-1)^(j+k) (hbar/2)^(3/2) / (L0 sqrt m) sqrt(w_j w_k / w0) w(j) w(k),
// negated for the right cavity.
double coupling(Cavity cavity, int j, int k, const ModeSet& modes, const CouplingModel& model);

// Dense N x N table of coupling(cavity, j, k).
Eigen::MatrixXd coupling_matrix(Cavity cavity, const ModeSet& modes, const CouplingModel& model);

// The coupling is rank one: C^cavity_{jk} = sign(cavity) * lambda * gamma_j * gamma_k with
// gamma_j = (-1)^j (hbar/2)^(3/4) (L0 sqrt m)^(-1/2) sqrt(w_j) w0^(-1/4) weight(j).
Eigen::ArrayXd coupling_factors(const ModeSet& modes, const CouplingModel& model);
inline double cavity_sign(Cavity cavity) { return cavity == Cavity::left ? 1.0 : -1.0; }

// Coordinate inside the cavity at which modes vanish on both walls.
// Throws DomainError when x is outside the open cavity interval.
double cavity_coordinate(double x, Cavity cavity, const PhysicalParams& params,
                         RightCavityFrame frame = RightCavityFrame::reflected);

// Field mode function sqrt(hbar c^2 / L0) sin(k_j x~) / sqrt(w_j).
double mode_function(double x, int j, Cavity cavity, const ModeSet& modes,
                     const PhysicalParams& params);

// All N mode functions at x.
Eigen::ArrayXd mode_functions(double x, Cavity cavity, const ModeSet& modes,
                              const PhysicalParams& params);

// Position at dimensionless distance d = k0 |x - L0| from the mirror.
double position_at_distance(double d, Cavity cavity, const PhysicalParams& params);

}  // namespace mirrorcorr
