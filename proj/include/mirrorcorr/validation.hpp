#pragma once

#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "mirrorcorr/model.hpp"
#include "mirrorcorr/oracle.hpp"

namespace mirrorcorr {

// Perturbative results against exact diagonalization over a ladder of
// couplings. Each residual must shrink by at least `required_ratio` per step.
struct LadderSpec {
  std::vector<double> lambdas{0.04, 0.02, 0.01};
  oracle::TruncationSpec truncation{2, 2, 5, 5, 5};
  PhysicalParams params = PhysicalParams::natural(1.0, 1.0, std::numbers::pi);
  double d1 = 0.7;  // scaled distances of the probe points from the mirror
  double d2 = 1.1;
  double required_ratio = 8.0 / 1.5;
  double eigen_tol = 1e-11;
};

struct LadderRow {
  std::string observable;
  std::vector<double> exact;
  std::vector<double> perturbative;
  std::vector<double> residuals;
  std::vector<double> ratios;  // residual[i] / residual[i+1]
  bool passed = false;
};

// Observables: lambda_sq, first_order_amplitude (max over pairs),
// phi2_shift (max over both cavities), C_phi2_phi2, and the phi-phi
// structural zero (absolute bound instead of a ratio).
std::vector<LadderRow> run_lambda_ladder(const LadderSpec& spec);

void print_ladder_table(std::ostream& out, const LadderSpec& spec, const std::vector<LadderRow>& rows);

}  // namespace mirrorcorr
