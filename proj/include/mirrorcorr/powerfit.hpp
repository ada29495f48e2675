#pragma once

#include <optional>
#include <ostream>

#include "mirrorcorr/continuum.hpp"
#include "mirrorcorr/sweep.hpp"

namespace mirrorcorr {

struct FitRequest {
  double d_min = 0.0;
  double d_max = 0.0;
  std::optional<double> fixed_exponent;
  double residual_threshold = 1e-2;
};

struct FitReport {
  continuum::PowerLawFit fit;
  int rows_used = 0;
  bool passed = false;  // residual below threshold
};

// Fits |value| = a x^b over the ok rows with x in [d_min, d_max].
// Throws DomainError with fewer than 4 usable rows.
FitReport run_fit(const CsvData& data, const FitRequest& req);

void print_fit_report(std::ostream& out, const FitReport& report, const FitRequest& req);

}  // namespace mirrorcorr
