#pragma once

#include <string_view>

namespace mirrorcorr {

enum class CorrelationMethod { discrete_sum, continuum_quadrature, exact_diag };

constexpr std::string_view to_string(CorrelationMethod m) {
  switch (m) {
    case CorrelationMethod::discrete_sum: return "discrete_sum";
    case CorrelationMethod::continuum_quadrature: return "continuum_quadrature";
    case CorrelationMethod::exact_diag: return "exact_diag";
  }
  return "unknown";
}

struct CorrelationResult {
  double value = 0.0;
  CorrelationMethod method = CorrelationMethod::discrete_sum;
  double est_abs_err = 0.0;
  int n_modes_used = 0;           // discrete_sum / exact_diag
  int quadrature_partitions = 0;  // continuum_quadrature
};

}  // namespace mirrorcorr
