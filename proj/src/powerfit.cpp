#include "mirrorcorr/powerfit.hpp"

#include "mirrorcorr/errors.hpp"

namespace mirrorcorr {

FitReport run_fit(const CsvData& data, const FitRequest& req) {
  if (!(req.d_min <= req.d_max)) throw DomainError("fit range needs d_min <= d_max");
  if (!(req.residual_threshold > 0.0)) throw DomainError("fit threshold must be positive");
  std::vector<double> x, y;
  for (const auto& row : data.rows) {
    if (row.status != "ok" || !row.value) continue;
    if (row.x < req.d_min || row.x > req.d_max) continue;
    if (!(row.x > 0.0) || *row.value == 0.0) continue;
    x.push_back(row.x);
    y.push_back(*row.value);
  }
  if (x.size() < 4) {
    throw DomainError("fit needs at least 4 rows in [" + format_double(req.d_min) + ", " +
                      format_double(req.d_max) + "], found " + std::to_string(x.size()));
  }
  FitReport report;
  report.fit = continuum::fit_power_law(x, y, req.fixed_exponent);
  report.rows_used = static_cast<int>(x.size());
  report.passed = report.fit.residual < req.residual_threshold;
  return report;
}

void print_fit_report(std::ostream& out, const FitReport& report, const FitRequest& req) {
  out << "coefficient " << format_double(report.fit.coefficient) << '\n';
  out << "exponent " << format_double(report.fit.exponent)
      << (req.fixed_exponent ? " (fixed)" : "") << '\n';
  out << "residual " << format_double(report.fit.residual) << '\n';
  out << "rows " << report.rows_used << '\n';
  out << "threshold " << format_double(req.residual_threshold) << '\n';
  out << (report.passed ? "PASS" : "FAIL") << '\n';
}

}  // namespace mirrorcorr
