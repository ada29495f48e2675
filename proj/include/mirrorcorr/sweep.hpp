#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mirrorcorr/config.hpp"
#include "mirrorcorr/continuum.hpp"

namespace mirrorcorr {

inline constexpr const char* kToolVersion = "0.1.0";

enum class SweepQuantity { C_discrete, C_continuum, I_of_d, phi2_shift };
enum class GridSpacing { linear, log };

std::string to_string(SweepQuantity q);
SweepQuantity parse_sweep_quantity(const std::string& name);

struct SweepGrid {
  double min = 0.0;
  double max = 1.0;
  int n_points = 2;
  GridSpacing spacing = GridSpacing::linear;

  void validate() const;
  std::vector<double> points() const;
};

// x is the scaled distance d = k0 * (distance from the mirror). For
// C_discrete and C_continuum both points sit at d on opposite sides.
struct SweepRequest {
  SweepQuantity quantity = SweepQuantity::I_of_d;
  SweepGrid grid;
  RunConfig config;
  continuum::QuadratureSpec quadrature;
  int jobs = 1;
};

struct SweepRow {
  double x = 0.0;
  std::optional<double> value;  // absent only when no estimate exists
  double abs_err = 0.0;
  std::string status = "ok";    // ok | not_converged | domain_error | failed
};

// One row per grid point, in grid order. Per-point failures are recorded in
// the row status and never abort the sweep.
std::vector<SweepRow> evaluate_sweep(const SweepRequest& req);

// `#` metadata lines, header `x,value,abs_err,status`, then one row per point.
void write_sweep_csv(std::ostream& out, const SweepRequest& req, const std::vector<SweepRow>& rows);

// Evaluates and writes to `out`. Throws IoError when the file cannot be written.
std::vector<SweepRow> run_sweep(const SweepRequest& req, const std::filesystem::path& out);

struct CsvData {
  std::vector<std::string> metadata;  // comment lines without the leading "# "
  std::vector<SweepRow> rows;

  std::optional<std::string> metadata_value(const std::string& key) const;
};

// Throws IoError if unreadable, CsvError if malformed.
CsvData read_sweep_csv(std::istream& in);
CsvData read_sweep_csv(const std::filesystem::path& path);

std::string format_double(double v);

}  // namespace mirrorcorr
