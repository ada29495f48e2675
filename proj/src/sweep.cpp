#include "mirrorcorr/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <thread>

#include "mirrorcorr/errors.hpp"
#include "mirrorcorr/perturb.hpp"

namespace mirrorcorr {

std::string to_string(SweepQuantity q) {
  switch (q) {
    case SweepQuantity::C_discrete: return "C_discrete";
    case SweepQuantity::C_continuum: return "C_continuum";
    case SweepQuantity::I_of_d: return "I_of_d";
    case SweepQuantity::phi2_shift: return "phi2_shift";
  }
  return "unknown";
}

SweepQuantity parse_sweep_quantity(const std::string& name) {
  for (auto q : {SweepQuantity::C_discrete, SweepQuantity::C_continuum, SweepQuantity::I_of_d,
                 SweepQuantity::phi2_shift}) {
    if (to_string(q) == name) return q;
  }
  throw ConfigError("unknown sweep quantity '" + name + "'");
}

void SweepGrid::validate() const {
  if (!std::isfinite(min) || !std::isfinite(max) || !(min < max)) {
    throw ConfigError("sweep grid needs finite min < max");
  }
  if (n_points < 2) throw ConfigError("sweep grid needs n_points >= 2");
  if (spacing == GridSpacing::log && !(min > 0.0)) {
    throw ConfigError("log-spaced sweep grid needs min > 0");
  }
}

std::vector<double> SweepGrid::points() const {
  validate();
  if (spacing == GridSpacing::log) return continuum::log_spaced(min, max, n_points);
  std::vector<double> out(static_cast<std::size_t>(n_points));
  const double step = (max - min) / (n_points - 1);
  for (int i = 0; i < n_points; ++i) out[static_cast<std::size_t>(i)] = min + step * i;
  out.back() = max;
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

SweepRow evaluate_point(double x, const SweepRequest& req, const PerturbativeState* state) {
  SweepRow row;
  row.x = x;
  const PhysicalParams params = req.config.params();
  try {
    switch (req.quantity) {
      case SweepQuantity::I_of_d: {
        const auto r = continuum::reduced_integral_I(x, req.quadrature);
        row.value = r.value;
        row.abs_err = r.est_abs_err;
        break;
      }
      case SweepQuantity::C_continuum: {
        const auto r = continuum::correlation_C_of_d(x, params, req.quadrature);
        row.value = r.value;
        row.abs_err = r.est_abs_err;
        break;
      }
      case SweepQuantity::C_discrete: {
        const double x1 = position_at_distance(x, Cavity::left, params);
        const double x2 = position_at_distance(x, Cavity::right, params);
        const auto r = squared_field_correlation_discrete(x1, x2, *state);
        row.value = r.value;
        row.abs_err = r.est_abs_err;
        break;
      }
      case SweepQuantity::phi2_shift: {
        const double x1 = position_at_distance(x, Cavity::left, params);
        row.value = phi_squared_shift(x1, Cavity::left, *state);
        row.abs_err = 0.0;
        break;
      }
    }
    if (!std::isfinite(*row.value)) {
      row.value.reset();
      row.status = "failed";
    }
  } catch (const ConvergenceError& e) {
    row.status = "not_converged";
    if (std::isfinite(e.best_estimate())) {
      row.value = e.best_estimate();
      row.abs_err = std::isfinite(e.est_abs_err()) ? e.est_abs_err() : 0.0;
    }
  } catch (const DomainError&) {
    row.status = "domain_error";
    row.value.reset();
  }
  return row;
}

}  // namespace

std::vector<SweepRow> evaluate_sweep(const SweepRequest& req) {
  const std::vector<double> xs = req.grid.points();
  req.quadrature.validate();
  std::unique_ptr<PerturbativeState> state;
  if (req.quantity == SweepQuantity::C_discrete || req.quantity == SweepQuantity::phi2_shift) {
    state = std::make_unique<PerturbativeState>(req.config.modes(), req.config.coupling_model());
  }

  std::vector<SweepRow> rows(xs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < xs.size(); i = next++) {
      rows[i] = evaluate_point(xs[i], req, state.get());
    }
  };
  const int jobs = std::max(1, std::min<int>(req.jobs, static_cast<int>(xs.size())));
  std::vector<std::jthread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  return rows;
}

void write_sweep_csv(std::ostream& out, const SweepRequest& req, const std::vector<SweepRow>& rows) {
  const auto& q = req.quadrature;
  out << "# mirrorcorr " << kToolVersion << '\n';
  out << "# title: " << to_string(req.quantity) << " vs d\n";
  out << "# quantity: " << to_string(req.quantity) << '\n';
  out << "# grid: min=" << format_double(req.grid.min) << " max=" << format_double(req.grid.max)
      << " n_points=" << req.grid.n_points
      << " spacing=" << (req.grid.spacing == GridSpacing::log ? "log" : "linear") << '\n';
  out << "# config: " << req.config.to_json().dump() << '\n';
  out << "# quadrature: rel_tol=" << format_double(q.rel_tol) << " abs_tol=" << format_double(q.abs_tol)
      << " acceleration_order=" << q.acceleration_order << " max_partitions=" << q.max_partitions
      << '\n';
  out << "x,value,abs_err,status\n";
  for (const auto& r : rows) {
    out << format_double(r.x) << ',' << (r.value ? format_double(*r.value) : std::string{}) << ','
        << format_double(r.abs_err) << ',' << r.status << '\n';
  }
}

std::vector<SweepRow> run_sweep(const SweepRequest& req, const std::filesystem::path& out) {
  auto rows = evaluate_sweep(req);
  std::ostringstream buffer;
  write_sweep_csv(buffer, req, rows);
  std::ofstream file(out, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + out.string() + "' for writing");
  file << buffer.str();
  file.close();
  if (!file) throw IoError("failed writing '" + out.string() + "'");
  return rows;
}

std::optional<std::string> CsvData::metadata_value(const std::string& key) const {
  const std::string prefix = key + ": ";
  for (const auto& line : metadata) {
    if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
  }
  return std::nullopt;
}

namespace {

double parse_number(const std::string& field, std::size_t line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != field.size() || !std::isfinite(v)) {
    throw CsvError("line " + std::to_string(line_no) + ": bad number '" + field + "'");
  }
  return v;
}

}  // namespace

CsvData read_sweep_csv(std::istream& in) {
  CsvData data;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      data.metadata.push_back(line.size() > 1 && line[1] == ' ' ? line.substr(2) : line.substr(1));
      continue;
    }
    if (!header_seen) {
      if (line != "x,value,abs_err,status") {
        throw CsvError("line " + std::to_string(line_no) + ": expected header x,value,abs_err,status");
      }
      header_seen = true;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    if (fields.size() != 4) {
      throw CsvError("line " + std::to_string(line_no) + ": expected 4 fields");
    }
    SweepRow row;
    row.x = parse_number(fields[0], line_no);
    if (!fields[1].empty()) row.value = parse_number(fields[1], line_no);
    row.abs_err = parse_number(fields[2], line_no);
    row.status = fields[3];
    if (row.status.empty()) throw CsvError("line " + std::to_string(line_no) + ": empty status");
    if (row.status == "ok" && !row.value) {
      throw CsvError("line " + std::to_string(line_no) + ": ok row without value");
    }
    data.rows.push_back(std::move(row));
  }
  if (!header_seen) throw CsvError("missing header x,value,abs_err,status");
  return data;
}

CsvData read_sweep_csv(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open '" + path.string() + "'");
  return read_sweep_csv(file);
}

}  // namespace mirrorcorr
