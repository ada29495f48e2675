// mirrorcorr: command-line front end.
//
// Exit codes: 0 success, 1 usage/config error, 2 numerical convergence
// failure (or failed fit / validation), 3 I/O error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "mirrorcorr/config.hpp"
#include "mirrorcorr/continuum.hpp"
#include "mirrorcorr/errors.hpp"
#include "mirrorcorr/oracle.hpp"
#include "mirrorcorr/perturb.hpp"
#include "mirrorcorr/powerfit.hpp"
#include "mirrorcorr/specfun.hpp"
#include "mirrorcorr/svg_plot.hpp"
#include "mirrorcorr/sweep.hpp"
#include "mirrorcorr/validation.hpp"

namespace mc = mirrorcorr;

namespace {

enum Exit { kOk = 0, kUsage = 1, kNumeric = 2, kIo = 3 };

struct CommonOptions {
  std::string config_path;
  std::optional<int> n_modes;
  std::optional<double> uv_cutoff;
  std::optional<double> lambda;
  std::optional<double> tol_rel;
  std::optional<double> tol_abs;
};

void add_model_options(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "JSON run configuration");
  cmd->add_option("--n-modes", o.n_modes, "override n_modes")->check(CLI::PositiveNumber);
  cmd->add_option("--uv-cutoff", o.uv_cutoff, "override uv_cutoff")->check(CLI::PositiveNumber);
  cmd->add_option("--lambda", o.lambda, "override lambda");
  cmd->add_option("--tol-rel", o.tol_rel, "quadrature relative tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--tol-abs", o.tol_abs, "quadrature absolute tolerance")->check(CLI::PositiveNumber);
}

mc::RunConfig resolve_config(const CommonOptions& o, bool required) {
  mc::RunConfig cfg;
  if (!o.config_path.empty()) {
    cfg = mc::load_config(o.config_path);
  } else if (required) {
    throw mc::ConfigError("this command needs --config");
  }
  if (o.n_modes) cfg.n_modes = *o.n_modes;
  if (o.uv_cutoff) cfg.uv_cutoff = *o.uv_cutoff;
  if (o.lambda) cfg.lambda = *o.lambda;
  // Re-validate after overrides.
  return mc::parse_config(cfg.to_json());
}

mc::continuum::QuadratureSpec resolve_quadrature(const CommonOptions& o) {
  mc::continuum::QuadratureSpec spec;
  if (o.tol_rel) spec.rel_tol = *o.tol_rel;
  if (o.tol_abs) spec.abs_tol = *o.tol_abs;
  spec.validate();
  return spec;
}

std::string g17(double v) { return mc::format_double(v); }

int run_specfun(const std::string& fn, double x) {
  double v = 0.0;
  if (fn == "Si") v = mc::specfun::sin_integral(x);
  else if (fn == "Ci") v = mc::specfun::cos_integral(x);
  else if (fn == "f") v = mc::specfun::aux_f(x);
  else if (fn == "g") v = mc::specfun::aux_g(x);
  else throw mc::ConfigError("unknown function '" + fn + "'");
  std::printf("%.15g\n", v);
  return kOk;
}

struct CorrelateOptions {
  std::string method = "continuum";
  std::optional<double> d, d1, d2;
  int q_max = 5;
  std::string dump_matrix;
};

int run_correlate(const CommonOptions& common, const CorrelateOptions& o) {
  double d1 = 0.0, d2 = 0.0;
  if (o.d && !o.d1 && !o.d2) {
    d1 = d2 = *o.d;
  } else if (!o.d && o.d1 && o.d2) {
    d1 = *o.d1;
    d2 = *o.d2;
  } else {
    throw mc::ConfigError("give either --d or both --d1 and --d2");
  }

  mc::CorrelationResult r;
  if (o.method == "continuum") {
    const auto cfg = resolve_config(common, false);
    r = mc::continuum::correlation_C_general({d1, d2}, cfg.params(), resolve_quadrature(common));
  } else if (o.method == "discrete") {
    const auto cfg = resolve_config(common, true);
    const auto params = cfg.params();
    const mc::PerturbativeState state(cfg.modes(), cfg.coupling_model());
    r = mc::squared_field_correlation_discrete(mc::position_at_distance(d1, mc::Cavity::left, params),
                                               mc::position_at_distance(d2, mc::Cavity::right, params),
                                               state);
  } else if (o.method == "oracle") {
    const auto cfg = resolve_config(common, true);
    const auto params = cfg.params();
    mc::oracle::TruncationSpec trunc{cfg.n_modes, cfg.n_modes, o.q_max, o.q_max, o.q_max};
    const mc::oracle::FockBasis basis(trunc);
    const auto modes = cfg.modes();
    std::cerr << "basis dimension " << basis.dimension() << '\n';
    const auto H = mc::oracle::build_hamiltonian(basis, modes, cfg.coupling_model());
    if (!o.dump_matrix.empty()) {
      std::ofstream out(o.dump_matrix, std::ios::binary | std::ios::trunc);
      if (!out) throw mc::IoError("cannot open '" + o.dump_matrix + "' for writing");
      mc::oracle::write_matrix_coordinates(out, H);
      if (!out) throw mc::IoError("failed writing '" + o.dump_matrix + "'");
    }
    const auto gs = mc::oracle::ground_state(H, 1e-11);
    r = mc::oracle::measure_correlation(gs.vector,
                                        mc::position_at_distance(d1, mc::Cavity::left, params),
                                        mc::position_at_distance(d2, mc::Cavity::right, params),
                                        basis, modes, params);
  } else {
    throw mc::ConfigError("unknown method '" + o.method + "'");
  }
  std::cout << "value " << g17(r.value) << '\n'
            << "abs_err " << g17(r.est_abs_err) << '\n'
            << "method " << mc::to_string(r.method) << '\n';
  if (r.n_modes_used > 0) std::cout << "n_modes " << r.n_modes_used << '\n';
  if (r.quadrature_partitions > 0) std::cout << "partitions " << r.quadrature_partitions << '\n';
  return kOk;
}

struct SweepOptions {
  std::string quantity = "I_of_d";
  double min = 0.0, max = 0.0;
  int n = 2;
  std::string spacing = "linear";
  std::string out;
  int jobs = 1;
};

int run_sweep_cmd(const CommonOptions& common, const SweepOptions& o) {
  mc::SweepRequest req;
  req.quantity = mc::parse_sweep_quantity(o.quantity);
  const bool needs_modes =
      req.quantity == mc::SweepQuantity::C_discrete || req.quantity == mc::SweepQuantity::phi2_shift;
  req.config = resolve_config(common, needs_modes);
  req.quadrature = resolve_quadrature(common);
  req.grid = {o.min, o.max, o.n, o.spacing == "log" ? mc::GridSpacing::log : mc::GridSpacing::linear};
  req.grid.validate();
  req.jobs = o.jobs;
  const auto rows = mc::run_sweep(req, o.out);
  int failed = 0;
  for (const auto& r : rows) failed += r.status != "ok";
  std::cerr << rows.size() << " points written to " << o.out;
  if (failed) std::cerr << " (" << failed << " not ok)";
  std::cerr << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-cavity squared-field correlations across a fluctuating mirror"};
  app.require_subcommand(1);
  CommonOptions common;

  std::string fn;
  double x = 0.0;
  auto* specfun = app.add_subcommand("specfun", "Si, Ci and auxiliary functions f, g");
  specfun->add_option("--fn", fn, "Si | Ci | f | g")->required()->check(CLI::IsMember({"Si", "Ci", "f", "g"}));
  specfun->add_option("--x", x, "argument")->required();

  CorrelateOptions corr;
  auto* correlate = app.add_subcommand("correlate", "connected <phi^2 phi^2> across the mirror");
  correlate->add_option("--method", corr.method, "discrete | continuum | oracle")
      ->check(CLI::IsMember({"discrete", "continuum", "oracle"}));
  correlate->add_option("--d", corr.d, "scaled distance of both points");
  correlate->add_option("--d1", corr.d1, "scaled distance, left cavity");
  correlate->add_option("--d2", corr.d2, "scaled distance, right cavity");
  correlate->add_option("--q-max", corr.q_max, "oracle total-quanta cap")->check(CLI::PositiveNumber);
  correlate->add_option("--dump-matrix", corr.dump_matrix, "oracle: write H as row col value");
  add_model_options(correlate, common);

  SweepOptions sw;
  auto* sweep = app.add_subcommand("sweep", "evaluate a quantity over a grid of d and write CSV");
  sweep->add_option("--quantity", sw.quantity, "C_discrete | C_continuum | I_of_d | phi2_shift")
      ->check(CLI::IsMember({"C_discrete", "C_continuum", "I_of_d", "phi2_shift"}));
  sweep->add_option("--min", sw.min, "grid start")->required();
  sweep->add_option("--max", sw.max, "grid end")->required();
  sweep->add_option("--n", sw.n, "number of points")->required();
  sweep->add_option("--spacing", sw.spacing, "linear | log")->check(CLI::IsMember({"linear", "log"}));
  sweep->add_option("--out", sw.out, "CSV output path")->required();
  sweep->add_option("--jobs", sw.jobs, "worker threads")->check(CLI::PositiveNumber);
  add_model_options(sweep, common);

  std::string fit_in;
  mc::FitRequest fit_req;
  auto* fit = app.add_subcommand("fit", "power-law fit |value| = a d^b of a sweep CSV");
  fit->add_option("--in", fit_in, "sweep CSV")->required();
  fit->add_option("--d-min", fit_req.d_min, "lower end of the fit range")->required();
  fit->add_option("--d-max", fit_req.d_max, "upper end of the fit range")->required();
  fit->add_option("--fixed-exponent", fit_req.fixed_exponent, "fit only the coefficient");
  fit->add_option("--threshold", fit_req.residual_threshold, "max RMS log residual")
      ->check(CLI::PositiveNumber);

  std::string plot_in, plot_out, plot_axes = "linear";
  auto* plot = app.add_subcommand("plot", "render a sweep CSV as SVG");
  plot->add_option("--in", plot_in, "sweep CSV")->required();
  plot->add_option("--out", plot_out, "SVG output path")->required();
  plot->add_option("--axes", plot_axes, "linear | loglog")->check(CLI::IsMember({"linear", "loglog"}));

  mc::LadderSpec ladder;
  auto* validate = app.add_subcommand("oracle-validate", "perturbation theory vs exact diagonalization");
  validate->add_option("--d1", ladder.d1, "scaled distance, left probe")->check(CLI::PositiveNumber);
  validate->add_option("--d2", ladder.d2, "scaled distance, right probe")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*specfun) return run_specfun(fn, x);
    if (*correlate) return run_correlate(common, corr);
    if (*sweep) return run_sweep_cmd(common, sw);
    if (*fit) {
      const auto report = mc::run_fit(mc::read_sweep_csv(fit_in), fit_req);
      mc::print_fit_report(std::cout, report, fit_req);
      return report.passed ? kOk : kNumeric;
    }
    if (*plot) {
      mc::render_plot(plot_in, plot_out, plot_axes == "loglog" ? mc::PlotAxes::loglog : mc::PlotAxes::linear);
      return kOk;
    }
    if (*validate) {
      const auto rows = mc::run_lambda_ladder(ladder);
      mc::print_ladder_table(std::cout, ladder, rows);
      for (const auto& r : rows) {
        if (!r.passed) return kNumeric;
      }
      return kOk;
    }
  } catch (const mc::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << " (best estimate " << g17(e.best_estimate()) << ")\n";
    return kNumeric;
  } catch (const mc::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const mc::CsvError& e) {
    std::cerr << "error: malformed CSV: " << e.what() << '\n';
    return kIo;
  } catch (const mc::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const mc::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
