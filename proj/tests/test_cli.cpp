#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "mirrorcorr/errors.hpp"
#include "mirrorcorr/powerfit.hpp"
#include "mirrorcorr/svg_plot.hpp"
#include "mirrorcorr/sweep.hpp"

using namespace mirrorcorr;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "mirrorcorr_test_cli";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + MIRRORCORR_CLI + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RunConfig discrete_config() {
  return parse_config_text(
      R"({"units": "natural", "m": 1, "omega0": 1, "L0": 20, "n_modes": 300, "uv_cutoff": 8})");
}

CsvData power_law_csv(double a, double b, int n) {
  CsvData data;
  data.metadata.push_back("title: synthetic");
  for (double x : continuum::log_spaced(1.0, 100.0, n)) {
    SweepRow r;
    r.x = x;
    r.value = a * std::pow(x, b);
    data.rows.push_back(r);
  }
  return data;
}

std::vector<std::pair<double, double>> polyline_vertices(const std::string& svg) {
  std::smatch m;
  REQUIRE(std::regex_search(svg, m, std::regex("<polyline[^>]*points=\"([^\"]*)\"")));
  std::vector<std::pair<double, double>> out;
  std::istringstream in(m[1].str());
  std::string pair;
  while (in >> pair) {
    const auto comma = pair.find(',');
    out.emplace_back(std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1)));
  }
  return out;
}

}  // namespace

TEST_CASE("grid construction") {
  SweepGrid lin{0.0, 1.0, 5, GridSpacing::linear};
  CHECK(lin.points() == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  SweepGrid lg{1.0, 100.0, 3, GridSpacing::log};
  const auto p = lg.points();
  CHECK(p.front() == 1.0);
  CHECK(p[1] == doctest::Approx(10.0));
  CHECK(p.back() == 100.0);
  CHECK_THROWS_AS((SweepGrid{2.0, 1.0, 3, GridSpacing::linear}).validate(), ConfigError);
  CHECK_THROWS_AS((SweepGrid{0.0, 1.0, 1, GridSpacing::linear}).validate(), ConfigError);
  CHECK_THROWS_AS((SweepGrid{0.0, 1.0, 3, GridSpacing::log}).validate(), ConfigError);
  CHECK(parse_sweep_quantity("phi2_shift") == SweepQuantity::phi2_shift);
  CHECK_THROWS_AS(parse_sweep_quantity("C"), ConfigError);
}

TEST_CASE("two-point sweep writes two rows and one header") {
  SweepRequest req;
  req.quantity = SweepQuantity::C_continuum;
  req.grid = {1.0, 2.0, 2, GridSpacing::linear};
  std::ostringstream out;
  write_sweep_csv(out, req, evaluate_sweep(req));
  std::istringstream in(out.str());
  std::string line;
  int header = 0, rows = 0;
  while (std::getline(in, line)) {
    if (line.rfind("#", 0) == 0) continue;
    if (line == "x,value,abs_err,status") ++header;
    else ++rows;
  }
  CHECK(header == 1);
  CHECK(rows == 2);
  CHECK(out.str().find('\r') == std::string::npos);
}

TEST_CASE("sweep output is identical across runs and job counts") {
  for (SweepQuantity q : {SweepQuantity::I_of_d, SweepQuantity::C_discrete, SweepQuantity::phi2_shift}) {
    SweepRequest req;
    req.quantity = q;
    req.config = discrete_config();
    req.grid = {0.5, 10.0, 7, GridSpacing::log};
    const fs::path a = scratch_dir() / "a.csv";
    const fs::path b = scratch_dir() / "b.csv";
    req.jobs = 1;
    run_sweep(req, a);
    req.jobs = 4;
    run_sweep(req, b);
    CHECK(slurp(a) == slurp(b));
    const CsvData data = read_sweep_csv(a);
    CHECK(data.rows.size() == 7);
    CHECK(data.metadata_value("quantity") == to_string(q));
    CHECK(data.metadata_value("config").has_value());
    for (const auto& r : data.rows) CHECK(r.status == "ok");
  }
}

TEST_CASE("sweep values round-trip exactly") {
  SweepRequest req;
  req.quantity = SweepQuantity::C_discrete;
  req.config = discrete_config();
  req.grid = {1.0, 5.0, 4, GridSpacing::linear};
  const auto rows = evaluate_sweep(req);
  std::ostringstream out;
  write_sweep_csv(out, req, rows);
  std::istringstream in(out.str());
  const CsvData back = read_sweep_csv(in);
  REQUIRE(back.rows.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back.rows[i].x == rows[i].x);
    CHECK(*back.rows[i].value == *rows[i].value);
    CHECK(back.rows[i].abs_err == rows[i].abs_err);
    CHECK(*rows[i].value < 0.0);
  }
}

TEST_CASE("failed points are recorded without aborting") {
  SweepRequest req;
  req.quantity = SweepQuantity::C_discrete;
  req.config = discrete_config();  // k0 L0 = 20, so d >= 20 is outside the cavity
  req.grid = {10.0, 30.0, 3, GridSpacing::linear};
  const auto rows = evaluate_sweep(req);
  CHECK(rows[0].status == "ok");
  CHECK(rows[2].status == "domain_error");
  CHECK(!rows[2].value);

  SweepRequest tight;
  tight.quantity = SweepQuantity::I_of_d;
  tight.grid = {2.0, 3.0, 2, GridSpacing::linear};
  tight.quadrature.rel_tol = 1e-30;
  tight.quadrature.abs_tol = 1e-300;
  tight.quadrature.max_partitions = 100;
  const auto slow = evaluate_sweep(tight);
  for (const auto& r : slow) {
    CHECK(r.status == "not_converged");
    REQUIRE(r.value);
    CHECK(std::isfinite(*r.value));
  }
  std::ostringstream out;
  write_sweep_csv(out, tight, slow);
  CHECK(out.str().find("nan") == std::string::npos);
  CHECK(out.str().find("inf") == std::string::npos);
}

TEST_CASE("unwritable output is an I/O error") {
  SweepRequest req;
  req.grid = {1.0, 2.0, 2, GridSpacing::linear};
  CHECK_THROWS_AS(run_sweep(req, scratch_dir() / "missing" / "x.csv"), IoError);
}

TEST_CASE("CSV reader rejects malformed input") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_sweep_csv(in);
  };
  CHECK_THROWS_AS(parse("1,2,0,ok\n"), CsvError);
  CHECK_THROWS_AS(parse("x,value,abs_err,status\n1,2,0\n"), CsvError);
  CHECK_THROWS_AS(parse("x,value,abs_err,status\n1,two,0,ok\n"), CsvError);
  CHECK_THROWS_AS(parse("x,value,abs_err,status\n1,,0,ok\n"), CsvError);
  CHECK_THROWS_AS(parse("x,value,abs_err,status\n1,nan,0,ok\n"), CsvError);
  CHECK_NOTHROW(parse("# t\nx,value,abs_err,status\n1,,0,domain_error\n"));
  CHECK_THROWS_AS(read_sweep_csv(scratch_dir() / "nope.csv"), IoError);
}

TEST_CASE("fits") {
  SUBCASE("noiseless power law") {
    const FitReport r = run_fit(power_law_csv(2.5, -3.0, 10), {1.0, 100.0, {}, 1e-3});
    CHECK(std::abs(r.fit.coefficient - 2.5) <= 1e-10);
    CHECK(std::abs(r.fit.exponent + 3.0) <= 1e-10);
    CHECK(r.passed);
    CHECK(r.rows_used == 10);
  }
  SUBCASE("forced exponent misfit") {
    const FitReport r = run_fit(power_law_csv(2.5, -4.0, 10), {1.0, 100.0, -3.0, 1e-2});
    CHECK(!r.passed);
    CHECK(r.fit.residual > 1e-2);
  }
  SUBCASE("range filter and minimum rows") {
    CHECK(run_fit(power_law_csv(1.0, -2.0, 10), {1.0, 10.0, {}, 1e-3}).rows_used == 5);
    CHECK_THROWS_AS(run_fit(power_law_csv(1.0, -2.0, 10), {50.0, 100.0, {}, 1e-3}), DomainError);
  }
  SUBCASE("report text") {
    const FitRequest req{1.0, 100.0, {}, 1e-3};
    std::ostringstream out;
    print_fit_report(out, run_fit(power_law_csv(2.0, -1.0, 6), req), req);
    std::istringstream lines(out.str());
    std::string key;
    double coefficient = 0.0;
    lines >> key >> coefficient;
    CHECK(key == "coefficient");
    CHECK(coefficient == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(out.str().find("PASS") != std::string::npos);
  }
}

TEST_CASE("plots") {
  SUBCASE("one polyline with one vertex per row") {
    const std::string svg = render_svg(power_law_csv(3.0, -3.0, 8), PlotAxes::linear);
    CHECK(svg.rfind("<svg", 0) == 0);
    std::size_t count = 0;
    for (std::size_t pos = 0; (pos = svg.find("<polyline", pos)) != std::string::npos; ++pos) ++count;
    CHECK(count == 1);
    CHECK(polyline_vertices(svg).size() == 8);
    CHECK(svg.find("synthetic") != std::string::npos);
    CHECK(svg.find("<text") != std::string::npos);
  }
  SUBCASE("log-log of a power law is a straight line") {
    const PlotLayout layout;
    const auto v = polyline_vertices(render_svg(power_law_csv(3.0, -3.0, 8), PlotAxes::loglog, layout));
    const double plot_height = layout.height - layout.margin_top - layout.margin_bottom;
    const auto [x0, y0] = v.front();
    const auto [x1, y1] = v.back();
    for (auto [x, y] : v) {
      const double chord = y0 + (y1 - y0) * (x - x0) / (x1 - x0);
      CHECK(std::abs(y - chord) < 0.01 * plot_height);
    }
  }
  SUBCASE("empty data writes nothing") {
    CsvData empty;
    CHECK_THROWS_AS(render_svg(empty, PlotAxes::linear), DomainError);
    const fs::path in = scratch_dir() / "empty.csv";
    const fs::path out = scratch_dir() / "empty.svg";
    fs::remove(out);
    std::ofstream(in) << "# title: none\nx,value,abs_err,status\n";
    CHECK_THROWS_AS(render_plot(in, out, PlotAxes::loglog), DomainError);
    CHECK(!fs::exists(out));
  }
  SUBCASE("identical input renders identical SVG") {
    CHECK(render_svg(power_law_csv(1.0, -2.0, 5), PlotAxes::loglog) ==
          render_svg(power_law_csv(1.0, -2.0, 5), PlotAxes::loglog));
  }
}

TEST_CASE("command line") {
  const fs::path dir = scratch_dir();
  const fs::path cfg = dir / "cfg.json";
  std::ofstream(cfg) << R"({"units": "natural", "m": 1, "omega0": 1, "L0": 20, "n_modes": 200, "uv_cutoff": 5})";
  const fs::path unknown = dir / "unknown.json";
  std::ofstream(unknown) << R"({"units": "natural", "m": 1, "omega0": 1, "L0": 20, "n_modes": 20, "extra": 1})";

  CHECK(run_cli("specfun --fn f --x 2") == 0);
  CHECK(run_cli("specfun --fn f --x 0") == 1);
  CHECK(run_cli("correlate --method discrete --d 2 --config \"" + cfg.string() + "\"") == 0);
  CHECK(run_cli("correlate --method discrete --d 2 --config \"" + unknown.string() + "\"") == 1);
  CHECK(run_cli("correlate --method discrete --d 2 --config \"" + (dir / "none.json").string() + "\"") == 3);
  CHECK(run_cli("correlate --method continuum --d 2 --d1 3 --d2 4") == 1);

  const fs::path a = dir / "cli_a.csv";
  const fs::path b = dir / "cli_b.csv";
  const std::string sweep = "sweep --quantity C_discrete --min 1 --max 8 --n 6 --spacing log --config \"" +
                            cfg.string() + "\" --out ";
  CHECK(run_cli(sweep + "\"" + a.string() + "\" --jobs 1") == 0);
  CHECK(run_cli(sweep + "\"" + b.string() + "\" --jobs 3") == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(run_cli("plot --in \"" + a.string() + "\" --out \"" + (dir / "a.svg").string() + "\" --axes loglog") == 0);
  CHECK(fs::exists(dir / "a.svg"));
}
