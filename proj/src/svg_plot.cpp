#include "mirrorcorr/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "mirrorcorr/errors.hpp"

namespace mirrorcorr {

namespace {

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string fmt(const char* spec, double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

struct Axis {
  double lo, hi;
  bool log;

  double map(double v) const {
    const double t = log ? std::log10(v) : v;
    return hi == lo ? 0.5 : (t - lo) / (hi - lo);
  }
  std::string label(double t) const { return log ? fmt("%.3g", std::pow(10.0, t)) : fmt("%.4g", t); }
};

Axis make_axis(const std::vector<double>& v, bool log) {
  double lo = log ? std::log10(v.front()) : v.front();
  double hi = lo;
  for (double x : v) {
    const double t = log ? std::log10(x) : x;
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  if (hi == lo) {
    const double pad = lo == 0.0 ? 1.0 : 0.5 * std::abs(lo);
    lo -= pad;
    hi += pad;
  }
  return {lo, hi, log};
}

}  // namespace

std::string render_svg(const CsvData& data, PlotAxes axes, const PlotLayout& layout) {
  const bool log = axes == PlotAxes::loglog;
  std::vector<double> xs, ys;
  for (const auto& row : data.rows) {
    if (row.status != "ok" || !row.value) continue;
    const double y = log ? std::abs(*row.value) : *row.value;
    if (log && (!(row.x > 0.0) || !(y > 0.0))) continue;
    xs.push_back(row.x);
    ys.push_back(y);
  }
  if (xs.empty()) throw DomainError("no plottable data rows");

  const Axis ax = make_axis(xs, log);
  const Axis ay = make_axis(ys, log);
  const double pw = layout.width - layout.margin_left - layout.margin_right;
  const double ph = layout.height - layout.margin_top - layout.margin_bottom;
  auto px = [&](double x) { return layout.margin_left + pw * ax.map(x); };
  auto py = [&](double y) { return layout.margin_top + ph * (1.0 - ay.map(y)); };

  const std::string title = data.metadata_value("title").value_or("sweep");
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt("%g", layout.width)
    << "\" height=\"" << fmt("%g", layout.height) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << fmt("%.2f", layout.width / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
    << escape_xml(title) << "</text>\n";
  const double x0 = layout.margin_left, x1 = layout.margin_left + pw;
  const double y0 = layout.margin_top + ph, y1 = layout.margin_top;
  s << "<g stroke=\"black\" fill=\"none\">\n";
  s << "<line x1=\"" << fmt("%.2f", x0) << "\" y1=\"" << fmt("%.2f", y0) << "\" x2=\"" << fmt("%.2f", x1)
    << "\" y2=\"" << fmt("%.2f", y0) << "\"/>\n";
  s << "<line x1=\"" << fmt("%.2f", x0) << "\" y1=\"" << fmt("%.2f", y0) << "\" x2=\"" << fmt("%.2f", x0)
    << "\" y2=\"" << fmt("%.2f", y1) << "\"/>\n";
  s << "</g>\n<g font-size=\"10\">\n";
  for (int i = 0; i < layout.n_ticks; ++i) {
    const double f = static_cast<double>(i) / (layout.n_ticks - 1);
    const double tx = x0 + f * pw;
    const double ty = y0 - f * ph;
    s << "<line x1=\"" << fmt("%.2f", tx) << "\" y1=\"" << fmt("%.2f", y0) << "\" x2=\"" << fmt("%.2f", tx)
      << "\" y2=\"" << fmt("%.2f", y0 + 5) << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << fmt("%.2f", tx) << "\" y=\"" << fmt("%.2f", y0 + 18)
      << "\" text-anchor=\"middle\">" << ax.label(ax.lo + f * (ax.hi - ax.lo)) << "</text>\n";
    s << "<line x1=\"" << fmt("%.2f", x0 - 5) << "\" y1=\"" << fmt("%.2f", ty) << "\" x2=\"" << fmt("%.2f", x0)
      << "\" y2=\"" << fmt("%.2f", ty) << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << fmt("%.2f", x0 - 8) << "\" y=\"" << fmt("%.2f", ty + 3)
      << "\" text-anchor=\"end\">" << ay.label(ay.lo + f * (ay.hi - ay.lo)) << "</text>\n";
  }
  s << "</g>\n";
  s << "<text x=\"" << fmt("%.2f", x0 + pw / 2) << "\" y=\"" << fmt("%.2f", layout.height - 16)
    << "\" text-anchor=\"middle\">d</text>\n";
  s << "<text x=\"16\" y=\"" << fmt("%.2f", y1 + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << fmt("%.2f", y1 + ph / 2) << ")\">" << (log ? "|value|" : "value") << "</text>\n";
  s << "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s << ' ';
    s << fmt("%.3f", px(xs[i])) << ',' << fmt("%.3f", py(ys[i]));
  }
  s << "\"/>\n</svg>\n";
  return s.str();
}

void render_plot(const std::filesystem::path& input, const std::filesystem::path& output,
                 PlotAxes axes) {
  const std::string svg = render_svg(read_sweep_csv(input), axes);
  std::ofstream file(output, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + output.string() + "' for writing");
  file << svg;
  file.close();
  if (!file) throw IoError("failed writing '" + output.string() + "'");
}

}  // namespace mirrorcorr
