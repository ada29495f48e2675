#pragma once

#include <filesystem>
#include <string>

#include "mirrorcorr/sweep.hpp"

namespace mirrorcorr {

enum class PlotAxes { linear, loglog };

struct PlotLayout {
  double width = 640.0;
  double height = 480.0;
  double margin_left = 80.0;
  double margin_right = 20.0;
  double margin_top = 40.0;
  double margin_bottom = 60.0;
  int n_ticks = 5;
};

// Standalone SVG of the ok rows: axes, tick labels, one polyline, and the
// `title` metadata as heading. loglog plots |value|. Throws DomainError when
// no row is plottable.
std::string render_svg(const CsvData& data, PlotAxes axes, const PlotLayout& layout = {});

// Reads `input`, renders, and writes `output`. Nothing is written on error.
void render_plot(const std::filesystem::path& input, const std::filesystem::path& output,
                 PlotAxes axes);

}  // namespace mirrorcorr
