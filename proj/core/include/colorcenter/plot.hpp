#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "colorcenter/spectrum_simulator.hpp"
#include "colorcenter/spectrum_trace.hpp"

namespace colorcenter {

struct PlotSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> marker_size;  // per-point radius in px when drawing markers
  std::string color = "#1f77b4";
  std::string label;
  bool markers = false;  // polyline otherwise
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
};

/// Self-contained SVG with axes, ticks, markers and polylines.
std::string render_svg(const Plot& plot);

enum class PlotKind { field_map, spectrum, fit_overlay, decay };

/// CSV rows and their SVG rendering, both built from one in-memory result.
struct PlotArtifact {
  PlotKind kind = PlotKind::spectrum;
  std::string csv;
  std::string svg;
};

/// Columns b_tesla, line_index, freq_offset_ghz, intensity; markers sized by intensity.
PlotArtifact field_map_artifact(const FieldSweep& sweep);

/// Two-column trace CSV with the given headers.
PlotArtifact spectrum_artifact(const SpectrumTrace& trace, std::string_view x_header, std::string_view y_header);

/// Columns <x_header>, data, model; data as markers and model as a line.
PlotArtifact overlay_artifact(PlotKind kind, std::span<const double> x, std::span<const double> data,
                              std::span<const double> model, std::string_view x_header, std::string_view title);

}  // namespace colorcenter
