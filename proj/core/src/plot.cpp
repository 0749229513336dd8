#include "colorcenter/plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "colorcenter/csv.hpp"
#include "colorcenter/errors.hpp"

namespace colorcenter {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 460.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double nice_step(double span) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  const double nice = f < 1.5 ? 1.0 : f < 3.0 ? 2.0 : f < 7.0 ? 5.0 : 10.0;
  return nice * mag;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string render_svg(const Plot& plot) {
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  double ymin = xmin;
  double ymax = -xmin;
  for (const auto& s : plot.series) {
    for (double v : s.x) {
      xmin = std::min(xmin, v);
      xmax = std::max(xmax, v);
    }
    for (double v : s.y) {
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  }
  if (!std::isfinite(xmin)) {
    xmin = 0.0;
    xmax = 1.0;
    ymin = 0.0;
    ymax = 1.0;
  }
  if (xmax == xmin) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax == ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  const auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  const auto py = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(plot.title)
    << "</text>\n";
  o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";

  const double xs = nice_step(xmax - xmin);
  for (double t = std::ceil(xmin / xs) * xs; t <= xmax + 1e-9 * xs; t += xs) {
    o << "<line x1=\"" << fmt(px(t)) << "\" y1=\"" << kTop + ph << "\" x2=\"" << fmt(px(t)) << "\" y2=\""
      << kTop + ph + 5 << "\" stroke=\"black\"/>";
    o << "<text x=\"" << fmt(px(t)) << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">"
      << format_number(std::abs(t) < 1e-12 * xs ? 0.0 : t) << "</text>\n";
  }
  const double ys = nice_step(ymax - ymin);
  for (double t = std::ceil(ymin / ys) * ys; t <= ymax + 1e-9 * ys; t += ys) {
    o << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << fmt(py(t)) << "\" x2=\"" << kLeft << "\" y2=\"" << fmt(py(t))
      << "\" stroke=\"black\"/>";
    o << "<text x=\"" << kLeft - 8 << "\" y=\"" << fmt(py(t) + 4) << "\" text-anchor=\"end\">"
      << format_number(std::abs(t) < 1e-12 * ys ? 0.0 : t) << "</text>\n";
  }
  o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">"
    << escape(plot.x_label) << "</text>\n";
  o << "<text transform=\"translate(18," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
    << escape(plot.y_label) << "</text>\n";

  for (const auto& s : plot.series) {
    const auto n = std::min(s.x.size(), s.y.size());
    o << "<g fill=\"" << s.color << "\" stroke=\"" << s.color << "\">";
    if (!s.label.empty()) o << "<title>" << escape(s.label) << "</title>";
    if (s.markers) {
      for (std::size_t i = 0; i < n; ++i) {
        const double r = i < s.marker_size.size() ? s.marker_size[i] : 2.5;
        if (r <= 0.0) continue;
        o << "<circle cx=\"" << fmt(px(s.x[i])) << "\" cy=\"" << fmt(py(s.y[i])) << "\" r=\"" << fmt(r)
          << "\" stroke=\"none\"/>";
      }
    } else if (n > 0) {
      o << "<polyline fill=\"none\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < n; ++i) o << (i ? " " : "") << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i]));
      o << "\"/>";
    }
    o << "</g>\n";
  }
  o << "</svg>\n";
  return o.str();
}

PlotArtifact field_map_artifact(const FieldSweep& sweep) {
  PlotArtifact art;
  art.kind = PlotKind::field_map;
  std::ostringstream csv;
  csv << "b_tesla,line_index,freq_offset_ghz,intensity\n";

  Plot plot;
  plot.title = "Emission lines vs field (" + format_number(sweep.angle_to_axis_deg) + " deg to axis)";
  plot.x_label = "B (T)";
  plot.y_label = "frequency offset (GHz)";
  plot.series.resize(kLineCount);
  for (int k = 0; k < kLineCount; ++k) {
    plot.series[static_cast<std::size_t>(k)].color = kPalette[k];
    plot.series[static_cast<std::size_t>(k)].markers = true;
    plot.series[static_cast<std::size_t>(k)].label = "line " + std::to_string(k);
  }
  for (std::size_t i = 0; i < sweep.b_tesla.size(); ++i) {
    for (const auto& line : sweep.lines_per_field[i]) {
      csv << format_number(sweep.b_tesla[i]) << ',' << line.line_index() << ',' << format_number(line.freq_offset_ghz)
          << ',' << format_number(line.intensity) << '\n';
      auto& s = plot.series[static_cast<std::size_t>(line.line_index())];
      s.x.push_back(sweep.b_tesla[i]);
      s.y.push_back(line.freq_offset_ghz);
      s.marker_size.push_back(1.0 + 4.0 * line.intensity);
    }
  }
  art.csv = csv.str();
  art.svg = render_svg(plot);
  return art;
}

PlotArtifact spectrum_artifact(const SpectrumTrace& trace, std::string_view x_header, std::string_view y_header) {
  PlotArtifact art;
  art.kind = PlotKind::spectrum;
  std::ostringstream csv;
  csv << x_header << ',' << y_header << '\n';
  for (std::size_t i = 0; i < trace.size(); ++i) csv << format_number(trace.x[i]) << ',' << format_number(trace.y[i]) << '\n';
  art.csv = csv.str();
  Plot plot;
  plot.title = "Spectrum";
  plot.x_label = std::string(x_header);
  plot.y_label = std::string(y_header);
  PlotSeries s;
  s.x = trace.x;
  s.y = trace.y;
  plot.series.push_back(std::move(s));
  art.svg = render_svg(plot);
  return art;
}

PlotArtifact overlay_artifact(PlotKind kind, std::span<const double> x, std::span<const double> data,
                              std::span<const double> model, std::string_view x_header, std::string_view title) {
  if (x.size() != data.size() || x.size() != model.size()) throw InputError("overlay columns differ in length");
  PlotArtifact art;
  art.kind = kind;
  std::ostringstream csv;
  csv << x_header << ",data,model\n";
  for (std::size_t i = 0; i < x.size(); ++i) {
    csv << format_number(x[i]) << ',' << format_number(data[i]) << ',' << format_number(model[i]) << '\n';
  }
  art.csv = csv.str();
  Plot plot;
  plot.title = std::string(title);
  plot.x_label = std::string(x_header);
  plot.y_label = "signal";
  PlotSeries d;
  d.x.assign(x.begin(), x.end());
  d.y.assign(data.begin(), data.end());
  d.markers = true;
  d.color = "#7f7f7f";
  d.label = "data";
  PlotSeries m;
  m.x.assign(x.begin(), x.end());
  m.y.assign(model.begin(), model.end());
  m.color = "#d62728";
  m.label = "model";
  plot.series.push_back(std::move(d));
  plot.series.push_back(std::move(m));
  art.svg = render_svg(plot);
  return art;
}

}  // namespace colorcenter
