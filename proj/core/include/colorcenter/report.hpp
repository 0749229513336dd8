#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "colorcenter/least_squares.hpp"
#include "colorcenter/spectral_metrics.hpp"

namespace colorcenter {

using NumericEntries = std::vector<std::pair<std::string, double>>;
using TextEntries = std::vector<std::pair<std::string, std::string>>;

/// JSON fit report: kind, names, values, std_errors, r_squared, residual_norm,
/// converged, degenerate, iterations, message, plus caller-supplied extras.
/// Numbers carry nine significant digits; unbounded std_errors become null.
std::string fit_report_json(std::string_view kind, const FitResult& fit, const NumericEntries& extras = {},
                            const TextEntries& notes = {});

struct MetricsReport {
  double debye_waller = 0.0;
  double huang_rhys = 0.0;
  Window zpl_window_nm;
  Window total_window_nm;
  std::string background_method = "none";
  std::string integration_axis = "wavelength";
  bool response_corrected = false;
  int clamped_samples = 0;
};

std::string metrics_report_json(const MetricsReport& report);

}  // namespace colorcenter
