#include "colorcenter/report.hpp"

#include <cmath>
#include <cstdlib>

#include <nlohmann/json.hpp>

#include "colorcenter/csv.hpp"

namespace colorcenter {

namespace {

// Round-trips through the 9-significant-digit text form; non-finite values become null.
nlohmann::ordered_json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::strtod(format_number(v).c_str(), nullptr) + 0.0;
}

}  // namespace

std::string fit_report_json(std::string_view kind, const FitResult& fit, const NumericEntries& extras,
                            const TextEntries& notes) {
  nlohmann::ordered_json j;
  j["kind"] = std::string(kind);
  j["names"] = fit.names;
  auto& values = j["values"] = nlohmann::ordered_json::array();
  for (double v : fit.values) values.push_back(num(v));
  auto& errors = j["std_errors"] = nlohmann::ordered_json::array();
  for (double v : fit.std_errors) errors.push_back(num(v));
  j["r_squared"] = num(fit.r_squared);
  j["residual_norm"] = num(fit.residual_norm);
  j["converged"] = fit.converged;
  j["degenerate"] = fit.degenerate;
  j["iterations"] = fit.iterations;
  j["message"] = fit.message;
  if (!extras.empty()) {
    auto& e = j["derived"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : extras) e[k] = num(v);
  }
  for (const auto& [k, v] : notes) j[k] = v;
  return j.dump(2) + "\n";
}

std::string metrics_report_json(const MetricsReport& report) {
  nlohmann::ordered_json j;
  j["dw"] = num(report.debye_waller);
  j["huang_rhys"] = num(report.huang_rhys);
  j["zpl_window_nm"] = {num(report.zpl_window_nm.lo), num(report.zpl_window_nm.hi)};
  j["total_window_nm"] = {num(report.total_window_nm.lo), num(report.total_window_nm.hi)};
  j["background_method"] = report.background_method;
  j["integration_axis"] = report.integration_axis;
  j["response_corrected"] = report.response_corrected;
  j["clamped_samples"] = report.clamped_samples;
  return j.dump(2) + "\n";
}

}  // namespace colorcenter
