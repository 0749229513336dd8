#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "colorcenter/csv.hpp"
#include "colorcenter/decay_fit.hpp"
#include "colorcenter/errors.hpp"
#include "colorcenter/hamiltonian_fit.hpp"
#include "colorcenter/lifetime_fit.hpp"
#include "colorcenter/lorentzian_fit.hpp"
#include "colorcenter/parameters_io.hpp"
#include "colorcenter/plot.hpp"
#include "colorcenter/report.hpp"
#include "colorcenter/spectral_metrics.hpp"
#include "colorcenter/spectrum_simulator.hpp"
#include "colorcenter/stark.hpp"

namespace colorcenter::cli {

namespace fs = std::filesystem;

namespace {

/// Raised when a fit finishes without meeting its convergence criteria.
class NotConverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Everything a command produces, held until the command has fully succeeded.
struct Outputs {
  std::vector<std::pair<fs::path, std::string>> files;
  std::string stdout_text;

  void emit(const std::string& path, std::string content) {
    if (path.empty() || path == "-") {
      stdout_text += content;
    } else {
      files.emplace_back(path, std::move(content));
    }
  }
};

constexpr const char* kFooter =
    "Wavelength and frequency are related by nu[GHz] = c / lambda[nm] with\n"
    "c = 299792458 nm*GHz (299792.458 nm*THz).\n"
    "Exit codes: 0 success, 2 input error, 3 fit did not converge.";

Vec3 to_vec3(const std::vector<double>& v, const char* what) {
  if (v.size() != 3) throw InputError(std::string(what) + " needs three components");
  return {v[0], v[1], v[2]};
}

Window parse_window(const std::string& text, const char* what) {
  const auto sep = text.find_first_of(",:");
  if (sep == std::string::npos) throw InputError(std::string(what) + " must look like lo,hi");
  try {
    std::size_t used = 0;
    Window w;
    const std::string lo = text.substr(0, sep);
    const std::string hi = text.substr(sep + 1);
    w.lo = std::stod(lo, &used);
    if (used != lo.size()) throw std::invalid_argument(lo);
    w.hi = std::stod(hi, &used);
    if (used != hi.size()) throw std::invalid_argument(hi);
    if (!(w.lo < w.hi)) throw InputError(std::string(what) + " needs lo < hi");
    return w;
  } catch (const std::logic_error&) {
    throw InputError(std::string(what) + ": cannot parse '" + text + "'");
  }
}

DefectParameters resolve_parameters(const std::string& path) {
  if (!path.empty()) return load_parameters(path);
  if (auto env = default_parameter_path()) return load_parameters(*env);
  return {};
}

std::string unit_suffix(const std::string& header) {
  const auto pos = header.rfind('_');
  return pos == std::string::npos ? std::string() : header.substr(pos + 1);
}

void require_converged(const FitResult& fit, const std::string& report, std::ostream& err) {
  if (fit.converged) return;
  err << report;
  throw NotConverged("fit did not converge: " + fit.message);
}

// ---------------------------------------------------------------- simulate

struct SimulateConfig {
  std::string params;
  double b_min = 0.0;
  double b_max = 9.0;
  double b_step = 0.5;
  std::optional<double> angle_deg;
  std::vector<double> axis{-1.0, -1.0, 1.0};
  std::vector<double> field_dir{1.0, 1.0, 1.0};
  std::string intensity = "spin_overlap";
  std::string out;
  std::string svg;
  std::string spectrum_out;
  double fwhm_ghz = 10.0;
  int grid_points = 2001;
};

std::vector<double> field_grid(double lo, double hi, double step) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo < 0.0) throw InputError("field range must be finite and >= 0");
  if (hi < lo) throw InputError("--b-max must not be below --b-min");
  if (!(step > 0.0)) throw InputError("--b-step must be positive");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = lo + static_cast<double>(i) * step;
  return b;
}

void simulate(const SimulateConfig& c, Outputs& o) {
  const DefectParameters params = resolve_parameters(c.params);
  params.validate();
  const auto model = c.intensity == "uniform" ? IntensityModel::uniform : IntensityModel::spin_overlap;
  Vec3 axis = to_vec3(c.axis, "--axis");
  Vec3 dir = to_vec3(c.field_dir, "--field-dir");
  if (c.angle_deg) {
    const double a = *c.angle_deg * constants::kPi / 180.0;
    axis = Vec3(0.0, 0.0, 1.0);
    dir = Vec3(std::sin(a), 0.0, std::cos(a));
  }
  if (axis.norm() == 0.0) throw InputError("defect axis must be nonzero");
  if (dir.norm() == 0.0) throw InputError("field direction must be nonzero");

  const auto b = field_grid(c.b_min, c.b_max, c.b_step);
  const FieldSweep sweep = field_sweep(params, axis, dir, b, model);
  const PlotArtifact map = field_map_artifact(sweep);
  o.emit(c.out, map.csv);
  if (!c.svg.empty()) o.emit(c.svg, map.svg);

  if (!c.spectrum_out.empty()) {
    if (c.grid_points < 2) throw InputError("--grid-points must be at least 2");
    const auto& lines = sweep.lines_per_field.back();
    double lo = lines.front().freq_offset_ghz;
    double hi = lo;
    for (const auto& l : lines) {
      lo = std::min(lo, l.freq_offset_ghz);
      hi = std::max(hi, l.freq_offset_ghz);
    }
    const double pad = 5.0 * c.fwhm_ghz;
    LineProfile profile;
    profile.fwhm_ghz = c.fwhm_ghz;
    const auto grid = linspace(lo - pad, hi + pad, static_cast<std::size_t>(c.grid_points));
    const SpectrumTrace trace = render_spectrum(lines, profile, grid);
    o.emit(c.spectrum_out, spectrum_artifact(trace, "freq_offset_ghz", "intensity").csv);
  }
}

// ---------------------------------------------------------------- fits

struct FitCommon {
  std::string input;
  std::string out_json;
  std::string overlay_csv;
  std::string svg;
};

void emit_fit(const FitCommon& c, const std::string& report, const PlotArtifact& overlay, Outputs& o) {
  o.emit(c.out_json, report);
  if (!c.overlay_csv.empty()) o.emit(c.overlay_csv, overlay.csv);
  if (!c.svg.empty()) o.emit(c.svg, overlay.svg);
}

void fit_lorentzian_cmd(const FitCommon& c, Outputs& o, std::ostream& err) {
  const CsvTable table = read_csv(c.input, schema_named("ple"));
  SpectrumTrace trace;
  trace.x = table.columns[0];
  trace.y = table.columns[1];
  const FitResult fit = fit_lorentzian(trace);
  const std::string unit = unit_suffix(table.header[0]);
  NumericEntries extras;
  if (unit == "ghz") {
    extras = {{"fwhm_mhz", fit.value("fwhm") * 1e3}, {"fwhm_mhz_std_error", fit.std_error("fwhm") * 1e3}};
  } else {
    extras = {{"fwhm_mhz", fit.value("fwhm")}, {"fwhm_mhz_std_error", fit.std_error("fwhm")}};
  }
  const std::string report = fit_report_json("lorentzian", fit, extras, {{"x_unit", unit}});
  require_converged(fit, report, err);
  const auto model = lorentzian_curve(fit, trace.x);
  emit_fit(c, report, overlay_artifact(PlotKind::fit_overlay, trace.x, trace.y, model, table.header[0], "Lorentzian fit"), o);
}

struct StarkConfig {
  double epsilon_r = 5.7;
  double thickness_um = 3.5;
  int reference_index = -1;
  bool no_offset = false;
};

void fit_stark_cmd(const FitCommon& c, const StarkConfig& s, Outputs& o, std::ostream& err) {
  const CsvTable table = read_csv(c.input, schema_named("stark"));
  std::vector<StarkPoint> points;
  for (std::size_t i = 0; i < table.rows(); ++i) points.push_back({table.columns[0][i], table.columns[1][i], 0.0});
  StarkFitOptions opts;
  opts.epsilon_r = s.epsilon_r;
  opts.junction_thickness_m = s.thickness_um * 1e-6;
  opts.fit_offset = !s.no_offset;
  if (s.reference_index >= 0) {
    if (static_cast<std::size_t>(s.reference_index) >= points.size()) throw InputError("--reference-index out of range");
    opts.reference_index = static_cast<std::size_t>(s.reference_index);
  }
  const FitResult fit = fit_stark(points, opts);
  const double mu = fit.value("delta_mu");
  const double alpha = fit.value("delta_alpha");
  const NumericEntries extras = {
      {"delta_mu_debye", convert_dipole_to_debye(mu)},
      {"delta_mu_debye_std_error", convert_dipole_to_debye(fit.std_error("delta_mu"))},
      {"delta_alpha_a3", convert_polarizability_to_a3(alpha)},
      {"delta_alpha_a3_std_error", convert_polarizability_to_a3(fit.std_error("delta_alpha"))},
  };
  const std::string report = fit_report_json("stark", fit, extras);
  require_converged(fit, report, err);

  StarkModel m;
  m.delta_mu = mu;
  m.delta_alpha = alpha;
  m.epsilon_r = opts.epsilon_r;
  m.junction_thickness_m = opts.junction_thickness_m;
  const double ref = opts.reference_index ? points[*opts.reference_index].peak_freq_ghz : 0.0;
  const double offset = opts.fit_offset ? fit.value("offset") : 0.0;
  std::vector<double> v;
  std::vector<double> data;
  std::vector<double> model;
  for (const auto& p : points) {
    v.push_back(p.voltage_v);
    data.push_back(p.peak_freq_ghz - ref);
    model.push_back(offset + stark_shift_ghz(local_field_mv_per_m(p.voltage_v, m), m));
  }
  emit_fit(c, report, overlay_artifact(PlotKind::fit_overlay, v, data, model, "voltage_v", "Stark fit"), o);
}

TimeTrace time_trace(const CsvTable& table) {
  TimeTrace t;
  t.t = table.columns[0];
  t.y = table.columns[1];
  return t;
}

struct DecayConfig {
  int components = 1;
  std::optional<double> window_start;
  std::optional<double> window_end;
};

void fit_decay_cmd(const FitCommon& c, const DecayConfig& d, Outputs& o, std::ostream& err) {
  if (d.components != 1 && d.components != 2) throw InputError("--components must be 1 or 2");
  const CsvTable table = read_csv(c.input, schema_named("decay"));
  const TimeTrace trace = time_trace(table);
  DecayFitOptions opts;
  opts.n_components = d.components;
  opts.window_start = d.window_start;
  opts.window_end = d.window_end;
  const FitResult fit = fit_decay(trace, opts);
  const std::string report = fit_report_json("decay", fit, {}, {{"time_unit", unit_suffix(table.header[0])}});
  require_converged(fit, report, err);

  std::vector<double> t;
  std::vector<double> y;
  for (std::size_t i = 0; i < trace.t.size(); ++i) {
    if (d.window_start && trace.t[i] < *d.window_start) continue;
    if (d.window_end && trace.t[i] > *d.window_end) continue;
    t.push_back(trace.t[i]);
    y.push_back(trace.y[i]);
  }
  const DecayModel model = decay_model_from_fit(fit, t.front());
  std::vector<double> m;
  for (double ti : t) m.push_back(model(ti));
  emit_fit(c, report, overlay_artifact(PlotKind::decay, t, y, m, table.header[0], "Decay fit"), o);
}

struct LifetimeConfig {
  double irf_fwhm = 0.0;
  bool fit_irf = false;
};

void fit_lifetime_cmd(const FitCommon& c, const LifetimeConfig& l, Outputs& o, std::ostream& err) {
  const CsvTable table = read_csv(c.input, schema_named("decay"));
  const TimeTrace trace = time_trace(table);
  LifetimeFitOptions opts;
  opts.irf_fwhm = l.irf_fwhm;
  opts.fit_irf_width = l.fit_irf;
  const FitResult fit = fit_lifetime_irf(trace, opts);
  const std::string unit = unit_suffix(table.header[0]);
  NumericEntries extras;
  if (unit == "ns") extras.emplace_back("lifetime_limited_linewidth_mhz", lifetime_limited_linewidth_mhz(fit.value("tau")));
  const std::string report = fit_report_json("lifetime", fit, extras, {{"time_unit", unit}});
  require_converged(fit, report, err);
  const double irf = l.fit_irf ? fit.value("irf_fwhm") : l.irf_fwhm;
  const auto model = lifetime_curve(fit, irf, trace.t);
  emit_fit(c, report, overlay_artifact(PlotKind::decay, trace.t, trace.y, model, table.header[0], "Lifetime fit"), o);
}

struct HamiltonianConfig {
  std::string params;
  std::optional<double> lambda_init;
  std::optional<double> xi_init;
  bool fix_lambda = false;
  bool fix_xi = false;
  std::vector<double> axis{-1.0, -1.0, 1.0};
  std::vector<double> field_dir{1.0, 1.0, 1.0};
};

void fit_hamiltonian_cmd(const FitCommon& c, const HamiltonianConfig& h, Outputs& o, std::ostream& err) {
  const CsvTable table = read_csv(c.input, schema_named("peaks"));
  HamiltonianFitOptions opts;
  opts.initial = resolve_parameters(h.params);
  if (h.lambda_init) opts.initial.lambda_soc_ghz = *h.lambda_init;
  if (h.xi_init) {
    opts.initial.xi_x_ghz = *h.xi_init;
    opts.initial.xi_y_ghz = 0.0;
  }
  opts.initial.validate();
  opts.fit_lambda = !h.fix_lambda;
  opts.fit_xi = !h.fix_xi;
  opts.axis = to_vec3(h.axis, "--axis");
  opts.field_dir = to_vec3(h.field_dir, "--field-dir");
  std::vector<PeakObservation> peaks;
  for (std::size_t i = 0; i < table.rows(); ++i) peaks.push_back({table.columns[0][i], table.columns[1][i]});
  const FitResult fit = fit_hamiltonian_params(peaks, opts);

  DefectParameters fitted = opts.initial;
  if (opts.fit_lambda) fitted.lambda_soc_ghz = fit.value("lambda_soc");
  if (opts.fit_xi) {
    const double xi0 = opts.initial.xi_ghz();
    const double xi = fit.value("xi");
    if (xi0 > 0.0) {
      fitted.xi_x_ghz = opts.initial.xi_x_ghz * xi / xi0;
      fitted.xi_y_ghz = opts.initial.xi_y_ghz * xi / xi0;
    } else {
      fitted.xi_x_ghz = xi;
    }
  }
  const std::string report = fit_report_json("hamiltonian", fit, {{"zero_field_splitting_ghz", fitted.zero_field_splitting_ghz()}});
  require_converged(fit, report, err);

  const Vec3 dir = opts.field_dir.normalized();
  std::vector<double> b;
  std::vector<double> data;
  std::vector<double> model;
  for (const auto& p : peaks) {
    const auto lines = distinct_line_frequencies(fitted, FieldConfig(p.b_tesla * dir, opts.axis));
    const auto nearest = std::min_element(lines.begin(), lines.end(), [&](double a, double z) {
      return std::abs(a - p.freq_offset_ghz) < std::abs(z - p.freq_offset_ghz);
    });
    b.push_back(p.b_tesla);
    data.push_back(p.freq_offset_ghz);
    model.push_back(*nearest);
  }
  emit_fit(c, report, overlay_artifact(PlotKind::fit_overlay, b, data, model, "b_tesla", "Hamiltonian fit"), o);
}

// ---------------------------------------------------------------- metrics

struct MetricsConfig {
  std::string input;
  std::string response;
  std::string background = "none";
  std::vector<std::string> bg_windows;
  std::string zpl_window = "882,886";
  std::string total_window = "882,1100";
  std::string axis = "wavelength";
  std::string out_json;
};

void metrics(const MetricsConfig& c, Outputs& o) {
  const Window zpl = parse_window(c.zpl_window, "--zpl-window");
  const Window total = parse_window(c.total_window, "--total-window");
  std::vector<Window> bg;
  for (const auto& w : c.bg_windows) bg.push_back(parse_window(w, "--bg-window"));
  if (c.background != "none" && bg.empty()) throw InputError("--background needs at least one --bg-window");

  const CsvTable table = read_csv(c.input, schema_named("spectrum"));
  std::optional<CsvTable> response;
  if (!c.response.empty()) response = read_csv(c.response, schema_named("response"));

  SpectrumTrace trace;
  trace.kind = AxisKind::wavelength_nm;
  trace.x = table.columns[0];
  trace.y = table.columns[1];

  MetricsReport r;
  if (response) {
    ResponseCurve curve{response->columns[0], response->columns[1]};
    trace = correct_response(trace, curve);
    r.response_corrected = true;
  }
  if (c.background != "none") {
    const auto method = c.background == "linear" ? BackgroundMethod::linear : BackgroundMethod::constant;
    BackgroundResult b = subtract_background(trace, method, bg);
    trace = std::move(b.trace);
    r.clamped_samples = b.clamped;
  }
  const auto axis = c.axis == "frequency" ? IntegrationAxis::frequency : IntegrationAxis::wavelength;
  r.debye_waller = debye_waller(trace, zpl, total, axis);
  r.huang_rhys = huang_rhys(r.debye_waller);
  r.zpl_window_nm = zpl;
  r.total_window_nm = total;
  r.background_method = c.background;
  r.integration_axis = c.axis;
  o.emit(c.out_json, metrics_report_json(r));
}

// ---------------------------------------------------------------- validate

int validate(const std::string& schema, const std::string& input, std::ostream& out, std::ostream& err) {
  const ValidationReport rep = validate_csv(input, schema_named(schema));
  if (!rep.ok()) {
    for (const auto& e : rep.errors) err << input << ": " << e << '\n';
    return kExitInput;
  }
  out << rep.rows << " rows\n";
  return kExitOk;
}

// ---------------------------------------------------------------- synth

struct SynthConfig {
  std::string kind;
  std::uint64_t seed = 1;
  bool noiseless = false;
  std::string out;
};

std::string two_columns(const char* a, const char* b, const std::vector<double>& x, const std::vector<double>& y) {
  std::ostringstream s;
  s << a << ',' << b << '\n';
  for (std::size_t i = 0; i < x.size(); ++i) s << format_number(x[i]) << ',' << format_number(y[i]) << '\n';
  return s.str();
}

double poisson(std::mt19937_64& rng, double mean) {
  if (mean <= 0.0) return 0.0;
  std::poisson_distribution<long long> p(mean);
  return static_cast<double>(p(rng));
}

void synth(const SynthConfig& c, Outputs& o) {
  std::mt19937_64 rng(c.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> x;
  std::vector<double> y;
  if (c.kind == "ple") {
    // 16 MHz line with 10% proportional noise, detuning in MHz.
    x = linspace(-50.0, 50.0, 1001);
    for (double v : x) {
      const double s = 1000.0 * lorentzian_model(v, 2.0, 16.0, 1.0, 0.0) + 20.0;
      y.push_back(c.noiseless ? s : s * (1.0 + 0.1 * normal(rng)));
    }
    o.emit(c.out, two_columns("detuning_mhz", "counts", x, y));
  } else if (c.kind == "stark") {
    StarkModel m;
    m.delta_mu = 6.9e-4;
    m.delta_alpha = -2.1e-4;
    x = linspace(-5.0, -30.0, 12);
    double peak = 0.0;
    for (double v : x) peak = std::max(peak, std::abs(stark_shift_ghz(local_field_mv_per_m(v, m), m)));
    for (double v : x) {
      const double s = stark_shift_ghz(local_field_mv_per_m(v, m), m);
      y.push_back(c.noiseless ? s : s + 0.01 * peak * normal(rng));
    }
    o.emit(c.out, two_columns("voltage_v", "peak_freq_ghz", x, y));
  } else if (c.kind == "decay") {
    // Bi-exponential 1.6 us and 42 us charge decay, 1e4 peak counts.
    x = linspace(0.0, 200.0, 801);
    for (double t : x) {
      const double s = 6000.0 * std::exp(-t / 1.6) + 4000.0 * std::exp(-t / 42.0);
      y.push_back(c.noiseless ? s : poisson(rng, s));
    }
    o.emit(c.out, two_columns("time_us", "counts", x, y));
  } else if (c.kind == "lifetime") {
    const double sigma = 0.53 / kGaussianFwhmPerSigma;
    x = linspace(0.0, 60.0, 1201);
    for (double t : x) {
      const double s = convolved_exponential(t, 10.43, 1e4, 5.0, sigma, 5.0);
      y.push_back(c.noiseless ? s : poisson(rng, s));
    }
    o.emit(c.out, two_columns("time_ns", "counts", x, y));
  } else if (c.kind == "spectrum") {
    // ZPL at 884 nm holding 62% of the emission above a flat 50-count floor.
    x = linspace(850.0, 1120.0, 5401);
    const double zs = 0.4 / kGaussianFwhmPerSigma;
    const double ps = 40.0 / kGaussianFwhmPerSigma;
    const double zpl_area = 0.62;
    const double psb_area = 0.38;
    const double norm = std::sqrt(2.0 * constants::kPi);
    for (double w : x) {
      const double zpl = zpl_area / (zs * norm) * std::exp(-0.5 * std::pow((w - 884.0) / zs, 2));
      const double psb = psb_area / (ps * norm) * std::exp(-0.5 * std::pow((w - 960.0) / ps, 2));
      const double s = 1e5 * (zpl + psb) + 50.0;
      y.push_back(c.noiseless ? s : poisson(rng, s));
    }
    o.emit(c.out, two_columns("wavelength_nm", "counts", x, y));
  } else if (c.kind == "peaks") {
    const DefectParameters p;
    std::ostringstream s;
    s << "b_tesla,freq_offset_ghz\n";
    for (double b : {0.0, 3.0, 6.0, 9.0}) {
      const FieldConfig f(b * Vec3(1.0, 1.0, 1.0).normalized(), Vec3(-1.0, -1.0, 1.0));
      for (double v : distinct_line_frequencies(p, f)) {
        s << format_number(b) << ',' << format_number(c.noiseless ? v : v + 0.05 * normal(rng)) << '\n';
      }
    }
    o.emit(c.out, s.str());
  } else {
    throw InputError("unknown synthetic dataset '" + c.kind + "'");
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Magneto-optical spectra and spectroscopy fits for D3d color centers", "colorcenter"};
  app.footer(kFooter);
  app.require_subcommand(1);
  app.set_version_flag("--version", "colorcenter 0.3.0");

  const std::vector<std::string> intensity_models{"uniform", "spin_overlap"};

  SimulateConfig sim;
  auto* s = app.add_subcommand("simulate-zeeman", "Emission line positions versus field magnitude");
  s->add_option("--params", sim.params, "Parameter JSON (defaults to $COLORCENTER_PARAMS, then built-ins)");
  s->add_option("--b-min", sim.b_min, "Lowest field, T")->capture_default_str();
  s->add_option("--b-max", sim.b_max, "Highest field, T")->capture_default_str();
  s->add_option("--b-step", sim.b_step, "Field step, T")->capture_default_str();
  s->add_option("--angle", sim.angle_deg, "Field angle to the defect axis in degrees (overrides --axis/--field-dir)");
  s->add_option("--axis", sim.axis, "Defect axis x,y,z")->delimiter(',')->expected(3)->capture_default_str();
  s->add_option("--field-dir", sim.field_dir, "Field direction x,y,z")->delimiter(',')->expected(3)->capture_default_str();
  s->add_option("--intensity-model", sim.intensity, "Line weights")
      ->check(CLI::IsMember(intensity_models))
      ->capture_default_str();
  s->add_option("--out", sim.out, "Field-map CSV (stdout when omitted)");
  s->add_option("--svg", sim.svg, "Field-map SVG");
  s->add_option("--spectrum-out", sim.spectrum_out, "Rendered spectrum at the highest field, CSV");
  s->add_option("--fwhm-ghz", sim.fwhm_ghz, "Lorentzian line width for --spectrum-out")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  s->add_option("--grid-points", sim.grid_points, "Spectrum grid size")->capture_default_str();

  auto* f = app.add_subcommand("fit", "Fit a model to measured data");
  f->require_subcommand(1);
  FitCommon common;
  const auto add_common = [&](CLI::App* c) {
    c->add_option("--input", common.input, "Input CSV")->required();
    c->add_option("--out-json", common.out_json, "Fit report (stdout when omitted)");
    c->add_option("--overlay-csv", common.overlay_csv, "Data and model curve");
    c->add_option("--svg", common.svg, "Overlay plot");
  };
  auto* fl = f->add_subcommand("lorentzian", "Single Lorentzian peak (PLE scan)");
  add_common(fl);

  StarkConfig stark;
  auto* fs_ = f->add_subcommand("stark", "Quadratic Stark shift versus bias voltage");
  add_common(fs_);
  fs_->add_option("--epsilon", stark.epsilon_r, "Relative permittivity")->capture_default_str();
  fs_->add_option("--thickness-um", stark.thickness_um, "Junction thickness, um")->capture_default_str();
  fs_->add_option("--reference-index", stark.reference_index, "Row whose frequency is subtracted (0-based)");
  fs_->add_flag("--no-offset", stark.no_offset, "Do not fit a constant offset");

  DecayConfig decay;
  auto* fd = f->add_subcommand("decay", "One or two exponential components plus baseline");
  add_common(fd);
  fd->add_option("--components", decay.components, "1 or 2")->capture_default_str();
  fd->add_option("--window-start", decay.window_start, "Ignore earlier samples");
  fd->add_option("--window-end", decay.window_end, "Ignore later samples");

  LifetimeConfig life;
  auto* flt = f->add_subcommand("lifetime", "Exponential decay convolved with a Gaussian IRF");
  add_common(flt);
  flt->add_option("--irf-fwhm", life.irf_fwhm, "IRF FWHM in the file's time unit; 0 disables")->capture_default_str();
  flt->add_flag("--fit-irf", life.fit_irf, "Fit the IRF width as well");

  HamiltonianConfig ham;
  auto* fh = f->add_subcommand("hamiltonian", "Spin-orbit and Jahn-Teller couplings from peak positions");
  add_common(fh);
  fh->add_option("--params", ham.params, "Parameter JSON holding the starting point and fixed constants");
  fh->add_option("--lambda-init", ham.lambda_init, "Starting spin-orbit coupling, GHz");
  fh->add_option("--xi-init", ham.xi_init, "Starting Jahn-Teller coupling, GHz");
  fh->add_flag("--fix-lambda", ham.fix_lambda, "Hold the spin-orbit coupling");
  fh->add_flag("--fix-xi", ham.fix_xi, "Hold the Jahn-Teller coupling");
  fh->add_option("--axis", ham.axis, "Defect axis x,y,z")->delimiter(',')->expected(3)->capture_default_str();
  fh->add_option("--field-dir", ham.field_dir, "Field direction x,y,z")->delimiter(',')->expected(3)->capture_default_str();

  MetricsConfig met;
  auto* m = app.add_subcommand("metrics", "Debye-Waller and Huang-Rhys factors from an emission spectrum");
  m->add_option("--input", met.input, "Spectrum CSV (wavelength_nm, counts)")->required();
  m->add_option("--response", met.response, "Detection efficiency CSV (wavelength_nm, efficiency)");
  m->add_option("--background", met.background, "Baseline model")
      ->check(CLI::IsMember({"none", "constant", "linear"}))
      ->capture_default_str();
  m->add_option("--bg-window", met.bg_windows, "Baseline window lo,hi in nm (repeatable)");
  m->add_option("--zpl-window", met.zpl_window, "ZPL window lo,hi in nm")->capture_default_str();
  m->add_option("--total-window", met.total_window, "Total emission window lo,hi in nm")->capture_default_str();
  m->add_option("--axis", met.axis, "Integration variable")
      ->check(CLI::IsMember({"wavelength", "frequency"}))
      ->capture_default_str();
  m->add_option("--out-json", met.out_json, "Report (stdout when omitted)");

  std::string v_schema;
  std::string v_input;
  auto* v = app.add_subcommand("validate", "Check a CSV file against a schema");
  v->add_option("--schema", v_schema, "Schema name")->required()->check(CLI::IsMember(schema_names()));
  v->add_option("--input", v_input, "CSV file")->required();

  SynthConfig syn;
  auto* y = app.add_subcommand("synth", "Write a seeded synthetic dataset");
  y->add_option("kind", syn.kind, "Dataset")
      ->required()
      ->check(CLI::IsMember({"ple", "stark", "decay", "lifetime", "spectrum", "peaks"}));
  y->add_option("--seed", syn.seed, "Noise seed")->capture_default_str();
  y->add_flag("--noiseless", syn.noiseless, "Omit noise");
  y->add_option("--out", syn.out, "CSV path (stdout when omitted)");

  std::vector<std::string> argv_store{"colorcenter"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInput;
  }

  Outputs outputs;
  int code = kExitOk;
  try {
    if (*s) {
      simulate(sim, outputs);
    } else if (*f) {
      if (*fl) fit_lorentzian_cmd(common, outputs, err);
      if (*fs_) fit_stark_cmd(common, stark, outputs, err);
      if (*fd) fit_decay_cmd(common, decay, outputs, err);
      if (*flt) fit_lifetime_cmd(common, life, outputs, err);
      if (*fh) fit_hamiltonian_cmd(common, ham, outputs, err);
    } else if (*m) {
      metrics(met, outputs);
    } else if (*v) {
      code = validate(v_schema, v_input, out, err);
    } else if (*y) {
      synth(syn, outputs);
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const NotConverged& e) {
    err << "error: " << e.what() << '\n';
    return kExitNotConverged;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNotConverged;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  if (code != kExitOk) return code;

  try {
    for (const auto& [path, content] : outputs.files) write_text_file(path, content);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  out << outputs.stdout_text;
  return kExitOk;
}

}  // namespace colorcenter::cli
