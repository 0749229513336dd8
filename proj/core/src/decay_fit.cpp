#include "colorcenter/decay_fit.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "colorcenter/errors.hpp"

namespace colorcenter {

void TimeTrace::validate() const {
  if (t.size() != y.size()) throw InputError("time and intensity columns differ in length");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i]) || !std::isfinite(y[i])) throw InputError("time trace contains non-finite values");
    if (i > 0 && !(t[i] > t[i - 1])) throw InputError("time samples must be strictly ascending");
  }
}

double DecayModel::operator()(double t) const {
  double v = baseline;
  for (std::size_t k = 0; k < amplitudes.size(); ++k) v += amplitudes[k] * std::exp(-(t - t_ref) / time_constants[k]);
  return v;
}

namespace {

struct LogLine {
  double amplitude = 0.0;
  double tau = 0.0;
  bool ok = false;
};

// Least-squares line through log(excess) for samples with usable excess.
LogLine log_linear(std::span<const double> t, std::span<const double> excess, double floor) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(excess[i] > floor)) continue;
    const double ly = std::log(excess[i]);
    sx += t[i];
    sy += ly;
    sxx += t[i] * t[i];
    sxy += t[i] * ly;
    ++n;
  }
  LogLine out;
  if (n < 2) return out;
  const double denom = n * sxx - sx * sx;
  if (denom <= 0.0) return out;
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;
  if (!(slope < 0.0)) return out;
  out.tau = -1.0 / slope;
  out.amplitude = std::exp(intercept);
  out.ok = true;
  return out;
}

}  // namespace

FitResult fit_decay(const TimeTrace& trace, const DecayFitOptions& options) {
  trace.validate();
  if (options.n_components != 1 && options.n_components != 2) {
    throw InputError("decay fits support 1 or 2 components");
  }
  for (double v : trace.y) {
    if (v < 0.0) throw InputError("decay intensities must be nonnegative");
  }

  std::vector<double> t;
  std::vector<double> y;
  for (std::size_t i = 0; i < trace.t.size(); ++i) {
    if (options.window_start && trace.t[i] < *options.window_start) continue;
    if (options.window_end && trace.t[i] > *options.window_end) continue;
    t.push_back(trace.t[i]);
    y.push_back(trace.y[i]);
  }
  const int nc = options.n_components;
  const auto np = static_cast<Eigen::Index>(2 * nc + 1);
  if (static_cast<Eigen::Index>(t.size()) < np + 1) throw InputError("too few samples inside the decay fit window");

  const double t_ref = t.front();
  for (double& v : t) v -= t_ref;
  const double span = t.back();

  const double y_min = *std::min_element(y.begin(), y.end());
  const auto m = static_cast<Eigen::Index>(t.size());
  const auto residual = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r) {
    for (Eigen::Index i = 0; i < m; ++i) {
      const auto k = static_cast<std::size_t>(i);
      double v = p[np - 1];
      for (int c = 0; c < nc; ++c) v += p[2 * c] * std::exp(-t[k] * std::exp(-p[2 * c + 1]));
      r[i] = v - y[k];
    }
  };

  // Parameter vector: [A_1, log tau_1, (A_2, log tau_2,) baseline].
  const auto start_from = [&](double base0, double& max_excess) {
    std::vector<double> excess(y.size());
    max_excess = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      excess[i] = y[i] - base0;
      max_excess = std::max(max_excess, excess[i]);
    }
    const double floor = 0.02 * max_excess;
    Eigen::VectorXd p0(np);
    if (nc == 1) {
      LogLine line = log_linear(t, excess, floor);
      if (!line.ok) line = {0.0, span / 3.0, false};
      p0 << line.amplitude, std::log(line.tau), base0;
    } else {
      const std::size_t half = t.size() / 2;
      LogLine slow = log_linear(std::span(t).subspan(half), std::span(excess).subspan(half), floor * 0.05);
      if (!slow.ok) slow = {max_excess / 2.0, span / 3.0, false};
      std::vector<double> fast_excess(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) fast_excess[i] = excess[i] - slow.amplitude * std::exp(-t[i] / slow.tau);
      const std::size_t quarter = std::max<std::size_t>(t.size() / 4, 3);
      LogLine fast = log_linear(std::span(t).first(quarter), std::span(fast_excess).first(quarter), floor);
      if (!fast.ok || fast.tau >= slow.tau) fast = {max_excess / 2.0, slow.tau / 10.0, false};
      p0 << fast.amplitude, std::log(fast.tau), slow.amplitude, std::log(slow.tau), base0;
    }
    return p0;
  };

  const auto solve_from = [&](double base0) {
    double max_excess = 0.0;
    const Eigen::VectorXd p0 = start_from(base0, max_excess);
    LeastSquaresOptions opts = options.solver;
    if (opts.parameter_scale.empty()) {
      opts.parameter_scale.assign(static_cast<std::size_t>(np), 1.0);
      for (int c = 0; c < nc; ++c) opts.parameter_scale[static_cast<std::size_t>(2 * c)] = std::max(max_excess, 1e-300);
      opts.parameter_scale.back() = std::max({max_excess, std::abs(base0), 1e-300});
    }
    return solve_least_squares(residual, p0, m, opts);
  };

  // Second start from a zero baseline; keep whichever ends lower.
  LeastSquaresResult ls = solve_from(y_min);
  if (y_min > 0.0) {
    LeastSquaresResult alt = solve_from(0.0);
    const auto rank = [](const LeastSquaresResult& r) { return r.converged && !r.rank_deficient ? 0 : 1; };
    if (rank(alt) < rank(ls) || (rank(alt) == rank(ls) && alt.residuals.norm() < ls.residuals.norm())) {
      ls = std::move(alt);
    }
  }

  struct Component {
    double a, sa, tau, stau;
  };
  std::vector<Component> comps;
  for (int c = 0; c < nc; ++c) {
    const double tau = std::exp(ls.params[2 * c + 1]);
    comps.push_back({ls.params[2 * c], ls.std_errors[2 * c], tau, tau * ls.std_errors[2 * c + 1]});
  }
  std::sort(comps.begin(), comps.end(), [](const Component& a, const Component& b) { return a.tau < b.tau; });

  FitResult fit;
  if (nc == 1) {
    fit.names = {"amplitude", "tau", "baseline"};
    fit.values = {comps[0].a, comps[0].tau, ls.params[np - 1]};
    fit.std_errors = {comps[0].sa, comps[0].stau, ls.std_errors[np - 1]};
  } else {
    fit.names = {"amplitude_1", "tau_1", "amplitude_2", "tau_2", "baseline"};
    fit.values = {comps[0].a, comps[0].tau, comps[1].a, comps[1].tau, ls.params[np - 1]};
    fit.std_errors = {comps[0].sa, comps[0].stau, comps[1].sa, comps[1].stau, ls.std_errors[np - 1]};
  }
  fit.r_squared = r_squared(ls.residuals, y);
  fit.residual_norm = ls.residuals.norm();
  fit.iterations = ls.iterations;
  fit.degenerate = ls.rank_deficient;
  fit.converged = ls.converged && !ls.rank_deficient;
  fit.message = fit.degenerate ? "time constants are not identifiable from this trace" : ls.stop_reason;
  return fit;
}

DecayModel decay_model_from_fit(const FitResult& fit, double t_ref) {
  DecayModel model;
  model.t_ref = t_ref;
  model.baseline = fit.value("baseline");
  if (fit.names.size() == 3) {
    model.amplitudes = {fit.value("amplitude")};
    model.time_constants = {fit.value("tau")};
  } else {
    model.amplitudes = {fit.value("amplitude_1"), fit.value("amplitude_2")};
    model.time_constants = {fit.value("tau_1"), fit.value("tau_2")};
  }
  return model;
}

}  // namespace colorcenter
