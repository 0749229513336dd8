#include "colorcenter/spectral_metrics.hpp"

#include <algorithm>
#include <cmath>

#include "colorcenter/constants.hpp"
#include "colorcenter/errors.hpp"

namespace colorcenter {

namespace {

constexpr double kCoverageSlack = 1e-9;

bool covers(const std::vector<double>& x, Window w) {
  const double tol = kCoverageSlack * std::max(std::abs(w.lo), std::abs(w.hi));
  return !x.empty() && x.front() <= w.lo + tol && x.back() >= w.hi - tol;
}

double interpolate(const std::vector<double>& x, const std::vector<double>& y, double at) {
  auto it = std::lower_bound(x.begin(), x.end(), at);
  if (it == x.begin()) return y.front();
  if (it == x.end()) return y.back();
  const auto i = static_cast<std::size_t>(it - x.begin());
  const double f = (at - x[i - 1]) / (x[i] - x[i - 1]);
  return y[i - 1] + f * (y[i] - y[i - 1]);
}

}  // namespace

void SpectrumTrace::validate() const {
  if (x.size() != y.size()) throw InputError("spectrum axis and intensity columns differ in length");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw InputError("spectrum contains non-finite values");
    if (i > 0 && !(x[i] > x[i - 1])) throw InputError("spectrum axis must be strictly ascending");
  }
}

void ResponseCurve::validate() const {
  if (x.size() != efficiency.size()) throw InputError("response axis and efficiency columns differ in length");
  if (x.size() < 2) throw InputError("response curve needs at least 2 samples");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(efficiency[i])) throw InputError("response contains non-finite values");
    if (i > 0 && !(x[i] > x[i - 1])) throw InputError("response axis must be strictly ascending");
  }
}

double ResponseCurve::at(double x_nm) const {
  const double tol = kCoverageSlack * std::abs(x_nm);
  if (x_nm < x.front() - tol || x_nm > x.back() + tol) {
    throw InputError("response curve does not cover " + std::to_string(x_nm) + " nm");
  }
  return interpolate(x, efficiency, x_nm);
}

SpectrumTrace correct_response(const SpectrumTrace& trace, const ResponseCurve& response) {
  trace.validate();
  response.validate();
  SpectrumTrace out = trace;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double eff = response.at(trace.x[i]);
    if (!(eff > 0.0)) throw InputError("response efficiency must be positive on the spectrum support");
    out.y[i] = trace.y[i] / eff;
  }
  return out;
}

SpectrumTrace apply_response(const SpectrumTrace& trace, const ResponseCurve& response) {
  trace.validate();
  response.validate();
  SpectrumTrace out = trace;
  for (std::size_t i = 0; i < out.size(); ++i) out.y[i] = trace.y[i] * response.at(trace.x[i]);
  return out;
}

BackgroundResult subtract_background(const SpectrumTrace& trace, BackgroundMethod method,
                                     const std::vector<Window>& windows) {
  trace.validate();
  std::vector<double> bx;
  std::vector<double> by;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    for (const auto& w : windows) {
      if (trace.x[i] >= w.lo && trace.x[i] <= w.hi) {
        bx.push_back(trace.x[i]);
        by.push_back(trace.y[i]);
        break;
      }
    }
  }
  if (bx.size() < 2) throw InputError("background windows must contain at least 2 samples");

  BackgroundResult res;
  const auto n = static_cast<double>(bx.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < bx.size(); ++i) {
    mx += bx[i];
    my += by[i];
  }
  mx /= n;
  my /= n;
  if (method == BackgroundMethod::linear) {
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < bx.size(); ++i) {
      sxx += (bx[i] - mx) * (bx[i] - mx);
      sxy += (bx[i] - mx) * (by[i] - my);
    }
    if (sxx == 0.0) throw InputError("linear background needs samples at two distinct positions");
    res.slope = sxy / sxx;
  }
  res.offset = my - res.slope * mx;

  res.trace = trace;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    double v = trace.y[i] - (res.offset + res.slope * trace.x[i]);
    if (v < 0.0) {
      v = 0.0;
      ++res.clamped;
    }
    res.trace.y[i] = v;
  }
  return res;
}

double integrate(const SpectrumTrace& trace, Window window) {
  const auto& x = trace.x;
  const auto& y = trace.y;
  if (x.size() < 2 || window.hi <= window.lo) return 0.0;
  const double lo = std::max(window.lo, x.front());
  const double hi = std::min(window.hi, x.back());
  if (hi <= lo) return 0.0;

  double total = 0.0;
  double prev_x = lo;
  double prev_y = interpolate(x, y, lo);
  auto it = std::upper_bound(x.begin(), x.end(), lo);
  for (; it != x.end() && *it < hi; ++it) {
    const double cy = y[static_cast<std::size_t>(it - x.begin())];
    total += 0.5 * (prev_y + cy) * (*it - prev_x);
    prev_x = *it;
    prev_y = cy;
  }
  total += 0.5 * (prev_y + interpolate(x, y, hi)) * (hi - prev_x);
  return total;
}

double debye_waller(const SpectrumTrace& trace, Window zpl_nm, Window total_nm, IntegrationAxis axis) {
  trace.validate();
  if (trace.kind != AxisKind::wavelength_nm) throw InputError("Debye-Waller factor expects a wavelength spectrum");
  if (!(zpl_nm.lo < zpl_nm.hi) || !(total_nm.lo < total_nm.hi)) throw InputError("windows must have lo < hi");
  if (zpl_nm.lo < total_nm.lo || zpl_nm.hi > total_nm.hi) throw InputError("ZPL window must lie inside the total window");
  if (!covers(trace.x, total_nm)) throw InputError("spectrum does not cover the total integration window");

  double zpl = 0.0;
  double total = 0.0;
  if (axis == IntegrationAxis::wavelength) {
    zpl = integrate(trace, zpl_nm);
    total = integrate(trace, total_nm);
  } else {
    SpectrumTrace f;
    f.kind = AxisKind::frequency_ghz;
    for (std::size_t i = trace.size(); i-- > 0;) {
      const double lam = trace.x[i];
      f.x.push_back(constants::nm_to_ghz(lam));
      f.y.push_back(trace.y[i] * lam * lam / constants::kSpeedOfLightNmGHz);
    }
    const auto to_freq = [](Window w) { return Window{constants::nm_to_ghz(w.hi), constants::nm_to_ghz(w.lo)}; };
    zpl = integrate(f, to_freq(zpl_nm));
    total = integrate(f, to_freq(total_nm));
  }
  if (total == 0.0) throw InputError("total emission integral is zero");
  return zpl / total;
}

double huang_rhys(double debye_waller_factor) {
  if (!(debye_waller_factor > 0.0) || debye_waller_factor > 1.0) {
    throw InputError("Debye-Waller factor must lie in (0, 1]");
  }
  return debye_waller_factor == 1.0 ? 0.0 : -std::log(debye_waller_factor);
}

double lifetime_limited_linewidth_mhz(double tau_ns) {
  if (!(tau_ns > 0.0)) throw InputError("lifetime must be positive");
  return 1e3 / (2.0 * constants::kPi * tau_ns);
}

}  // namespace colorcenter
