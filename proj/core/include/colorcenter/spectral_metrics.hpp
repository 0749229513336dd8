#pragma once

#include <utility>
#include <vector>

#include "colorcenter/spectrum_trace.hpp"

namespace colorcenter {

/// Detection efficiency versus wavelength (nm), linearly interpolated.
struct ResponseCurve {
  std::vector<double> x;
  std::vector<double> efficiency;

  void validate() const;
  /// Linear interpolation; throws InputError outside [x.front(), x.back()].
  [[nodiscard]] double at(double x_nm) const;
};

/// y_i / efficiency(x_i). Throws InputError when the response does not cover
/// the trace or is not strictly positive there.
SpectrumTrace correct_response(const SpectrumTrace& trace, const ResponseCurve& response);

/// y_i * efficiency(x_i); inverse of correct_response.
SpectrumTrace apply_response(const SpectrumTrace& trace, const ResponseCurve& response);

enum class BackgroundMethod { constant, linear };

struct Window {
  double lo = 0.0;
  double hi = 0.0;
};

struct BackgroundResult {
  SpectrumTrace trace;
  double offset = 0.0;
  double slope = 0.0;  // zero for the constant method
  int clamped = 0;     // samples that went negative and were set to zero
};

/// Estimates a constant or linear baseline from the samples inside `windows`
/// and subtracts it. Throws InputError when the windows hold fewer than 2 samples.
BackgroundResult subtract_background(const SpectrumTrace& trace, BackgroundMethod method,
                                     const std::vector<Window>& windows);

/// Trapezoidal integral of y over [lo, hi], interpolating linearly at the edges.
double integrate(const SpectrumTrace& trace, Window window);

enum class IntegrationAxis { wavelength, frequency };

/// Fraction of emission inside the ZPL window: integral(zpl) / integral(total).
///
/// Windows are in nm on a wavelength trace. With IntegrationAxis::frequency the
/// spectral density is converted to per-GHz (y * lambda^2 / c) and integrated
/// over frequency instead.
double debye_waller(const SpectrumTrace& trace, Window zpl_nm = {882.0, 886.0}, Window total_nm = {882.0, 1100.0},
                    IntegrationAxis axis = IntegrationAxis::wavelength);

/// S = -ln(DW) for DW in (0, 1].
double huang_rhys(double debye_waller_factor);

/// 1 / (2 pi tau) in MHz for tau in ns.
double lifetime_limited_linewidth_mhz(double tau_ns);

}  // namespace colorcenter
