#include "colorcenter/spectrum_simulator.hpp"

#include <algorithm>
#include <cmath>

#include "colorcenter/eigensolve.hpp"
#include "colorcenter/errors.hpp"

namespace colorcenter {

namespace {

constexpr double kFwhmToSigma = 0.42466090014400953;  // 1 / (2 sqrt(2 ln 2))

double spin_overlap(const ComplexMatrix& ground_vecs, int g, const ComplexMatrix& excited_vecs, int e) {
  double total = 0.0;
  for (int orbital = 0; orbital < 2; ++orbital) {
    std::complex<double> amp{};
    for (int spin = 0; spin < 2; ++spin) {
      amp += std::conj(excited_vecs(spin, e)) * ground_vecs(2 * orbital + spin, g);
    }
    total += std::norm(amp);
  }
  return total;
}

}  // namespace

double LineProfile::evaluate(double dx) const {
  if (shape == Shape::lorentzian) {
    const double hw = fwhm_ghz / 2.0;
    return hw * hw / (dx * dx + hw * hw);
  }
  const double sigma = fwhm_ghz * kFwhmToSigma;
  return std::exp(-0.5 * dx * dx / (sigma * sigma));
}

double LineProfile::area() const {
  if (shape == Shape::lorentzian) return constants::kPi * fwhm_ghz / 2.0;
  return fwhm_ghz * kFwhmToSigma * std::sqrt(2.0 * constants::kPi);
}

double orientation_angle_deg(const Vec3& field_dir, const Vec3& axis) {
  const double na = field_dir.norm();
  const double nb = axis.norm();
  if (na == 0.0 || nb == 0.0) throw InputError("orientation angle needs nonzero vectors");
  // atan2 form stays accurate near 0 and 180 degrees.
  const double angle = std::atan2(field_dir.cross(axis).norm(), field_dir.dot(axis));
  return angle * 180.0 / constants::kPi;
}

std::vector<TransitionLine> transition_lines(const DefectParameters& params, const FieldConfig& field,
                                             IntensityModel model) {
  const EigenSystem ground = eigensolve(assemble_ground(params, field));
  const EigenSystem excited = eigensolve(assemble_excited(params, field));

  std::vector<TransitionLine> lines;
  lines.reserve(kLineCount);
  for (int e = 0; e < kExcitedDim; ++e) {
    for (int g = 0; g < kGroundDim; ++g) {
      TransitionLine line;
      line.freq_offset_ghz = excited.values[e] - ground.values[g];
      line.ground_index = g;
      line.excited_index = e;
      line.intensity = model == IntensityModel::uniform ? 1.0
                                                        : spin_overlap(ground.vectors, g, excited.vectors, e);
      lines.push_back(line);
    }
  }

  double peak = 0.0;
  for (const auto& l : lines) peak = std::max(peak, l.intensity);
  if (peak > 0.0) {
    for (auto& l : lines) l.intensity /= peak;
  }
  return lines;
}

FieldSweep field_sweep(const DefectParameters& params, const Vec3& axis, const Vec3& field_dir,
                       std::span<const double> b_values_tesla, IntensityModel model) {
  if (b_values_tesla.empty()) throw InputError("field sweep needs at least one field value");
  for (std::size_t i = 1; i < b_values_tesla.size(); ++i) {
    if (!(b_values_tesla[i] > b_values_tesla[i - 1])) throw InputError("field values must be strictly ascending");
  }
  FieldSweep sweep;
  sweep.angle_to_axis_deg = orientation_angle_deg(field_dir, axis);
  const Vec3 dir = field_dir.normalized();
  sweep.b_tesla.assign(b_values_tesla.begin(), b_values_tesla.end());
  sweep.lines_per_field.reserve(b_values_tesla.size());
  for (double b : b_values_tesla) {
    sweep.lines_per_field.push_back(transition_lines(params, FieldConfig(b * dir, axis), model));
  }
  return sweep;
}

std::array<Vec3, 4> diamond_111_axes() {
  return {Vec3(1, 1, 1).normalized(), Vec3(1, -1, -1).normalized(), Vec3(-1, 1, -1).normalized(),
          Vec3(-1, -1, 1).normalized()};
}

std::vector<FieldSweep> orientation_ensemble(const DefectParameters& params, const Vec3& field_dir,
                                             std::span<const double> b_values_tesla, IntensityModel model) {
  std::vector<FieldSweep> out;
  for (const Vec3& axis : diamond_111_axes()) {
    FieldSweep s = field_sweep(params, axis, field_dir, b_values_tesla, model);
    for (auto& lines : s.lines_per_field) {
      for (auto& l : lines) l.intensity *= 0.25;
    }
    out.push_back(std::move(s));
  }
  return out;
}

SpectrumTrace render_spectrum(std::span<const TransitionLine> lines, const LineProfile& profile,
                              std::span<const double> grid_ghz) {
  if (!(profile.fwhm_ghz > 0.0)) throw InputError("line profile FWHM must be positive");
  SpectrumTrace trace;
  trace.kind = AxisKind::frequency_ghz;
  trace.x.assign(grid_ghz.begin(), grid_ghz.end());
  trace.y.assign(grid_ghz.size(), 0.0);
  for (std::size_t i = 1; i < grid_ghz.size(); ++i) {
    if (!(grid_ghz[i] > grid_ghz[i - 1])) throw InputError("render grid must be strictly ascending");
  }
  for (const auto& line : lines) {
    for (std::size_t i = 0; i < grid_ghz.size(); ++i) {
      trace.y[i] += line.intensity * profile.evaluate(grid_ghz[i] - line.freq_offset_ghz);
    }
  }
  return trace;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + step * static_cast<double>(i);
  if (n > 1) out.back() = hi;
  return out;
}

}  // namespace colorcenter
