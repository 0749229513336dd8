#pragma once

#include <string>
#include <vector>

namespace colorcenter {

enum class AxisKind { wavelength_nm, frequency_ghz };

/// Sampled intensity on a strictly ascending axis.
struct SpectrumTrace {
  std::vector<double> x;
  std::vector<double> y;
  AxisKind kind = AxisKind::frequency_ghz;

  [[nodiscard]] std::size_t size() const { return x.size(); }

  /// Throws InputError unless sizes match, x is strictly ascending and all values are finite.
  void validate() const;
};

}  // namespace colorcenter
