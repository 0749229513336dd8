#pragma once

// CODATA 2018 exact / recommended values, SI units.
namespace colorcenter::constants {

inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double kPlanck = 6.62607015e-34;                // J s
inline constexpr double kBohrMagneton = 9.2740100783e-24;        // J / T
inline constexpr double kSpeedOfLight = 299792458.0;             // m / s
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F / m
inline constexpr double kDebye = 1e-21 / kSpeedOfLight;          // C m

/// mu_B / h in GHz/T (13.996 GHz/T).
inline constexpr double kBohrMagnetonGHzPerTesla = kBohrMagneton / kPlanck * 1e-9;

/// nu[GHz] = kSpeedOfLightNmGHz / lambda[nm]
inline constexpr double kSpeedOfLightNmGHz = kSpeedOfLight;

inline double nm_to_ghz(double wavelength_nm) { return kSpeedOfLightNmGHz / wavelength_nm; }
inline double ghz_to_nm(double frequency_ghz) { return kSpeedOfLightNmGHz / frequency_ghz; }

}  // namespace colorcenter::constants
