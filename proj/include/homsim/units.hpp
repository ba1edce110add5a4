#pragma once

namespace homsim {

// Speed of light in nm/fs; keeps wavelength<->detuning conversions unit-safe.
inline constexpr double c_nm_per_fs = 299.792458;

inline constexpr double pi = 3.14159265358979323846;

// Linearized wavelength -> angular-frequency detuning about a carrier.
// Shorter wavelength maps to positive detuning.
inline double detuning_from_wavelength(double wavelength_nm, double center_nm) {
    return 2.0 * pi * c_nm_per_fs * (center_nm - wavelength_nm) / (center_nm * center_nm);
}

inline double wavelength_from_detuning(double omega_rad_fs, double center_nm) {
    return center_nm - omega_rad_fs * center_nm * center_nm / (2.0 * pi * c_nm_per_fs);
}

// FWHM conversion for a narrow band centered on `center_nm`.
inline double fwhm_nm_to_omega(double fwhm_nm, double center_nm) {
    return 2.0 * pi * c_nm_per_fs * fwhm_nm / (center_nm * center_nm);
}

} // namespace homsim
