#pragma once

#include <string>
#include <vector>

namespace homsim {

/// Normalized spectral amplitude over angular-frequency detuning (rad/fs).
/// The stored quantity is an intensity density with unit L2 norm of the
/// amplitude: integral of amplitude(w)^2 dw = 1 over the support.
class SpectralAmplitude {
public:
    enum class Kind { AnalyticGaussian, Tabulated };

    struct Sample {
        double wavelength_nm;
        double intensity;
    };

    /// Gaussian intensity profile with the given FWHM in wavelength,
    /// converted to detuning about the center. Support is truncated at
    /// +/- 4x the FWHM in detuning.
    static SpectralAmplitude gaussian(double center_wavelength_nm, double fwhm_nm);

    /// Build from measured (wavelength, intensity) rows. Wavelengths must be
    /// strictly monotone; negative intensities are clipped to zero and
    /// counted in `clipped_count` when given.
    static SpectralAmplitude from_samples(const std::vector<Sample>& rows,
                                          double center_wavelength_nm,
                                          int* clipped_count = nullptr);

    /// CSV ingestion: columns `wavelength_nm,intensity`, header optional.
    static SpectralAmplitude from_csv(const std::string& path,
                                      double center_wavelength_nm,
                                      int* clipped_count = nullptr);

    /// Multiply by a rectangular window given in wavelength units and
    /// renormalize. Throws EmptySpectrumError when the window misses the
    /// support entirely.
    SpectralAmplitude with_slit(double window_fwhm_nm, double window_center_nm) const;

    double amplitude(double omega) const;
    double intensity(double omega) const;
    double operator()(double omega) const { return amplitude(omega); }

    Kind kind() const { return kind_; }
    double center_wavelength() const { return center_nm_; }
    double support_lo() const { return support_lo_; }
    double support_hi() const { return support_hi_; }
    /// Metadata FWHM in nm (the requested width for analytic spectra).
    double fwhm_nm() const { return fwhm_nm_; }
    /// FWHM of the intensity profile in detuning units (analytic only).
    double fwhm_omega() const;
    /// RMS detuning of the normalized intensity distribution.
    double rms_detuning() const;

private:
    SpectralAmplitude() = default;
    double base_intensity(double omega) const;
    double base_integral(double lo, double hi) const;
    void renormalize();

    Kind kind_ = Kind::AnalyticGaussian;
    double center_nm_ = 0.0;
    double fwhm_nm_ = 0.0;
    double sigma_ = 0.0; // intensity std-dev in rad/fs (analytic)
    std::vector<double> omega_;     // tabulated nodes, ascending
    std::vector<double> intensity_; // raw (clipped) intensities at nodes
    double support_lo_ = 0.0;
    double support_hi_ = 0.0;
    double scale_ = 1.0; // folds all normalization
};

/// Tensor-product integration grid in (omega_p, omega).
struct FrequencyGrid {
    std::vector<double> omega_p_samples;
    std::vector<double> omega_samples;
};

/// Symmetric cover of a spectrum's support: n points over [-m, m] with
/// m = max(|lo|, |hi|). n == 1 yields the single point {0}.
std::vector<double> symmetric_cover(const SpectralAmplitude& spec, int n);

} // namespace homsim
