#include "homsim/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "homsim/errors.hpp"
#include "homsim/units.hpp"

namespace homsim {

namespace {
constexpr double fwhm_to_sigma = 2.3548200450309493; // 2*sqrt(2 ln 2)
}

SpectralAmplitude SpectralAmplitude::gaussian(double center_wavelength_nm, double fwhm_nm) {
    if (fwhm_nm <= 0.0 || center_wavelength_nm <= 0.0)
        throw std::invalid_argument("gaussian spectrum: center wavelength and FWHM must be positive");
    SpectralAmplitude s;
    s.kind_ = Kind::AnalyticGaussian;
    s.center_nm_ = center_wavelength_nm;
    s.fwhm_nm_ = fwhm_nm;
    const double fwhm_w = fwhm_nm_to_omega(fwhm_nm, center_wavelength_nm);
    s.sigma_ = fwhm_w / fwhm_to_sigma;
    s.support_lo_ = -4.0 * fwhm_w;
    s.support_hi_ = 4.0 * fwhm_w;
    s.renormalize();
    return s;
}

SpectralAmplitude SpectralAmplitude::from_samples(const std::vector<Sample>& rows,
                                                 double center_wavelength_nm,
                                                 int* clipped_count) {
    if (rows.size() < 3)
        throw MalformedInputError("from_samples: need at least 3 rows");
    const bool increasing = rows[1].wavelength_nm > rows[0].wavelength_nm;
    for (size_t i = 1; i < rows.size(); ++i) {
        const double d = rows[i].wavelength_nm - rows[i - 1].wavelength_nm;
        if ((increasing && d <= 0.0) || (!increasing && d >= 0.0))
            throw MalformedInputError("from_samples: wavelengths must be strictly monotone (row " +
                                      std::to_string(i + 1) + ")");
    }
    SpectralAmplitude s;
    s.kind_ = Kind::Tabulated;
    s.center_nm_ = center_wavelength_nm;
    int clipped = 0;
    s.omega_.reserve(rows.size());
    s.intensity_.reserve(rows.size());
    for (const auto& r : rows) {
        double v = r.intensity;
        if (v < 0.0) {
            v = 0.0;
            ++clipped;
        }
        s.omega_.push_back(detuning_from_wavelength(r.wavelength_nm, center_wavelength_nm));
        s.intensity_.push_back(v);
    }
    // Decreasing wavelength maps to increasing detuning.
    if (s.omega_.front() > s.omega_.back()) {
        std::reverse(s.omega_.begin(), s.omega_.end());
        std::reverse(s.intensity_.begin(), s.intensity_.end());
    }
    s.support_lo_ = s.omega_.front();
    s.support_hi_ = s.omega_.back();
    s.renormalize();
    if (clipped_count) *clipped_count = clipped;
    return s;
}

SpectralAmplitude SpectralAmplitude::from_csv(const std::string& path,
                                              double center_wavelength_nm,
                                              int* clipped_count) {
    std::ifstream in(path);
    if (!in) throw MalformedInputError("cannot open spectrum file: " + path);
    std::vector<Sample> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        std::istringstream ss(line);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b)) {
            if (lineno == 1) continue; // tolerate a malformed header line
            throw MalformedInputError(path + ": row " + std::to_string(lineno) +
                                      ": expected two comma-separated columns");
        }
        char* end = nullptr;
        const double wl = std::strtod(a.c_str(), &end);
        if (end == a.c_str()) {
            if (lineno == 1) continue; // header
            throw MalformedInputError(path + ": row " + std::to_string(lineno) +
                                      ": cannot parse wavelength '" + a + "'");
        }
        const double iv = std::strtod(b.c_str(), &end);
        if (end == b.c_str())
            throw MalformedInputError(path + ": row " + std::to_string(lineno) +
                                      ": cannot parse intensity '" + b + "'");
        rows.push_back({wl, iv});
    }
    if (rows.size() < 3)
        throw MalformedInputError(path + ": need at least 3 data rows, got " +
                                  std::to_string(rows.size()));
    try {
        return from_samples(rows, center_wavelength_nm, clipped_count);
    } catch (const MalformedInputError& e) {
        throw MalformedInputError(path + ": " + e.what());
    }
}

SpectralAmplitude SpectralAmplitude::with_slit(double window_fwhm_nm,
                                               double window_center_nm) const {
    if (window_fwhm_nm <= 0.0)
        throw std::invalid_argument("with_slit: window FWHM must be positive");
    // Window edges in wavelength, then mapped to detuning (order flips).
    const double wl_lo = window_center_nm - 0.5 * window_fwhm_nm;
    const double wl_hi = window_center_nm + 0.5 * window_fwhm_nm;
    double w_lo = detuning_from_wavelength(wl_hi, center_nm_);
    double w_hi = detuning_from_wavelength(wl_lo, center_nm_);
    SpectralAmplitude s = *this;
    s.support_lo_ = std::max(support_lo_, w_lo);
    s.support_hi_ = std::min(support_hi_, w_hi);
    if (s.support_lo_ >= s.support_hi_)
        throw EmptySpectrumError("with_slit: window does not overlap the spectral support");
    s.renormalize();
    return s;
}

double SpectralAmplitude::base_intensity(double omega) const {
    if (kind_ == Kind::AnalyticGaussian) {
        const double z = omega / sigma_;
        return std::exp(-0.5 * z * z) / (sigma_ * std::sqrt(2.0 * pi));
    }
    // Linear interpolation in intensity between tabulated nodes.
    if (omega <= omega_.front()) return omega == omega_.front() ? intensity_.front() : 0.0;
    if (omega >= omega_.back()) return omega == omega_.back() ? intensity_.back() : 0.0;
    const auto it = std::upper_bound(omega_.begin(), omega_.end(), omega);
    const size_t i = static_cast<size_t>(it - omega_.begin());
    const double t = (omega - omega_[i - 1]) / (omega_[i] - omega_[i - 1]);
    return intensity_[i - 1] + t * (intensity_[i] - intensity_[i - 1]);
}

double SpectralAmplitude::base_integral(double lo, double hi) const {
    if (lo >= hi) return 0.0;
    if (kind_ == Kind::AnalyticGaussian) {
        const double r = std::sqrt(2.0) * sigma_;
        return 0.5 * (std::erf(hi / r) - std::erf(lo / r));
    }
    // Exact integral of the piecewise-linear intensity clipped to [lo, hi].
    double acc = 0.0;
    for (size_t i = 1; i < omega_.size(); ++i) {
        double a = std::max(omega_[i - 1], lo);
        double b = std::min(omega_[i], hi);
        if (a >= b) continue;
        const double fa = base_intensity(a);
        const double fb = base_intensity(b);
        acc += 0.5 * (fa + fb) * (b - a);
    }
    return acc;
}

void SpectralAmplitude::renormalize() {
    const double m = base_integral(support_lo_, support_hi_);
    if (m <= 0.0) throw EmptySpectrumError("spectrum has zero total intensity over its support");
    scale_ = 1.0 / m;
}

double SpectralAmplitude::intensity(double omega) const {
    if (omega < support_lo_ || omega > support_hi_) return 0.0;
    return scale_ * base_intensity(omega);
}

double SpectralAmplitude::amplitude(double omega) const {
    return std::sqrt(intensity(omega));
}

double SpectralAmplitude::fwhm_omega() const {
    return sigma_ * fwhm_to_sigma;
}

double SpectralAmplitude::rms_detuning() const {
    if (kind_ == Kind::AnalyticGaussian && support_lo_ == -support_hi_ &&
        support_hi_ >= 4.0 * sigma_)
        return sigma_;
    // Numeric second moment over the support.
    const int n = 8193;
    const double h = (support_hi_ - support_lo_) / (n - 1);
    double m1 = 0.0, m2 = 0.0, m0 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double w = support_lo_ + i * h;
        const double wt = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        const double v = intensity(w) * wt;
        m0 += v;
        m1 += v * w;
        m2 += v * w * w;
    }
    m1 /= m0;
    m2 /= m0;
    return std::sqrt(std::max(0.0, m2 - m1 * m1));
}

std::vector<double> symmetric_cover(const SpectralAmplitude& spec, int n) {
    if (n < 1) throw std::invalid_argument("symmetric_cover: need at least 1 point");
    if (n == 1) return {0.0};
    const double m = std::max(std::abs(spec.support_lo()), std::abs(spec.support_hi()));
    std::vector<double> g(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) g[static_cast<size_t>(i)] = -m + 2.0 * m * i / (n - 1);
    return g;
}

} // namespace homsim
