#pragma once

#include <string>
#include <vector>

namespace homsim {

/// Polynomial spectral phase of a single optical element, expanded to third
/// order about the carrier: phi(w) = b0 + b1 w + b2/2 w^2 + b3/6 w^3.
struct PhaseExpansion {
    double beta0 = 0.0; // rad
    double beta1 = 0.0; // fs
    double beta2 = 0.0; // fs^2
    double beta3 = 0.0; // fs^3
    std::string label = "custom";

    double eval(double omega) const {
        return beta0 + omega * (beta1 + omega * (beta2 / 2.0 + omega * beta3 / 6.0));
    }

    PhaseExpansion& operator+=(const PhaseExpansion& o) {
        beta0 += o.beta0;
        beta1 += o.beta1;
        beta2 += o.beta2;
        beta3 += o.beta3;
        return *this;
    }
};

/// One photon path: the signal composes fiber + 4F + SLM, the idler its fiber.
struct ChannelPhase {
    std::vector<PhaseExpansion> elements;
};

struct DispersionTotals {
    double tau = 0.0;      // fs, beta1 difference signal - idler
    double beta2_tot = 0.0; // fs^2
    double beta3_tot = 0.0; // fs^3
};

struct MaterialDispersion {
    std::string name;
    double d2 = 0.0; // fs^2/mm
    double d3 = 0.0; // fs^3/mm
};

/// 1D liquid-crystal mask on the Fourier plane of the 4F line.
struct SlmGeometry {
    int pixel_count = 640;
    double pixel_pitch_mm = 0.1;            // 100 um/pixel
    double nm_per_mm = 3.62 / 2.0;          // slit calibration: 3.62 nm per 2 mm
    double center_pixel = 319.5;            // index mapped to the carrier
};

/// Coefficient-wise sum over a channel's elements.
PhaseExpansion total_phase(const ChannelPhase& ch);

/// Delay and dispersion totals entering the expanded coincidence integral.
/// Only coefficient differences between the paths survive; beta0 cancels.
DispersionTotals dispersion_totals(const ChannelPhase& signal, const ChannelPhase& idler);

/// beta^(k) = d^(k) * length.
double material_beta(const MaterialDispersion& m, double length_mm, int order);

/// Second- and third-order phase terms of the expanded integrand.
struct PhaseTerms {
    double phi2; // rad
    double phi3; // rad
};
PhaseTerms phase_term_values(double beta2_tot, double beta3_tot, double omega_p, double omega);

/// Per-pixel phase table for the SLM: the polynomial evaluated at each
/// pixel-center detuning, constant across the pixel.
std::vector<double> slm_quantize(const PhaseExpansion& target, const SlmGeometry& geom,
                                 double center_wavelength_nm, bool wrap = false);

/// Detuning at a pixel center (affine Fourier-plane calibration).
double slm_pixel_detuning(const SlmGeometry& geom, int pixel, double center_wavelength_nm);

/// Material catalog bundled as CSV `name,d2_fs2_per_mm,d3_fs3_per_mm`.
std::vector<MaterialDispersion> load_material_catalog(const std::string& path);
const MaterialDispersion& find_material(const std::vector<MaterialDispersion>& catalog,
                                        const std::string& name);

/// Catalog shipped with the simulator (fused silica, ZnSe).
const std::vector<MaterialDispersion>& builtin_materials();

} // namespace homsim
