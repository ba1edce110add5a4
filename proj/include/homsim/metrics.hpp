#pragma once

#include <vector>

#include "homsim/interference.hpp"

namespace homsim {

struct Sidelobe {
    double tau = 0.0;    // fs
    double height = 0.0; // above the (normalized) baseline
    bool paired = false; // has a symmetric partner on the opposite side
};

struct DipMetrics {
    double visibility = 0.0;
    double fwhm = 0.0; // fs
    double baseline = 0.0;
    double min_value = 0.0;
    double min_position = 0.0; // fs
    std::vector<Sidelobe> sidelobes;
};

/// Dip contrast (B - Pmin)/(B + Pmin). The minimum is located by parabolic
/// interpolation through the three lowest adjacent samples. Throws NoDipError
/// when no sample dips below the baseline.
double visibility(const DipProfile& profile);

/// Closed-form HOM visibility from the beam-splitter coefficients and the
/// interferogram visibility: R T V^2 / (1 - 2 R T - R T V^2).
double closed_form_visibility(double t, double r, double v_i);

/// Consistent (theta, V_I, p) triple from any single input.
enum class PurityInput { Theta, InterferogramVisibility, Purity };
PurityModel purity_relations(PurityInput which, double value);

/// Full width at half depth below baseline; crossings located by linear
/// interpolation, outermost crossings used when sidelobes produce several.
double fwhm(const DipProfile& profile);

/// Local maxima above baseline + 1e-3 on the normalized profile.
std::vector<Sidelobe> detect_sidelobes(const DipProfile& profile);

/// All of the above in one pass.
DipMetrics dip_metrics(const DipProfile& profile);

} // namespace homsim
