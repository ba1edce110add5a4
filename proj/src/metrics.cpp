#include "homsim/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "homsim/errors.hpp"

namespace homsim {

namespace {

double baseline_of(const DipProfile& profile) {
    return profile.normalized ? 1.0 : profile.baseline;
}

struct Minimum {
    double position;
    double value;
};

// Parabolic interpolation through the argmin sample and its neighbors.
Minimum locate_minimum(const DipProfile& profile) {
    const auto& tau = profile.tau_samples;
    const auto& p = profile.probability;
    if (p.size() < 5) throw NoDipError("dip metrics: need at least 5 samples");
    const size_t k = static_cast<size_t>(
        std::min_element(p.begin(), p.end()) - p.begin());
    const double b = baseline_of(profile);
    if (!(p[k] < b - 1e-9 * std::max(1.0, b)))
        throw NoDipError("dip metrics: no sample below the baseline");
    if (k == 0 || k + 1 == p.size()) return {tau[k], p[k]};
    const double dl = tau[k] - tau[k - 1];
    const double dr = tau[k] - tau[k + 1];
    const double num = dl * dl * (p[k] - p[k + 1]) - dr * dr * (p[k] - p[k - 1]);
    const double den = dl * (p[k] - p[k + 1]) - dr * (p[k] - p[k - 1]);
    if (std::abs(den) < 1e-300) return {tau[k], p[k]};
    const double pos = tau[k] - 0.5 * num / den;
    // Newton-form parabola through the three points, evaluated at the vertex.
    const double s1 = (p[k] - p[k - 1]) / (tau[k] - tau[k - 1]);
    const double s2 = (p[k + 1] - p[k]) / (tau[k + 1] - tau[k]);
    const double a2 = (s2 - s1) / (tau[k + 1] - tau[k - 1]);
    const double val = p[k - 1] + s1 * (pos - tau[k - 1]) +
                       a2 * (pos - tau[k - 1]) * (pos - tau[k]);
    return {pos, std::min(val, p[k])};
}

} // namespace

double visibility(const DipProfile& profile) {
    const Minimum m = locate_minimum(profile);
    const double b = baseline_of(profile);
    return (b - m.value) / (b + m.value);
}

double closed_form_visibility(double t, double r, double v_i) {
    if (t < 0.0 || t > 1.0 || r < 0.0 || r > 1.0 || std::abs(t + r - 1.0) > 1e-9)
        throw std::invalid_argument("closed_form_visibility: need T, R in [0,1] with T + R = 1");
    if (v_i < 0.0 || v_i > 1.0)
        throw std::invalid_argument("closed_form_visibility: V_I must lie in [0, 1]");
    const double rt = r * t;
    return rt * v_i * v_i / (1.0 - 2.0 * rt - rt * v_i * v_i);
}

PurityModel purity_relations(PurityInput which, double value) {
    switch (which) {
        case PurityInput::Theta: return PurityModel::from_theta(value);
        case PurityInput::InterferogramVisibility:
            return PurityModel::from_interferogram_visibility(value);
        case PurityInput::Purity: return PurityModel::from_purity(value);
    }
    throw std::invalid_argument("purity_relations: unknown input kind");
}

double fwhm(const DipProfile& profile) {
    const Minimum m = locate_minimum(profile);
    const double b = baseline_of(profile);
    const double level = 0.5 * (b + m.value); // half depth below baseline
    const auto& tau = profile.tau_samples;
    const auto& p = profile.probability;
    const size_t n = p.size();
    if (p.front() < level || p.back() < level)
        throw RangeError("fwhm: half-depth crossings fall outside the sampled range; "
                         "widen the delay grid");
    double left = 0.0, right = 0.0;
    bool found_left = false, found_right = false;
    for (size_t k = 1; k < n; ++k) {
        if (p[k - 1] >= level && p[k] < level) {
            const double f = (p[k - 1] - level) / (p[k - 1] - p[k]);
            left = tau[k - 1] + f * (tau[k] - tau[k - 1]);
            found_left = true;
            break;
        }
    }
    for (size_t k = n - 1; k > 0; --k) {
        if (p[k] >= level && p[k - 1] < level) {
            const double f = (p[k] - level) / (p[k] - p[k - 1]);
            right = tau[k] - f * (tau[k] - tau[k - 1]);
            found_right = true;
            break;
        }
    }
    if (!found_left || !found_right)
        throw RangeError("fwhm: could not bracket the half-depth crossings");
    return right - left;
}

std::vector<Sidelobe> detect_sidelobes(const DipProfile& profile) {
    const double b = baseline_of(profile);
    const auto& tau = profile.tau_samples;
    const auto& p = profile.probability;
    std::vector<Sidelobe> lobes;
    constexpr double eps = 1e-3;
    for (size_t k = 1; k + 1 < p.size(); ++k) {
        const double v = p[k] / b;
        if (p[k] > p[k - 1] && p[k] > p[k + 1] && v > 1.0 + eps)
            lobes.push_back({tau[k], v - 1.0, false});
    }
    // flag symmetric partners
    for (size_t a = 0; a < lobes.size(); ++a) {
        for (size_t c = 0; c < lobes.size(); ++c) {
            if (a == c) continue;
            const double step = tau.size() > 1 ? tau[1] - tau[0] : 0.0;
            if (std::abs(lobes[a].tau + lobes[c].tau) <= 1.5 * step) {
                lobes[a].paired = true;
                lobes[c].paired = true;
            }
        }
    }
    return lobes;
}

DipMetrics dip_metrics(const DipProfile& profile) {
    const Minimum m = locate_minimum(profile);
    DipMetrics out;
    out.baseline = baseline_of(profile);
    out.min_value = m.value;
    out.min_position = m.position;
    out.visibility = (out.baseline - m.value) / (out.baseline + m.value);
    out.fwhm = fwhm(profile);
    out.sidelobes = detect_sidelobes(profile);
    return out;
}

} // namespace homsim
