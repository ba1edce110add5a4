// Release gate: ten independent end-to-end checks, one pass/fail line each.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "homsim/interference.hpp"
#include "homsim/inverse.hpp"
#include "homsim/metrics.hpp"
#include "homsim/phase.hpp"

using namespace homsim;

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return v;
}

InterferometerConfig make_config(double pump_fwhm_nm, double pdc_fwhm_nm,
                                 std::optional<double> slit_nm = std::nullopt) {
    SpectralAmplitude pdc = SpectralAmplitude::gaussian(811.0, pdc_fwhm_nm);
    if (slit_nm) pdc = pdc.with_slit(*slit_nm, 811.0);
    return {SpectralAmplitude::gaussian(405.5, pump_fwhm_nm),
            std::move(pdc),
            BeamSplitter{0.467, 0.533},
            PurityModel::from_purity(0.913),
            {},
            {}};
}

InterferometerConfig s1() { return make_config(1.0, 20.0); }
InterferometerConfig s2() { return make_config(0.5, 20.0); }
InterferometerConfig s3() { return make_config(1.0, 20.0, 10.0); }

bool check_contrast() {
    const double cf = closed_form_visibility(0.467, 0.533, 0.956);
    if (std::abs(cf - 0.828) > 0.001) return false;
    auto cfg = s1();
    cfg.purity = PurityModel::from_interferogram_visibility(0.956);
    const DipProfile prof = dip_profile(cfg, 0.0, 0.0, linspace(-300.0, 300.0, 301));
    const double v = visibility(prof);
    return std::abs(v - 0.82) <= 0.02;
}

bool check_purity_relations() {
    const auto m = purity_relations(PurityInput::Theta, 17.2);
    return std::abs(m.p - 0.913) <= 0.001 && std::abs(m.v_i - 0.955) <= 0.001;
}

bool check_material_anchors() {
    const auto& cat = builtin_materials();
    const double b2 = material_beta(find_material(cat, "fused_silica"), 850.0, 2);
    const double b3 = material_beta(find_material(cat, "znse"), 350.0, 3);
    return b2 == 29750.0 && b3 == 304500.0;
}

bool check_monochromatic_immunity() {
    InterferometerConfig cfg{std::nullopt,
                             SpectralAmplitude::gaussian(811.0, 20.0),
                             BeamSplitter{0.467, 0.533},
                             PurityModel::from_purity(1.0),
                             {},
                             {}};
    const auto grid = linspace(-200.0, 200.0, 201);
    const DipProfile a = dip_profile(cfg, 0.0, 0.0, grid);
    const DipProfile b = dip_profile(cfg, 35.2e3, 0.0, grid);
    double sup = 0.0;
    for (size_t k = 0; k < grid.size(); ++k)
        sup = std::max(sup, std::abs(a.probability[k] - b.probability[k]));
    return sup < 1e-10;
}

bool check_sweep_orderings() {
    const std::vector<double> b2_values = {0.0, 17.6e3, 35.2e3};
    const auto sw1 = sweep(s1(), SweepAxis::Beta2, b2_values);
    for (int k = 0; k < 2; ++k) {
        if (!(sw1.visibility[k] > sw1.visibility[k + 1])) return false;
        if (!(sw1.fwhm[k] < sw1.fwhm[k + 1])) return false;
    }
    const auto sw2 = sweep(s2(), SweepAxis::Beta2, b2_values);
    const double drop1 = sw1.visibility.front() - sw1.visibility.back();
    const double drop2 = sw2.visibility.front() - sw2.visibility.back();
    if (!(drop2 < drop1)) return false;

    const std::vector<double> b3_values = {0.0, 17.6e4, 35.2e4};
    const auto sw3 = sweep(s3(), SweepAxis::Beta3, b3_values);
    const double vis_change =
        std::abs(sw3.visibility.front() - sw3.visibility.back());
    const double fwhm_change =
        std::abs(sw3.fwhm.back() - sw3.fwhm.front()) / sw3.fwhm.front();
    if (vis_change > 0.02 || fwhm_change > 0.05) return false;

    const auto sw1b3 = sweep(s1(), SweepAxis::Beta3, b3_values);
    const auto sw2b3 = sweep(s2(), SweepAxis::Beta3, b3_values);
    for (size_t k = 0; k < b3_values.size(); ++k)
        if (std::abs(sw1b3.visibility[k] - sw2b3.visibility[k]) > 0.01) return false;
    return true;
}

bool check_sidelobes() {
    auto cut = s3();
    cut.n_omega = 801;
    const DipProfile rect = dip_profile(cut, 0.0, 0.0, linspace(-1000.0, 1000.0, 1001));
    const auto lobes = detect_sidelobes(rect);
    if (lobes.empty()) return false;
    for (const auto& l : lobes)
        if (!l.paired) return false;
    const DipProfile smooth = dip_profile(s1(), 0.0, 0.0, linspace(-1000.0, 1000.0, 1001));
    return detect_sidelobes(smooth).empty();
}

bool check_oracles() {
    auto cfg = s1();
    cfg.signal.elements.push_back({0.0, 10.0, 1.8e4, 9.0e4, "fiber"});
    const auto t = dispersion_totals(cfg.signal, cfg.idler);
    for (double tau : {-30.0, 0.0, 45.0}) {
        const double general = coincidence_probability_general(cfg, tau);
        const double expanded =
            coincidence_probability_expanded(cfg, t.beta2_tot, t.beta3_tot, tau + t.tau);
        if (std::abs(general - expanded) > 1e-8) return false;
    }

    auto fine = s1();
    fine.n_omega = 2 * fine.n_omega - 1;
    fine.n_omega_p = 2 * fine.n_omega_p - 1;
    const double v1 = coincidence_probability_expanded(s1(), 1.76e4, 1.0e5, 20.0);
    const double v2 = coincidence_probability_expanded(fine, 1.76e4, 1.0e5, 20.0);
    if (std::abs(v1 - v2) >= 1e-4) return false;

    InterferometerConfig mono{std::nullopt,
                              SpectralAmplitude::gaussian(811.0, 20.0),
                              BeamSplitter{0.5, 0.5},
                              PurityModel::from_purity(1.0),
                              {},
                              {}};
    const double sigma = mono.pdc.rms_detuning();
    const DipProfile dip = dip_profile(mono, 0.0, 0.0, linspace(-120.0, 120.0, 481));
    const double want = std::sqrt(2.0 * std::log(2.0)) / sigma;
    return std::abs(fwhm(dip) - want) <= 0.02 * want;
}

bool check_compensation() {
    const double b2 = 30.0e3, b3 = 3.0e5;
    SearchBox box{-b2 - 1.5e4, -b2 + 1.5e4, -b3 - 1.5e5, -b3 + 1.5e5};
    const auto res = compensate(s1(), b2, b3, Objective::MaximizeVisibility, box);
    if (std::abs(res.slm.beta2 + b2) > 0.01 * b2) return false;
    if (std::abs(res.slm.beta3 + b3) > 0.01 * b3) return false;
    const auto clean = metrics_auto(s1(), 0.0, 0.0);
    return std::abs(res.objective - clean.visibility) <= 0.005;
}

bool check_fit_round_trip() {
    auto base = s1();
    const double b2 = 20.0e3, b3 = 1.0e5, tau0 = 30.0, p = 0.90;
    auto truth = base;
    truth.purity = PurityModel::from_purity(p);
    const auto tau = linspace(-400.0, 400.0, 41);
    std::vector<double> shifted(tau.size());
    for (size_t k = 0; k < tau.size(); ++k) shifted[k] = tau[k] - tau0;
    DipProfile measured = dip_profile(truth, b2, b3, shifted);
    measured.tau_samples = tau;

    const auto fit = fit_dip(measured, base, FitOptions{true, true, true, true});
    return std::abs(fit.beta2 - b2) <= 0.02 * b2 && std::abs(fit.beta3 - b3) <= 0.02 * b3 &&
           std::abs(fit.tau0 - tau0) <= 0.02 * tau0 && std::abs(fit.p - p) <= 0.02 * p;
}

bool check_invariants() {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const bool mono = u(rng) < 0.25;
        const double t = 0.3 + 0.4 * u(rng);
        const double q = 0.5 + 0.5 * u(rng);
        InterferometerConfig cfg{mono ? std::optional<SpectralAmplitude>{}
                                      : SpectralAmplitude::gaussian(405.5, 0.3 + 1.2 * u(rng)),
                                 SpectralAmplitude::gaussian(811.0, 8.0 + 24.0 * u(rng)),
                                 BeamSplitter{t, 1.0 - t},
                                 PurityModel::from_purity(q),
                                 {},
                                 {},
                                 101,
                                 mono ? 1 : 41};
        const double b2 = (u(rng) - 0.5) * 4.0e4;
        const double b3 = (u(rng) - 0.5) * 4.0e5;
        const double tau = (u(rng) - 0.5) * 300.0;
        const double p = coincidence_probability_expanded(cfg, b2, b3, tau);
        if (!(p >= -1e-9 && p <= 2.0 + 1e-9)) return false;

        auto off = cfg;
        off.signal.elements.push_back({2.2, 0.0, 0.0, 0.0, "custom"});
        if (coincidence_probability_expanded(off, b2, b3, tau) != p) return false;

        auto swapped = cfg;
        std::swap(swapped.bs.t, swapped.bs.r);
        if (std::abs(coincidence_probability_expanded(swapped, b2, b3, tau) - p) > 1e-10)
            return false;
        if (std::abs(coincidence_probability_expanded(cfg, -b2, -b3, -tau) - p) > 1e-10)
            return false;

        auto pure = cfg;
        pure.purity = PurityModel::from_purity(1.0);
        const double p1 = coincidence_probability_expanded(pure, b2, b3, tau);
        if (std::abs(p - (q * p1 + 0.5 * (1.0 - q))) > 1e-11) return false;

        const auto grid = linspace(-200.0, 200.0, 21);
        const DipProfile raw = dip_profile(cfg, b2, b3, grid, false);
        const DipProfile norm = dip_profile(cfg, b2, b3, grid, true);
        const double base = analytic_baseline(cfg.bs, cfg.purity);
        for (size_t k = 0; k < grid.size(); ++k)
            if (std::abs(norm.probability[k] - raw.probability[k] / base) > 1e-12) return false;
    }
    return true;
}

struct Criterion {
    const char* name;
    std::function<bool()> run;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"closed-form and simulated dip contrast", check_contrast},
        {"purity relations from the mismatch angle", check_purity_relations},
        {"material dispersion anchors", check_material_anchors},
        {"monochromatic-pump immunity to quadratic phase", check_monochromatic_immunity},
        {"dispersion sweep orderings across configurations", check_sweep_orderings},
        {"sidelobes from a rectangular spectral cut", check_sidelobes},
        {"engine oracles: expanded vs general, grid doubling, analytic width",
         check_oracles},
        {"compensation recovers the negated channel dispersion", check_compensation},
        {"four-parameter fit round trip", check_fit_round_trip},
        {"randomized invariant suite", check_invariants},
    };

    int failures = 0;
    for (size_t k = 0; k < criteria.size(); ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        std::string note;
        try {
            ok = criteria[k].run();
        } catch (const std::exception& e) {
            note = std::string(" (") + e.what() + ")";
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %2zu %-55s [%6.2f s]%s\n", ok ? "PASS" : "FAIL", k + 1,
                    criteria[k].name, secs, note.c_str());
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
