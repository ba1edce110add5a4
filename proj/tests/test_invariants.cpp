#include <cmath>
#include <random>

#include <doctest.h>

#include "homsim/interference.hpp"

using namespace homsim;

namespace {

struct RandomCase {
    InterferometerConfig cfg;
    double beta2, beta3, tau;
};

// Small grids keep the suite fast; the invariants hold at any resolution.
RandomCase draw(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double pump_fwhm = 0.3 + 1.2 * u(rng);
    const double pdc_fwhm = 8.0 + 24.0 * u(rng);
    const bool monochromatic = u(rng) < 0.25;
    const double t = 0.3 + 0.4 * u(rng);
    InterferometerConfig cfg{monochromatic ? std::optional<SpectralAmplitude>{}
                                           : SpectralAmplitude::gaussian(405.5, pump_fwhm),
                             SpectralAmplitude::gaussian(811.0, pdc_fwhm),
                             BeamSplitter{t, 1.0 - t},
                             PurityModel::from_purity(0.5 + 0.5 * u(rng)),
                             {},
                             {},
                             101,
                             monochromatic ? 1 : 41};
    const double beta2 = (u(rng) - 0.5) * 4.0e4;
    const double beta3 = (u(rng) - 0.5) * 4.0e5;
    const double tau = (u(rng) - 0.5) * 300.0;
    return {std::move(cfg), beta2, beta3, tau};
}

} // namespace

TEST_CASE("randomized invariants over 120 configurations") {
    std::mt19937 rng(20260825);
    for (int trial = 0; trial < 120; ++trial) {
        CAPTURE(trial);
        RandomCase rc = draw(rng);
        const double p = coincidence_probability_expanded(rc.cfg, rc.beta2, rc.beta3, rc.tau);

        // probability bounds: normalized value stays within [0, 2] and the
        // un-normalized one within [0, baseline * 2]
        CHECK(p >= -1e-9);
        CHECK(p <= 2.0 + 1e-9);

        // constant phase offsets never matter
        auto off = rc.cfg;
        off.signal.elements.push_back({3.7, 0.0, 0.0, 0.0, "custom"});
        off.idler.elements.push_back({-1.2, 0.0, 0.0, 0.0, "custom"});
        const double p_off =
            coincidence_probability_expanded(off, rc.beta2, rc.beta3, rc.tau);
        CHECK(p_off == p);

        // mirrored dispersion: negating every total mirrors the delay axis
        const double mirrored =
            coincidence_probability_expanded(rc.cfg, -rc.beta2, -rc.beta3, -rc.tau);
        CHECK(std::abs(mirrored - p) < 1e-10);

        // purity enters as an affine map toward the 1/2 floor
        auto pure = rc.cfg;
        pure.purity = PurityModel::from_purity(1.0);
        const double p1 = coincidence_probability_expanded(pure, rc.beta2, rc.beta3, rc.tau);
        const double q = rc.cfg.purity.p;
        CHECK(p == doctest::Approx(q * p1 + 0.5 * (1.0 - q)).epsilon(1e-12));

        // swapping T and R leaves a symmetric-spectrum dip unchanged
        auto swapped = rc.cfg;
        std::swap(swapped.bs.t, swapped.bs.r);
        const double p_swap =
            coincidence_probability_expanded(swapped, rc.beta2, rc.beta3, rc.tau);
        CHECK(std::abs(p_swap - p) < 1e-10);
    }
}

TEST_CASE("randomized profiles: normalization consistency and baseline limit") {
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        CAPTURE(trial);
        RandomCase rc = draw(rng);
        std::vector<double> grid;
        for (int i = 0; i <= 60; ++i) grid.push_back(-450.0 + 15.0 * i);
        const DipProfile raw =
            dip_profile(rc.cfg, rc.beta2, rc.beta3, grid, false, Execution::Serial);
        const DipProfile norm =
            dip_profile(rc.cfg, rc.beta2, rc.beta3, grid, true, Execution::Serial);
        const double base = analytic_baseline(rc.cfg.bs, rc.cfg.purity);
        CHECK(raw.baseline == doctest::Approx(base).epsilon(1e-12));
        for (size_t k = 0; k < grid.size(); ++k)
            CHECK(norm.probability[k] ==
                  doctest::Approx(raw.probability[k] / base).epsilon(1e-12));
    }
}
