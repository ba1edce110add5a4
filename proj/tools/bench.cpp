// Compares the factorized OpenMP dip kernel against the serial
// double-loop reference on the broad-pump configuration.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "homsim/interference.hpp"
#include "homsim/spectra.hpp"

using namespace homsim;

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return v;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

} // namespace

int main() {
    InterferometerConfig cfg{SpectralAmplitude::gaussian(405.5, 1.0),
                             SpectralAmplitude::gaussian(811.0, 20.0),
                             BeamSplitter{0.467, 0.533},
                             PurityModel::from_purity(0.913),
                             {},
                             {}};
    const std::vector<double> tau = linspace(-400.0, 400.0, 401);
    const double b2 = 35.2e3, b3 = 1.0e5;

#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP: disabled\n");
#endif

    auto t0 = std::chrono::steady_clock::now();
    const DipProfile ref = dip_profile_reference(cfg, b2, b3, tau);
    const double t_ref = ms_since(t0);

    t0 = std::chrono::steady_clock::now();
    const DipProfile ser = dip_profile(cfg, b2, b3, tau, true, Execution::Serial);
    const double t_ser = ms_since(t0);

    t0 = std::chrono::steady_clock::now();
    const DipProfile par = dip_profile(cfg, b2, b3, tau, true, Execution::Parallel);
    const double t_par = ms_since(t0);

    double max_dev = 0.0;
    for (size_t k = 0; k < tau.size(); ++k) {
        max_dev = std::max(max_dev, std::abs(ref.probability[k] - par.probability[k]));
        max_dev = std::max(max_dev, std::abs(ser.probability[k] - par.probability[k]));
    }

    std::printf("reference (serial double loop): %9.1f ms\n", t_ref);
    std::printf("factorized kernel, serial:      %9.1f ms\n", t_ser);
    std::printf("factorized kernel, parallel:    %9.1f ms\n", t_par);
    std::printf("max |deviation| across paths:   %9.2e\n", max_dev);
    std::printf("speedup reference/parallel:     %9.1fx\n", t_ref / t_par);
    return max_dev < 1e-8 ? 0 : 1;
}
