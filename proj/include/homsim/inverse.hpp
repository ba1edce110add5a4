#pragma once

#include <string>
#include <vector>

#include "homsim/interference.hpp"
#include "homsim/metrics.hpp"

namespace homsim {

enum class SweepAxis { Beta2, Beta3 };

struct SweepResult {
    SweepAxis axis = SweepAxis::Beta2;
    std::vector<double> values;     // fs^2 or fs^3, ascending
    std::vector<double> visibility;
    std::vector<double> fwhm;       // fs
    std::string config_label = "custom";
};

enum class Objective { MaximizeVisibility, MinimizeFwhm };

struct SearchBox {
    double beta2_lo = 0.0, beta2_hi = 0.0; // fs^2
    double beta3_lo = 0.0, beta3_hi = 0.0; // fs^3
};

struct CompensationResult {
    PhaseExpansion slm;       // label "SLM"
    double objective = 0.0;   // achieved metric (visibility or FWHM)
    int iterations = 0;
    bool converged = false;
};

struct FitResult {
    double beta2 = 0.0; // fs^2
    double beta3 = 0.0; // fs^3
    double tau0 = 0.0;  // fs
    double p = 1.0;
    double residual = 0.0; // sum of squared normalized residuals
    int iterations = 0;
    bool converged = false;
};

struct FitOptions {
    bool fit_beta2 = false;
    bool fit_beta3 = false;
    bool fit_tau0 = false;
    bool fit_p = false;
};

/// Profile plus metrics on a delay grid that is widened (factor 2, up to 4
/// retries) until the half-depth crossings fall inside the sampled range.
DipMetrics metrics_auto(const InterferometerConfig& cfg, double beta2_tot, double beta3_tot,
                        DipProfile* profile_out = nullptr);

/// Visibility and FWHM for each value along one dispersion axis; the other
/// axis keeps the total derived from the config's channels.
SweepResult sweep(const InterferometerConfig& cfg, SweepAxis axis,
                  const std::vector<double>& values, const std::string& label = "custom");

/// SLM coefficients minimizing the objective over the search box; coarse grid
/// seeding followed by derivative-free simplex descent.
CompensationResult compensate(const InterferometerConfig& cfg, double channel_beta2,
                              double channel_beta3, Objective objective, const SearchBox& box);

/// Least-squares fit of the free parameters to a normalized measured profile,
/// multi-started from a coarse seed grid.
FitResult fit_dip(const DipProfile& measured, const InterferometerConfig& base,
                  const FitOptions& free_params);

/// Derivative-free simplex minimizer (thin wrapper used by compensate/fit;
/// exposed for testing). Parameters are pre-scaled by the caller.
struct SimplexOutcome {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};
SimplexOutcome minimize_simplex(const std::function<double(const std::vector<double>&)>& f,
                                const std::vector<double>& x0,
                                const std::vector<double>& steps, double size_tol,
                                int max_iter);

} // namespace homsim
