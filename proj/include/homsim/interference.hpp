#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "homsim/phase.hpp"
#include "homsim/spectra.hpp"

namespace homsim {

struct BeamSplitter {
    double t = 0.5; // intensity transmission
    double r = 0.5; // intensity reflection
    void validate() const;
};

/// Polarization purity of the photon pair: p = cos^2(theta), V_I = |cos(theta)|.
/// Construct from any one of the three; the others are derived.
struct PurityModel {
    double theta_deg = 0.0;
    double v_i = 1.0;
    double p = 1.0;

    static PurityModel from_theta(double theta_deg);
    static PurityModel from_interferogram_visibility(double v_i);
    static PurityModel from_purity(double p);
};

struct InterferometerConfig {
    std::optional<SpectralAmplitude> pump; // nullopt = monochromatic pump
    SpectralAmplitude pdc;
    BeamSplitter bs;
    PurityModel purity;
    ChannelPhase signal;
    ChannelPhase idler;
    int n_omega = 401;
    int n_omega_p = 201;
    std::optional<FrequencyGrid> grid; // explicit override, must cover supports
};

struct DipProfile {
    std::vector<double> tau_samples;  // fs
    std::vector<double> probability;  // normalized when `normalized` is set
    double baseline = 0.0;
    bool normalized = false;
};

enum class Execution { Serial, Parallel };

struct Quad2dResult {
    std::complex<double> value;
    std::complex<double> value_half; // same rule on every other point
    bool converged = false;          // |value - value_half| < 1e-4
};

/// Trapezoidal tensor quadrature over the grid. A single-point axis carries
/// unit weight (degenerate-pump convention).
Quad2dResult integrate_2d(const FrequencyGrid& grid,
                          const std::function<std::complex<double>(double, double)>& f);

/// Asymptotic coincidence probability outside the dip.
double analytic_baseline(const BeamSplitter& bs, const PurityModel& purity);

/// Integration grid for a configuration (auto-built from the spectral
/// supports unless the config carries an explicit one).
FrequencyGrid make_grid(const InterferometerConfig& cfg);

/// Coincidence probability with the channels' own polynomial phases plus an
/// explicit scan delay tau (entering as a 2*omega*tau cross phase).
double coincidence_probability_general(const InterferometerConfig& cfg, double tau);

/// Same, with arbitrary single-frequency phase functions phi_s / phi_i
/// evaluated at omega_p/2 + omega and omega_p/2 - omega.
using PhaseFn = std::function<double(double)>;
double coincidence_probability_general(const InterferometerConfig& cfg, const PhaseFn& phi_s,
                                       const PhaseFn& phi_i, double tau);

/// Expanded form: cross phase 2*omega*tau + b2*omega_p*omega
/// + b3*omega_p^2*omega/4 + b3*omega^3/3.
double coincidence_probability_expanded(const InterferometerConfig& cfg, double beta2_tot,
                                        double beta3_tot, double tau);

/// Dip profile over a delay grid via the expanded form.
DipProfile dip_profile(const InterferometerConfig& cfg, double beta2_tot, double beta3_tot,
                       const std::vector<double>& tau_grid, bool normalize = true,
                       Execution exec = Execution::Parallel);

/// Serial reference: every point evaluated independently through the plain
/// double-loop quadrature. Slow; kept for validating the fast kernel.
DipProfile dip_profile_reference(const InterferometerConfig& cfg, double beta2_tot,
                                 double beta3_tot, const std::vector<double>& tau_grid,
                                 bool normalize = true);

/// Convergence self-check at tau = 0: full grid vs half resolution.
bool expanded_converged(const InterferometerConfig& cfg, double beta2_tot, double beta3_tot);

/// Replace the analytic baseline by the mean of samples with |tau| at or
/// above the threshold (for ingested measured data).
void normalize_by_tail(DipProfile& profile, double tau_threshold);

/// Precomputed expanded-form kernel: pump factor collapsed into a per-omega
/// complex weight so each delay sample costs O(n_omega).
class ExpandedEngine {
public:
    ExpandedEngine(const InterferometerConfig& cfg, double beta2_tot, double beta3_tot);
    double eval(double tau) const;    // purity-corrected probability
    double direct_term() const { return direct_; }
    double baseline() const { return baseline_; }

private:
    std::vector<double> omega_, fw_, pair_amp_, phi3_;
    std::vector<std::complex<double>> pump_factor_;
    double direct_ = 0.0;
    double cross_scale_ = 0.0; // 2 T R
    double p_ = 1.0;
    double baseline_ = 0.0;
};

} // namespace homsim
