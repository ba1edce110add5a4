#include "homsim/interference.hpp"

#include <algorithm>
#include <cmath>

#include "homsim/errors.hpp"
#include "homsim/units.hpp"

namespace homsim {

namespace {

std::vector<double> trapezoid_weights(const std::vector<double>& x) {
    const size_t n = x.size();
    if (n == 1) return {1.0}; // degenerate axis: unit weight
    std::vector<double> w(n);
    w[0] = 0.5 * (x[1] - x[0]);
    for (size_t i = 1; i + 1 < n; ++i) w[i] = 0.5 * (x[i + 1] - x[i - 1]);
    w[n - 1] = 0.5 * (x[n - 1] - x[n - 2]);
    return w;
}

std::vector<double> half_resolution(const std::vector<double>& x) {
    if (x.size() <= 2) return x;
    std::vector<double> h;
    for (size_t i = 0; i < x.size(); i += 2) h.push_back(x[i]);
    if ((x.size() - 1) % 2 != 0) h.push_back(x.back());
    return h;
}

// Effective grid sizes; the oscillatory third-order regime gets a denser rule.
void effective_sizes(const InterferometerConfig& cfg, double beta3_tot, int& n_omega,
                     int& n_omega_p) {
    n_omega = cfg.n_omega;
    n_omega_p = cfg.pump ? cfg.n_omega_p : 1;
    const double m =
        std::max(std::abs(cfg.pdc.support_lo()), std::abs(cfg.pdc.support_hi()));
    if (std::abs(beta3_tot) * m * m * m / 3.0 > 20.0) {
        n_omega = std::max(n_omega, 801);
        if (cfg.pump) n_omega_p = std::max(n_omega_p, 401);
    }
}

FrequencyGrid build_grid(const InterferometerConfig& cfg, double beta3_tot) {
    if (cfg.grid) {
        const FrequencyGrid& g = *cfg.grid;
        const double m =
            std::max(std::abs(cfg.pdc.support_lo()), std::abs(cfg.pdc.support_hi()));
        if (g.omega_samples.front() > -m + 1e-12 || g.omega_samples.back() < m - 1e-12)
            throw std::domain_error("frequency grid does not cover the PDC support");
        if (cfg.pump && g.omega_p_samples.size() > 1 &&
            (g.omega_p_samples.front() > cfg.pump->support_lo() + 1e-12 ||
             g.omega_p_samples.back() < cfg.pump->support_hi() - 1e-12))
            throw std::domain_error("frequency grid does not cover the pump support");
        return g;
    }
    int n_omega, n_omega_p;
    effective_sizes(cfg, beta3_tot, n_omega, n_omega_p);
    FrequencyGrid g;
    g.omega_samples = symmetric_cover(cfg.pdc, n_omega);
    g.omega_p_samples = cfg.pump ? symmetric_cover(*cfg.pump, n_omega_p)
                                 : std::vector<double>{0.0};
    return g;
}

// Pump weights: trapezoid weight times |A|^2, or the unit weight for a
// degenerate (monochromatic) pump axis.
std::vector<double> pump_weights(const InterferometerConfig& cfg, const FrequencyGrid& g) {
    std::vector<double> pw = trapezoid_weights(g.omega_p_samples);
    if (g.omega_p_samples.size() > 1) {
        if (!cfg.pump) throw std::domain_error("multi-point pump grid without a pump spectrum");
        for (size_t i = 0; i < pw.size(); ++i)
            pw[i] *= cfg.pump->intensity(g.omega_p_samples[i]);
    }
    return pw;
}

} // namespace

void BeamSplitter::validate() const {
    if (t < 0.0 || t > 1.0 || r < 0.0 || r > 1.0)
        throw std::invalid_argument("beam splitter coefficients must lie in [0, 1]");
    if (std::abs(t + r - 1.0) > 1e-9)
        throw std::invalid_argument("beam splitter coefficients must satisfy T + R = 1");
}

PurityModel PurityModel::from_theta(double theta_deg) {
    const double c = std::cos(theta_deg * pi / 180.0);
    if (c * c > 1.0 + 1e-12)
        throw std::invalid_argument("purity: invalid mismatch angle");
    PurityModel m;
    m.theta_deg = theta_deg;
    m.v_i = std::abs(c);
    m.p = c * c;
    return m;
}

PurityModel PurityModel::from_interferogram_visibility(double v_i) {
    if (v_i < 0.0 || v_i > 1.0)
        throw std::invalid_argument("purity: interferogram visibility must lie in [0, 1]");
    PurityModel m;
    m.v_i = v_i;
    m.p = v_i * v_i;
    m.theta_deg = std::acos(v_i) * 180.0 / pi;
    return m;
}

PurityModel PurityModel::from_purity(double p) {
    if (p < 0.0 || p > 1.0)
        throw std::invalid_argument("purity: p must lie in [0, 1]");
    PurityModel m;
    m.p = p;
    m.v_i = std::sqrt(p);
    m.theta_deg = std::acos(m.v_i) * 180.0 / pi;
    return m;
}

Quad2dResult integrate_2d(const FrequencyGrid& grid,
                          const std::function<std::complex<double>(double, double)>& f) {
    auto run = [&f](const std::vector<double>& xs, const std::vector<double>& ys) {
        const std::vector<double> wx = trapezoid_weights(xs);
        const std::vector<double> wy = trapezoid_weights(ys);
        std::complex<double> acc{0.0, 0.0};
        for (size_t i = 0; i < xs.size(); ++i) {
            std::complex<double> row{0.0, 0.0};
            for (size_t j = 0; j < ys.size(); ++j) row += wy[j] * f(xs[i], ys[j]);
            acc += wx[i] * row;
        }
        return acc;
    };
    Quad2dResult out;
    out.value = run(grid.omega_p_samples, grid.omega_samples);
    out.value_half =
        run(half_resolution(grid.omega_p_samples), half_resolution(grid.omega_samples));
    out.converged = std::abs(out.value - out.value_half) < 1e-4;
    return out;
}

double analytic_baseline(const BeamSplitter& bs, const PurityModel& purity) {
    return (bs.t * bs.t + bs.r * bs.r) * purity.p + 0.5 * (1.0 - purity.p);
}

FrequencyGrid make_grid(const InterferometerConfig& cfg) { return build_grid(cfg, 0.0); }

double coincidence_probability_general(const InterferometerConfig& cfg, const PhaseFn& phi_s,
                                       const PhaseFn& phi_i, double tau) {
    cfg.bs.validate();
    const FrequencyGrid g = build_grid(cfg, 0.0);
    const std::vector<double> pw = pump_weights(cfg, g);
    const std::vector<double> fw = trapezoid_weights(g.omega_samples);
    const double t2 = cfg.bs.t * cfg.bs.t;
    const double r2 = cfg.bs.r * cfg.bs.r;

    double direct = 0.0;
    std::complex<double> cross{0.0, 0.0};
    for (size_t i = 0; i < g.omega_p_samples.size(); ++i) {
        if (pw[i] == 0.0) continue;
        const double a = 0.5 * g.omega_p_samples[i];
        double drow = 0.0;
        std::complex<double> crow{0.0, 0.0};
        for (size_t j = 0; j < g.omega_samples.size(); ++j) {
            const double w = g.omega_samples[j];
            const double fp = cfg.pdc.amplitude(w);
            const double fm = cfg.pdc.amplitude(-w);
            drow += fw[j] * (t2 * fp * fp + r2 * fm * fm);
            const double pair = fp * fm;
            if (pair != 0.0) {
                const double phi = phi_s(a + w) - phi_s(a - w) - (phi_i(a + w) - phi_i(a - w)) +
                                   2.0 * w * tau;
                crow += fw[j] * pair * std::complex<double>(std::cos(phi), std::sin(phi));
            }
        }
        direct += pw[i] * drow;
        cross += pw[i] * crow;
    }
    if (!std::isfinite(direct) || !std::isfinite(cross.real()) || !std::isfinite(cross.imag()))
        throw NumericError("coincidence probability: non-finite integrand");
    if (std::abs(cross.imag()) > 1e-10 * std::max(1.0, std::abs(cross.real())))
        throw NumericError("coincidence probability: imaginary residue exceeds tolerance");
    const double raw = direct - 2.0 * cfg.bs.t * cfg.bs.r * cross.real();
    const double p = cfg.purity.p;
    double out = raw * p + 0.5 * (1.0 - p);
    if (out < 0.0 && out > -1e-12) out = 0.0;
    return out;
}

double coincidence_probability_general(const InterferometerConfig& cfg, double tau) {
    const PhaseExpansion s = total_phase(cfg.signal);
    const PhaseExpansion i = total_phase(cfg.idler);
    return coincidence_probability_general(
        cfg, [&s](double w) { return s.eval(w); }, [&i](double w) { return i.eval(w); }, tau);
}

ExpandedEngine::ExpandedEngine(const InterferometerConfig& cfg, double beta2_tot,
                               double beta3_tot) {
    cfg.bs.validate();
    const FrequencyGrid g = build_grid(cfg, beta3_tot);
    const std::vector<double> pw = pump_weights(cfg, g);
    omega_ = g.omega_samples;
    fw_ = trapezoid_weights(omega_);
    const size_t n = omega_.size();
    pair_amp_.resize(n);
    phi3_.resize(n);
    pump_factor_.resize(n);
    const double t2 = cfg.bs.t * cfg.bs.t;
    const double r2 = cfg.bs.r * cfg.bs.r;

    double pump_sum = 0.0;
    for (double v : pw) pump_sum += v;

    double direct = 0.0;
#pragma omp parallel for reduction(+ : direct) schedule(static)
    for (long jj = 0; jj < static_cast<long>(n); ++jj) {
        const size_t j = static_cast<size_t>(jj);
        const double w = omega_[j];
        const double fp = cfg.pdc.amplitude(w);
        const double fm = cfg.pdc.amplitude(-w);
        direct += fw_[j] * (t2 * fp * fp + r2 * fm * fm);
        pair_amp_[j] = fw_[j] * fp * fm;
        phi3_[j] = beta3_tot * w * w * w / 3.0;
        std::complex<double> acc{0.0, 0.0};
        for (size_t i = 0; i < pw.size(); ++i) {
            if (pw[i] == 0.0) continue;
            const double wp = g.omega_p_samples[i];
            const double phi = beta2_tot * wp * w + 0.25 * beta3_tot * wp * wp * w;
            acc += pw[i] * std::complex<double>(std::cos(phi), std::sin(phi));
        }
        pump_factor_[j] = acc;
    }
    direct_ = pump_sum * direct;
    cross_scale_ = 2.0 * cfg.bs.t * cfg.bs.r;
    p_ = cfg.purity.p;
    baseline_ = analytic_baseline(cfg.bs, cfg.purity);
    if (!std::isfinite(direct_))
        throw NumericError("coincidence probability: non-finite integrand");
}

double ExpandedEngine::eval(double tau) const {
    double cross = 0.0;
    for (size_t j = 0; j < omega_.size(); ++j) {
        if (pair_amp_[j] == 0.0) continue;
        const double phi = 2.0 * omega_[j] * tau + phi3_[j];
        const std::complex<double> rot(std::cos(phi), std::sin(phi));
        cross += pair_amp_[j] * (pump_factor_[j] * rot).real();
    }
    const double raw = direct_ - cross_scale_ * cross;
    double out = raw * p_ + 0.5 * (1.0 - p_);
    if (out < 0.0 && out > -1e-12) out = 0.0;
    return out;
}

double coincidence_probability_expanded(const InterferometerConfig& cfg, double beta2_tot,
                                        double beta3_tot, double tau) {
    return ExpandedEngine(cfg, beta2_tot, beta3_tot).eval(tau);
}

DipProfile dip_profile(const InterferometerConfig& cfg, double beta2_tot, double beta3_tot,
                       const std::vector<double>& tau_grid, bool normalize, Execution exec) {
    if (tau_grid.empty()) throw std::invalid_argument("dip_profile: empty delay grid");
    if (!std::is_sorted(tau_grid.begin(), tau_grid.end()))
        throw std::invalid_argument("dip_profile: delay grid must be sorted");
    const ExpandedEngine engine(cfg, beta2_tot, beta3_tot);
    DipProfile out;
    out.tau_samples = tau_grid;
    out.probability.resize(tau_grid.size());
    out.baseline = engine.baseline();
    const long n = static_cast<long>(tau_grid.size());
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
        for (long k = 0; k < n; ++k)
            out.probability[static_cast<size_t>(k)] = engine.eval(tau_grid[static_cast<size_t>(k)]);
    } else {
        for (long k = 0; k < n; ++k)
            out.probability[static_cast<size_t>(k)] = engine.eval(tau_grid[static_cast<size_t>(k)]);
    }
    if (normalize) {
        for (double& v : out.probability) v /= out.baseline;
        out.normalized = true;
    }
    return out;
}

DipProfile dip_profile_reference(const InterferometerConfig& cfg, double beta2_tot,
                                 double beta3_tot, const std::vector<double>& tau_grid,
                                 bool normalize) {
    cfg.bs.validate();
    const FrequencyGrid g = build_grid(cfg, beta3_tot);
    const std::vector<double> pw = pump_weights(cfg, g);
    const std::vector<double> fw = trapezoid_weights(g.omega_samples);
    const double t2 = cfg.bs.t * cfg.bs.t;
    const double r2 = cfg.bs.r * cfg.bs.r;
    DipProfile out;
    out.tau_samples = tau_grid;
    out.baseline = analytic_baseline(cfg.bs, cfg.purity);
    out.probability.reserve(tau_grid.size());
    for (double tau : tau_grid) {
        double direct = 0.0;
        double cross = 0.0;
        for (size_t i = 0; i < g.omega_p_samples.size(); ++i) {
            if (pw[i] == 0.0) continue;
            const double wp = g.omega_p_samples[i];
            double drow = 0.0, crow = 0.0;
            for (size_t j = 0; j < g.omega_samples.size(); ++j) {
                const double w = g.omega_samples[j];
                const double fp = cfg.pdc.amplitude(w);
                const double fm = cfg.pdc.amplitude(-w);
                drow += fw[j] * (t2 * fp * fp + r2 * fm * fm);
                const double phi = 2.0 * w * tau + beta2_tot * wp * w +
                                   0.25 * beta3_tot * wp * wp * w +
                                   beta3_tot * w * w * w / 3.0;
                crow += fw[j] * fp * fm * std::cos(phi);
            }
            direct += pw[i] * drow;
            cross += pw[i] * crow;
        }
        const double raw = direct - 2.0 * cfg.bs.t * cfg.bs.r * cross;
        double v = raw * cfg.purity.p + 0.5 * (1.0 - cfg.purity.p);
        if (v < 0.0 && v > -1e-12) v = 0.0;
        out.probability.push_back(v);
    }
    if (normalize) {
        for (double& v : out.probability) v /= out.baseline;
        out.normalized = true;
    }
    return out;
}

bool expanded_converged(const InterferometerConfig& cfg, double beta2_tot, double beta3_tot) {
    const double full = coincidence_probability_expanded(cfg, beta2_tot, beta3_tot, 0.0);
    InterferometerConfig half = cfg;
    half.n_omega = cfg.n_omega / 2 + 1;
    half.n_omega_p = cfg.n_omega_p / 2 + 1;
    const double coarse = coincidence_probability_expanded(half, beta2_tot, beta3_tot, 0.0);
    return std::abs(full - coarse) < 1e-4;
}

void normalize_by_tail(DipProfile& profile, double tau_threshold) {
    double sum = 0.0;
    int count = 0;
    for (size_t k = 0; k < profile.tau_samples.size(); ++k) {
        if (std::abs(profile.tau_samples[k]) >= tau_threshold) {
            sum += profile.probability[k];
            ++count;
        }
    }
    if (count == 0)
        throw RangeError("normalize_by_tail: no samples beyond the delay threshold");
    const double tail = sum / count;
    if (tail <= 0.0) throw NumericError("normalize_by_tail: non-positive tail mean");
    if (profile.normalized)
        for (double& v : profile.probability) v *= profile.baseline;
    profile.baseline = tail;
    for (double& v : profile.probability) v /= tail;
    profile.normalized = true;
}

} // namespace homsim
