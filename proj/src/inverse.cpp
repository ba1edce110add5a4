#include "homsim/inverse.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <gsl/gsl_multimin.h>

#include "homsim/errors.hpp"

namespace homsim {

namespace {

struct GslAdapter {
    const std::function<double(const std::vector<double>&)>* f;
};

double gsl_eval(const gsl_vector* v, void* params) {
    const auto* a = static_cast<GslAdapter*>(params);
    std::vector<double> x(v->size);
    for (size_t i = 0; i < v->size; ++i) x[i] = gsl_vector_get(v, i);
    return (*a->f)(x);
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return v;
}

} // namespace

SimplexOutcome minimize_simplex(const std::function<double(const std::vector<double>&)>& f,
                                const std::vector<double>& x0,
                                const std::vector<double>& steps, double size_tol,
                                int max_iter) {
    const size_t n = x0.size();
    GslAdapter adapter{&f};
    gsl_multimin_function func;
    func.n = n;
    func.f = &gsl_eval;
    func.params = &adapter;

    gsl_vector* x = gsl_vector_alloc(n);
    gsl_vector* ss = gsl_vector_alloc(n);
    for (size_t i = 0; i < n; ++i) {
        gsl_vector_set(x, i, x0[i]);
        gsl_vector_set(ss, i, steps[i]);
    }
    gsl_multimin_fminimizer* s =
        gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
    gsl_multimin_fminimizer_set(s, &func, x, ss);

    SimplexOutcome out;
    int iter = 0;
    int status = GSL_CONTINUE;
    while (status == GSL_CONTINUE && iter < max_iter) {
        ++iter;
        if (gsl_multimin_fminimizer_iterate(s) != 0) break;
        status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), size_tol);
    }
    out.x.resize(n);
    for (size_t i = 0; i < n; ++i) out.x[i] = gsl_vector_get(s->x, i);
    out.value = s->fval;
    out.iterations = iter;
    out.converged = (status == GSL_SUCCESS);
    gsl_multimin_fminimizer_free(s);
    gsl_vector_free(x);
    gsl_vector_free(ss);
    return out;
}

DipMetrics metrics_auto(const InterferometerConfig& cfg, double beta2_tot, double beta3_tot,
                        DipProfile* profile_out) {
    const double sigma = cfg.pdc.rms_detuning();
    double half_span = 3.0 * std::sqrt(2.0 * std::log(2.0)) / sigma;
    constexpr int points = 241;
    for (int attempt = 0;; ++attempt) {
        const DipProfile profile =
            dip_profile(cfg, beta2_tot, beta3_tot, linspace(-half_span, half_span, points));
        try {
            DipMetrics m = dip_metrics(profile);
            if (profile_out) *profile_out = profile;
            return m;
        } catch (const RangeError&) {
            if (attempt >= 4) throw;
            half_span *= 2.0;
        }
    }
}

SweepResult sweep(const InterferometerConfig& cfg, SweepAxis axis,
                  const std::vector<double>& values, const std::string& label) {
    if (values.empty()) throw std::invalid_argument("sweep: no values");
    if (!std::is_sorted(values.begin(), values.end()))
        throw std::invalid_argument("sweep: values must be sorted ascending");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("sweep: non-finite value");
    const DispersionTotals base = dispersion_totals(cfg.signal, cfg.idler);
    SweepResult out;
    out.axis = axis;
    out.values = values;
    out.config_label = label;
    out.visibility.resize(values.size());
    out.fwhm.resize(values.size());
    for (size_t k = 0; k < values.size(); ++k) {
        const double b2 = axis == SweepAxis::Beta2 ? values[k] : base.beta2_tot;
        const double b3 = axis == SweepAxis::Beta3 ? values[k] : base.beta3_tot;
        const DipMetrics m = metrics_auto(cfg, b2, b3);
        out.visibility[k] = m.visibility;
        out.fwhm[k] = m.fwhm;
    }
    return out;
}

CompensationResult compensate(const InterferometerConfig& cfg, double channel_beta2,
                              double channel_beta3, Objective objective,
                              const SearchBox& box) {
    if (-channel_beta2 < box.beta2_lo || -channel_beta2 > box.beta2_hi ||
        -channel_beta3 < box.beta3_lo || -channel_beta3 > box.beta3_hi)
        throw std::invalid_argument(
            "compensate: search box must contain the additive-cancellation point");

    const double s2 = std::max(1.0, 0.5 * (box.beta2_hi - box.beta2_lo));
    const double s3 = std::max(1.0, 0.5 * (box.beta3_hi - box.beta3_lo));
    auto cost = [&](const std::vector<double>& x) {
        const double b2m = x[0] * s2;
        const double b3m = x[1] * s3;
        const DipMetrics m =
            metrics_auto(cfg, channel_beta2 + b2m, channel_beta3 + b3m);
        return objective == Objective::MaximizeVisibility ? -m.visibility : m.fwhm;
    };

    // coarse grid seeding
    double best = 0.0;
    std::vector<double> seed = {0.0, 0.0};
    bool first = true;
    for (double b2m : linspace(box.beta2_lo, box.beta2_hi, 7)) {
        for (double b3m : linspace(box.beta3_lo, box.beta3_hi, 7)) {
            const std::vector<double> x = {b2m / s2, b3m / s3};
            const double v = cost(x);
            if (first || v < best) {
                best = v;
                seed = x;
                first = false;
            }
        }
    }
    SimplexOutcome o = minimize_simplex(cost, seed, {0.1, 0.1}, 1e-7, 600);

    CompensationResult out;
    out.slm.beta2 = o.x[0] * s2;
    out.slm.beta3 = o.x[1] * s3;
    out.slm.label = "SLM";
    out.objective = objective == Objective::MaximizeVisibility ? -o.value : o.value;
    out.iterations = o.iterations;
    out.converged = o.converged;
    return out;
}

FitResult fit_dip(const DipProfile& measured, const InterferometerConfig& base,
                  const FitOptions& free_params) {
    if (!measured.normalized)
        throw std::invalid_argument("fit_dip: measured profile must be normalized");
    if (measured.tau_samples.size() < 15)
        throw std::invalid_argument("fit_dip: need at least 15 samples");
    const bool monochromatic = !base.pump || base.n_omega_p == 1 ||
                               (base.grid && base.grid->omega_p_samples.size() == 1);
    if (free_params.fit_beta2 && monochromatic)
        throw IdentifiabilityError(
            "fit_dip: beta2 is unidentifiable with a monochromatic pump");
    const double y_min = *std::min_element(measured.probability.begin(),
                                           measured.probability.end());
    if (y_min > 1.0 - 1e-3) throw NoDipError("fit_dip: profile shows no dip");

    const DispersionTotals totals = dispersion_totals(base.signal, base.idler);
    const double p0 = base.purity.p;

    // Engine with p = 1; purity is applied as the affine correction below.
    InterferometerConfig unit = base;
    unit.purity = PurityModel::from_purity(1.0);

    // Parameter order: beta2, beta3, tau0, p (scaled).
    const double scale[4] = {1e4, 1e5, 10.0, 0.1};
    auto residual_for = [&](double b2, double b3, double tau0, double p) {
        if (p < 0.0 || p > 1.0) return 1e6 * (1.0 + p * p);
        const ExpandedEngine engine(unit, b2, b3);
        const double baseline = engine.baseline() * p + 0.5 * (1.0 - p);
        double acc = 0.0;
        for (size_t k = 0; k < measured.tau_samples.size(); ++k) {
            const double raw = engine.eval(measured.tau_samples[k] - tau0);
            const double model = (raw * p + 0.5 * (1.0 - p)) / baseline;
            const double d = model - measured.probability[k];
            acc += d * d;
        }
        return acc;
    };

    std::vector<int> free_idx;
    if (free_params.fit_beta2) free_idx.push_back(0);
    if (free_params.fit_beta3) free_idx.push_back(1);
    if (free_params.fit_tau0) free_idx.push_back(2);
    if (free_params.fit_p) free_idx.push_back(3);
    if (free_idx.empty()) throw std::invalid_argument("fit_dip: no free parameters");

    auto unpack = [&](const std::vector<double>& x) {
        double v[4] = {totals.beta2_tot, totals.beta3_tot, 0.0, p0};
        for (size_t i = 0; i < free_idx.size(); ++i)
            v[free_idx[static_cast<size_t>(i)]] = x[i] * scale[free_idx[i]];
        return std::array<double, 4>{v[0], v[1], v[2], v[3]};
    };
    auto cost = [&](const std::vector<double>& x) {
        const auto v = unpack(x);
        return residual_for(v[0], v[1], v[2], v[3]);
    };

    // Seed estimate for tau0: position of the sample minimum.
    const size_t argmin = static_cast<size_t>(
        std::min_element(measured.probability.begin(), measured.probability.end()) -
        measured.probability.begin());
    const double tau0_est = measured.tau_samples[argmin];

    // Coarse seed grid; the beta3 sign variants dodge the reflection
    // near-degeneracy P(tau; b3) = P(-tau; -b3).
    std::vector<double> seeds2 = free_params.fit_beta2
                                     ? std::vector<double>{0.0, 1.5e4, 3e4}
                                     : std::vector<double>{totals.beta2_tot};
    std::vector<double> seeds3 = free_params.fit_beta3
                                     ? std::vector<double>{-2e5, 0.0, 2e5}
                                     : std::vector<double>{totals.beta3_tot};
    std::vector<double> seedsT = free_params.fit_tau0
                                     ? std::vector<double>{tau0_est, -tau0_est}
                                     : std::vector<double>{0.0};
    std::vector<double> seedsP =
        free_params.fit_p ? std::vector<double>{p0, 0.9} : std::vector<double>{p0};

    struct Seed {
        std::vector<double> x;
        double residual;
    };
    std::vector<Seed> seeds;
    for (double b2 : seeds2)
        for (double b3 : seeds3)
            for (double t0 : seedsT)
                for (double p : seedsP) {
                    const double full[4] = {b2, b3, t0, p};
                    std::vector<double> x(free_idx.size());
                    for (size_t i = 0; i < free_idx.size(); ++i)
                        x[i] = full[free_idx[i]] / scale[free_idx[i]];
                    seeds.push_back({x, cost(x)});
                }
    std::sort(seeds.begin(), seeds.end(),
              [](const Seed& a, const Seed& b) { return a.residual < b.residual; });
    const size_t n_starts = std::min<size_t>(seeds.size(), 5);

    SimplexOutcome best;
    bool have_best = false;
    int total_iter = 0;
    for (size_t s = 0; s < n_starts; ++s) {
        std::vector<double> steps(free_idx.size(), 0.3);
        SimplexOutcome o = minimize_simplex(cost, seeds[s].x, steps, 1e-9, 2000);
        // polish from the found point with a smaller simplex
        SimplexOutcome o2 =
            minimize_simplex(cost, o.x, std::vector<double>(free_idx.size(), 0.02), 1e-10, 2000);
        total_iter += o.iterations + o2.iterations;
        if (o2.value < o.value) o = o2;
        const auto vo = unpack(o.x);
        const auto vb = have_best ? unpack(best.x) : vo;
        const bool better =
            !have_best || o.value < best.value * (1.0 - 1e-8) ||
            (std::abs(o.value - best.value) <= best.value * 1e-8 &&
             (std::abs(vo[2]) < std::abs(vb[2]) ||
              (std::abs(vo[2]) == std::abs(vb[2]) &&
               std::lexicographical_compare(vo.begin(), vo.end(), vb.begin(), vb.end()))));
        if (better) {
            best = o;
            have_best = true;
        }
    }

    const auto v = unpack(best.x);
    FitResult out;
    out.beta2 = v[0];
    out.beta3 = v[1];
    out.tau0 = v[2];
    out.p = v[3];
    out.residual = best.value;
    out.iterations = total_iter;
    out.converged = best.converged;
    return out;
}

} // namespace homsim
