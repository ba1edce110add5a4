#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "homsim/config.hpp"
#include "homsim/errors.hpp"
#include "homsim/interference.hpp"
#include "homsim/inverse.hpp"
#include "homsim/io.hpp"
#include "homsim/metrics.hpp"
#include "homsim/phase.hpp"

namespace {

using homsim::RunConfig;
using nlohmann::json;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::vector<std::string> sets;
    std::string grid;
    std::string tau;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--config", a.config_path, "JSON run configuration");
    cmd->add_option("--out", a.out_dir, "output directory");
    cmd->add_option("--set", a.sets, "override config key, e.g. pdc.fwhm_nm=10")
        ->take_all();
    cmd->add_option("--grid", a.grid, "integration grid as NxM (omega x omega_p points)");
    cmd->add_option("--tau", a.tau, "delay grid start:stop:step_fs");
}

RunConfig resolve_config(const CommonArgs& a) {
    json j = json::object();
    if (!a.config_path.empty()) {
        std::ifstream in(a.config_path);
        if (!in) throw homsim::MalformedInputError("cannot open config: " + a.config_path);
        in >> j;
    }
    for (const auto& s : a.sets) homsim::apply_override(j, s);
    if (!a.grid.empty()) {
        int n = 0, m = 0;
        if (std::sscanf(a.grid.c_str(), "%dx%d", &n, &m) != 2)
            throw homsim::MalformedInputError("--grid expects NxM, got '" + a.grid + "'");
        j["grid"]["n_omega"] = n;
        j["grid"]["n_omega_p"] = m;
    }
    if (!a.tau.empty()) {
        double start = 0, stop = 0, step = 0;
        if (std::sscanf(a.tau.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3)
            throw homsim::MalformedInputError("--tau expects start:stop:step_fs, got '" + a.tau +
                                              "'");
        j["tau_fs"] = {{"start", start}, {"stop", stop}, {"step", step}};
    }
    return homsim::parse_run_config(j);
}

std::string join_path(const std::string& dir, const std::string& name) {
    if (dir.empty() || dir == ".") return name;
    return dir + "/" + name;
}

void write_metadata(const RunConfig& rc, const std::string& path, bool converged) {
    nlohmann::ordered_json meta;
    meta["config"] = rc.echo();
    meta["config_hash"] = rc.hash();
    meta["grid"] = {{"n_omega", rc.n_omega}, {"n_omega_p", rc.n_omega_p}};
    meta["converged"] = converged;
    homsim::atomic_write(path, meta.dump(2) + "\n");
}

int cmd_dip(const CommonArgs& a) {
    const RunConfig rc = resolve_config(a);
    const auto cfg = rc.make_interferometer();
    const auto t = rc.totals();
    std::vector<double> grid = rc.tau_grid();
    std::vector<double> shifted = grid;
    for (double& v : shifted) v -= t.tau; // dip centered at the channel delay
    homsim::DipProfile profile =
        homsim::dip_profile(cfg, t.beta2_tot, t.beta3_tot, shifted, rc.normalize);
    profile.tau_samples = grid;
    const homsim::DipMetrics metrics = homsim::dip_metrics(profile);
    homsim::atomic_write(join_path(a.out_dir, "profile.csv"), homsim::dip_profile_csv(profile));
    homsim::atomic_write(join_path(a.out_dir, "metrics.json"), homsim::metrics_json(metrics));
    write_metadata(rc, join_path(a.out_dir, "run_meta.json"),
                   homsim::expanded_converged(cfg, t.beta2_tot, t.beta3_tot));
    return 0;
}

int cmd_sweep(const CommonArgs& a, const std::string& axis, const std::string& values_arg) {
    const RunConfig rc = resolve_config(a);
    const auto cfg = rc.make_interferometer();
    homsim::SweepAxis ax;
    if (axis == "beta2") ax = homsim::SweepAxis::Beta2;
    else if (axis == "beta3") ax = homsim::SweepAxis::Beta3;
    else throw homsim::MalformedInputError("--axis must be beta2 or beta3");
    std::vector<double> values;
    std::stringstream ss(values_arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) values.push_back(std::stod(tok));
    const homsim::SweepResult res = homsim::sweep(cfg, ax, values, rc.label);
    homsim::atomic_write(join_path(a.out_dir, "sweep.csv"), homsim::sweep_csv(res));
    write_metadata(rc, join_path(a.out_dir, "sweep_meta.json"), true);
    return 0;
}

int cmd_compensate(const CommonArgs& a, const std::string& objective) {
    const RunConfig rc = resolve_config(a);
    const auto cfg = rc.make_interferometer();
    const auto t = rc.totals();
    homsim::Objective obj;
    if (objective == "visibility") obj = homsim::Objective::MaximizeVisibility;
    else if (objective == "fwhm") obj = homsim::Objective::MinimizeFwhm;
    else throw homsim::MalformedInputError("--objective must be visibility or fwhm");
    homsim::SearchBox box;
    const double span2 = std::max(std::abs(t.beta2_tot), 1e4);
    const double span3 = std::max(std::abs(t.beta3_tot), 1e5);
    box.beta2_lo = -t.beta2_tot - span2;
    box.beta2_hi = -t.beta2_tot + span2;
    box.beta3_lo = -t.beta3_tot - span3;
    box.beta3_hi = -t.beta3_tot + span3;
    const homsim::CompensationResult res =
        homsim::compensate(cfg, t.beta2_tot, t.beta3_tot, obj, box);

    const auto table = homsim::slm_quantize(res.slm, homsim::SlmGeometry{}, rc.pdc_center_nm);
    homsim::atomic_write(join_path(a.out_dir, "slm_table.csv"), homsim::slm_table_csv(table));
    nlohmann::ordered_json j;
    j["slm_beta2_fs2"] = res.slm.beta2;
    j["slm_beta3_fs3"] = res.slm.beta3;
    j["objective"] = objective;
    j["objective_value"] = res.objective;
    j["iterations"] = res.iterations;
    j["converged"] = res.converged;
    homsim::atomic_write(join_path(a.out_dir, "compensation.json"), j.dump(2) + "\n");
    write_metadata(rc, join_path(a.out_dir, "compensate_meta.json"), res.converged);
    return 0;
}

int cmd_fit(const CommonArgs& a, const std::string& data_path, const std::string& free_arg) {
    const RunConfig rc = resolve_config(a);
    const auto cfg = rc.make_interferometer();
    const homsim::DipProfile measured = homsim::load_dip_csv(data_path);
    homsim::FitOptions opts;
    std::stringstream ss(free_arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok == "beta2") opts.fit_beta2 = true;
        else if (tok == "beta3") opts.fit_beta3 = true;
        else if (tok == "tau0") opts.fit_tau0 = true;
        else if (tok == "p") opts.fit_p = true;
        else throw homsim::MalformedInputError("--free: unknown parameter '" + tok + "'");
    }
    const homsim::FitResult res = homsim::fit_dip(measured, cfg, opts);
    homsim::atomic_write(join_path(a.out_dir, "fit.json"), homsim::fit_json(res));
    write_metadata(rc, join_path(a.out_dir, "fit_meta.json"), res.converged);
    return 0;
}

int cmd_spectrum(const CommonArgs& a, const std::string& kind, double center_nm, double fwhm_nm,
                 std::optional<double> slit_fwhm, double slit_center, int points) {
    homsim::SpectralAmplitude spec = [&]() {
        if (kind == "gaussian") return homsim::SpectralAmplitude::gaussian(center_nm, fwhm_nm);
        if (kind == "csv") throw homsim::MalformedInputError(
            "spectrum csv: use `--set pdc.csv=...` with the dip command instead");
        throw homsim::MalformedInputError("spectrum kind must be 'gaussian'");
    }();
    if (slit_fwhm) spec = spec.with_slit(*slit_fwhm, slit_center > 0 ? slit_center : center_nm);
    homsim::atomic_write(join_path(a.out_dir, "spectrum.csv"),
                         homsim::spectrum_csv(spec, points));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hong-Ou-Mandel dip simulator and dispersion toolkit"};
    app.require_subcommand(1);

    CommonArgs dip_args, sweep_args, comp_args, fit_args, spec_args;
    std::string axis, values, objective = "visibility", data_path, free_params = "beta2";
    std::string spec_kind = "gaussian";
    double spec_center = 811.0, spec_fwhm = 20.0, slit_center = 0.0;
    double slit_fwhm_raw = -1.0;
    int spec_points = 1001;

    CLI::App* dip = app.add_subcommand("dip", "simulate a dip profile and its metrics");
    add_common(dip, dip_args);

    CLI::App* sw = app.add_subcommand("sweep", "visibility/FWHM vs a dispersion coefficient");
    add_common(sw, sweep_args);
    sw->add_option("--axis", axis, "beta2 | beta3")->required();
    sw->add_option("--values", values, "comma-separated fs^2 or fs^3 values")->required();

    CLI::App* comp = app.add_subcommand("compensate", "solve for compensating SLM coefficients");
    add_common(comp, comp_args);
    comp->add_option("--objective", objective, "visibility | fwhm");

    CLI::App* fit = app.add_subcommand("fit", "fit dispersion parameters to a measured profile");
    add_common(fit, fit_args);
    fit->add_option("--data", data_path, "normalized profile CSV")->required();
    fit->add_option("--free", free_params, "comma-separated subset of beta2,beta3,tau0,p");

    CLI::App* spec = app.add_subcommand("spectrum", "write a normalized spectrum CSV");
    add_common(spec, spec_args);
    spec->add_option("kind", spec_kind, "gaussian");
    spec->add_option("center_nm", spec_center, "center wavelength");
    spec->add_option("fwhm_nm", spec_fwhm, "intensity FWHM");
    spec->add_option("--slit-fwhm", slit_fwhm_raw, "rectangular cut width in nm");
    spec->add_option("--slit-center", slit_center, "cut center in nm");
    spec->add_option("--points", spec_points, "number of CSV rows");

    CLI11_PARSE(app, argc, argv);

    try {
        if (dip->parsed()) return cmd_dip(dip_args);
        if (sw->parsed()) return cmd_sweep(sweep_args, axis, values);
        if (comp->parsed()) return cmd_compensate(comp_args, objective);
        if (fit->parsed()) return cmd_fit(fit_args, data_path, free_params);
        if (spec->parsed())
            return cmd_spectrum(spec_args, spec_kind, spec_center, spec_fwhm,
                                slit_fwhm_raw > 0 ? std::optional<double>(slit_fwhm_raw)
                                                  : std::nullopt,
                                slit_center, spec_points);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
