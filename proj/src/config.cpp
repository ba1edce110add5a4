#include "homsim/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "homsim/errors.hpp"
#include "homsim/phase.hpp"

namespace homsim {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::string& where,
                    const std::set<std::string>& allowed) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw MalformedInputError("config: unknown key '" + where + it.key() + "'");
}

double num(const json& j, const std::string& key, double fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    if (!j.at(key).is_number())
        throw MalformedInputError("config: key '" + key + "' must be a number");
    return j.at(key).get<double>();
}

ChannelPhase parse_elements(const json& arr, const std::string& where) {
    ChannelPhase ch;
    if (!arr.is_array())
        throw MalformedInputError("config: '" + where + "' must be an array");
    for (const auto& e : arr) {
        reject_unknown(e, where + ".",
                       {"label", "beta0_rad", "beta1_fs", "beta2_fs2", "beta3_fs3", "material",
                        "length_mm"});
        PhaseExpansion pe;
        pe.label = e.value("label", std::string("custom"));
        pe.beta0 = num(e, "beta0_rad", 0.0);
        pe.beta1 = num(e, "beta1_fs", 0.0);
        pe.beta2 = num(e, "beta2_fs2", 0.0);
        pe.beta3 = num(e, "beta3_fs3", 0.0);
        if (e.contains("material") && !e.at("material").is_null()) {
            const auto& m = find_material(builtin_materials(), e.at("material").get<std::string>());
            const double len = num(e, "length_mm", 0.0);
            pe.beta2 += material_beta(m, len, 2);
            pe.beta3 += material_beta(m, len, 3);
        }
        ch.elements.push_back(pe);
    }
    return ch;
}

json elements_json(const ChannelPhase& ch) {
    json arr = json::array();
    for (const auto& e : ch.elements)
        arr.push_back({{"label", e.label},
                       {"beta0_rad", e.beta0},
                       {"beta1_fs", e.beta1},
                       {"beta2_fs2", e.beta2},
                       {"beta3_fs3", e.beta3}});
    return arr;
}

} // namespace

nlohmann::json preset_json(const std::string& name) {
    json j;
    if (name == "S1") {
        j["pump"] = {{"fwhm_nm", 1.0}};
        j["pdc"] = {{"fwhm_nm", 20.0}};
    } else if (name == "S2") {
        j["pump"] = {{"fwhm_nm", 0.5}};
        j["pdc"] = {{"fwhm_nm", 20.0}};
    } else if (name == "S3") {
        j["pump"] = {{"fwhm_nm", 1.0}};
        j["pdc"] = {{"fwhm_nm", 20.0}, {"slit_fwhm_nm", 10.0}};
    } else {
        throw MalformedInputError("config: unknown preset '" + name + "'");
    }
    return j;
}

RunConfig parse_run_config(const nlohmann::json& input) {
    json j = input;
    RunConfig cfg;
    reject_unknown(j, "",
                   {"preset", "pump", "pdc", "beamsplitter", "purity", "signal_elements",
                    "idler_elements", "grid", "tau_fs", "beta2_tot_fs2", "beta3_tot_fs3",
                    "tau0_fs", "normalize"});
    if (j.contains("preset")) {
        cfg.label = j.at("preset").get<std::string>();
        json base = preset_json(cfg.label);
        // explicit keys win over the preset expansion
        base.merge_patch(j);
        base.erase("preset");
        j = base;
    }
    if (j.contains("pump")) {
        const json& p = j.at("pump");
        reject_unknown(p, "pump.", {"center_nm", "fwhm_nm", "csv"});
        cfg.pump_center_nm = num(p, "center_nm", cfg.pump_center_nm);
        cfg.pump_fwhm_nm = num(p, "fwhm_nm", cfg.pump_fwhm_nm);
        if (p.contains("csv") && !p.at("csv").is_null())
            cfg.pump_csv = p.at("csv").get<std::string>();
    }
    if (j.contains("pdc")) {
        const json& p = j.at("pdc");
        reject_unknown(p, "pdc.", {"center_nm", "fwhm_nm", "csv", "slit_fwhm_nm", "slit_center_nm"});
        cfg.pdc_center_nm = num(p, "center_nm", cfg.pdc_center_nm);
        cfg.pdc_fwhm_nm = num(p, "fwhm_nm", cfg.pdc_fwhm_nm);
        if (p.contains("csv") && !p.at("csv").is_null())
            cfg.pdc_csv = p.at("csv").get<std::string>();
        if (p.contains("slit_fwhm_nm") && !p.at("slit_fwhm_nm").is_null())
            cfg.slit_fwhm_nm = p.at("slit_fwhm_nm").get<double>();
        cfg.slit_center_nm = num(p, "slit_center_nm", cfg.pdc_center_nm);
    }
    if (j.contains("beamsplitter")) {
        const json& b = j.at("beamsplitter");
        reject_unknown(b, "beamsplitter.", {"t", "r"});
        cfg.bs_t = num(b, "t", cfg.bs_t);
        cfg.bs_r = num(b, "r", cfg.bs_r);
    }
    if (j.contains("purity")) {
        const json& p = j.at("purity");
        reject_unknown(p, "purity.", {"theta_deg", "v_i", "p"});
        int given = 0;
        if (p.contains("theta_deg") && !p.at("theta_deg").is_null()) {
            cfg.purity_theta_deg = p.at("theta_deg").get<double>();
            ++given;
        }
        if (p.contains("v_i") && !p.at("v_i").is_null()) {
            cfg.purity_v_i = p.at("v_i").get<double>();
            ++given;
        }
        if (p.contains("p") && !p.at("p").is_null()) {
            cfg.purity_p = p.at("p").get<double>();
            ++given;
        }
        if (given > 1)
            throw MalformedInputError("config: purity accepts exactly one of theta_deg, v_i, p");
    }
    if (j.contains("signal_elements"))
        cfg.signal = parse_elements(j.at("signal_elements"), "signal_elements");
    if (j.contains("idler_elements"))
        cfg.idler = parse_elements(j.at("idler_elements"), "idler_elements");
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        reject_unknown(g, "grid.", {"n_omega", "n_omega_p"});
        cfg.n_omega = static_cast<int>(num(g, "n_omega", cfg.n_omega));
        cfg.n_omega_p = static_cast<int>(num(g, "n_omega_p", cfg.n_omega_p));
        if (cfg.n_omega < 3 || cfg.n_omega_p < 1)
            throw MalformedInputError("config: grid sizes out of range");
    }
    if (j.contains("tau_fs")) {
        const json& t = j.at("tau_fs");
        reject_unknown(t, "tau_fs.", {"start", "stop", "step"});
        cfg.tau_start_fs = num(t, "start", cfg.tau_start_fs);
        cfg.tau_stop_fs = num(t, "stop", cfg.tau_stop_fs);
        cfg.tau_step_fs = num(t, "step", cfg.tau_step_fs);
        if (cfg.tau_step_fs <= 0.0 || cfg.tau_stop_fs <= cfg.tau_start_fs)
            throw MalformedInputError("config: tau_fs requires start < stop and step > 0");
    }
    if (j.contains("beta2_tot_fs2") && !j.at("beta2_tot_fs2").is_null())
        cfg.beta2_tot_fs2 = j.at("beta2_tot_fs2").get<double>();
    if (j.contains("beta3_tot_fs3") && !j.at("beta3_tot_fs3").is_null())
        cfg.beta3_tot_fs3 = j.at("beta3_tot_fs3").get<double>();
    cfg.tau0_fs = num(j, "tau0_fs", 0.0);
    if (j.contains("normalize")) cfg.normalize = j.at("normalize").get<bool>();
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedInputError("cannot open config: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw MalformedInputError(path + ": invalid JSON: " + e.what());
    }
    return parse_run_config(j);
}

InterferometerConfig RunConfig::make_interferometer() const {
    std::optional<SpectralAmplitude> pump;
    if (!pump_csv.empty())
        pump = SpectralAmplitude::from_csv(pump_csv, pump_center_nm);
    else if (pump_fwhm_nm > 0.0)
        pump = SpectralAmplitude::gaussian(pump_center_nm, pump_fwhm_nm);

    SpectralAmplitude pdc = !pdc_csv.empty()
                                ? SpectralAmplitude::from_csv(pdc_csv, pdc_center_nm)
                                : SpectralAmplitude::gaussian(pdc_center_nm, pdc_fwhm_nm);
    if (slit_fwhm_nm) pdc = pdc.with_slit(*slit_fwhm_nm, slit_center_nm);

    PurityModel purity = PurityModel::from_purity(0.913);
    if (purity_theta_deg) purity = PurityModel::from_theta(*purity_theta_deg);
    else if (purity_v_i) purity = PurityModel::from_interferogram_visibility(*purity_v_i);
    else if (purity_p) purity = PurityModel::from_purity(*purity_p);

    InterferometerConfig cfg{std::move(pump), std::move(pdc), BeamSplitter{bs_t, bs_r},
                             purity,          signal,         idler};
    cfg.bs.validate();
    cfg.n_omega = n_omega;
    cfg.n_omega_p = n_omega_p;
    return cfg;
}

DispersionTotals RunConfig::totals() const {
    DispersionTotals t = dispersion_totals(signal, idler);
    if (beta2_tot_fs2) t.beta2_tot = *beta2_tot_fs2;
    if (beta3_tot_fs3) t.beta3_tot = *beta3_tot_fs3;
    t.tau += tau0_fs;
    return t;
}

std::vector<double> RunConfig::tau_grid() const {
    std::vector<double> g;
    for (double t = tau_start_fs; t <= tau_stop_fs + 1e-9 * tau_step_fs; t += tau_step_fs)
        g.push_back(t);
    return g;
}

nlohmann::ordered_json RunConfig::echo() const {
    nlohmann::ordered_json j;
    j["label"] = label;
    j["pump"] = {{"center_nm", pump_center_nm}, {"fwhm_nm", pump_fwhm_nm}, {"csv", pump_csv}};
    j["pdc"] = {{"center_nm", pdc_center_nm},
                {"fwhm_nm", pdc_fwhm_nm},
                {"csv", pdc_csv},
                {"slit_fwhm_nm", slit_fwhm_nm ? nlohmann::ordered_json(*slit_fwhm_nm)
                                              : nlohmann::ordered_json(nullptr)},
                {"slit_center_nm", slit_center_nm}};
    j["beamsplitter"] = {{"t", bs_t}, {"r", bs_r}};
    PurityModel purity = PurityModel::from_purity(0.913);
    if (purity_theta_deg) purity = PurityModel::from_theta(*purity_theta_deg);
    else if (purity_v_i) purity = PurityModel::from_interferogram_visibility(*purity_v_i);
    else if (purity_p) purity = PurityModel::from_purity(*purity_p);
    j["purity"] = {{"theta_deg", purity.theta_deg}, {"v_i", purity.v_i}, {"p", purity.p}};
    j["signal_elements"] = elements_json(signal);
    j["idler_elements"] = elements_json(idler);
    j["grid"] = {{"n_omega", n_omega}, {"n_omega_p", n_omega_p}};
    j["tau_fs"] = {{"start", tau_start_fs}, {"stop", tau_stop_fs}, {"step", tau_step_fs}};
    const DispersionTotals t = totals();
    j["beta2_tot_fs2"] = t.beta2_tot;
    j["beta3_tot_fs3"] = t.beta3_tot;
    j["tau0_fs"] = tau0_fs;
    j["normalize"] = normalize;
    return j;
}

std::string RunConfig::hash() const {
    const std::string s = echo().dump();
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void apply_override(nlohmann::json& j, const std::string& assignment) {
    const size_t eq = assignment.find('=');
    if (eq == std::string::npos)
        throw MalformedInputError("--set expects key=value, got '" + assignment + "'");
    const std::string path = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);
    json parsed;
    try {
        parsed = json::parse(value);
    } catch (const json::exception&) {
        parsed = value; // plain string
    }
    json* node = &j;
    size_t pos = 0;
    while (true) {
        const size_t dot = path.find('.', pos);
        const std::string key = path.substr(pos, dot == std::string::npos ? dot : dot - pos);
        if (key.empty()) throw MalformedInputError("--set: empty key segment in '" + path + "'");
        if (dot == std::string::npos) {
            (*node)[key] = parsed;
            break;
        }
        node = &(*node)[key];
        pos = dot + 1;
    }
}

} // namespace homsim
