#include "homsim/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "homsim/errors.hpp"
#include "homsim/units.hpp"

namespace homsim {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void atomic_write(const std::string& path, const std::string& contents) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out << contents;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

std::string dip_profile_csv(const DipProfile& profile) {
    std::ostringstream out;
    out << "tau_fs,probability,normalized_probability\n";
    for (size_t k = 0; k < profile.tau_samples.size(); ++k) {
        const double v = profile.probability[k];
        const double raw = profile.normalized ? v * profile.baseline : v;
        const double norm = profile.normalized ? v : v / profile.baseline;
        out << format_number(profile.tau_samples[k]) << ',' << format_number(raw) << ','
            << format_number(norm) << '\n';
    }
    return out.str();
}

std::string sweep_csv(const SweepResult& sweep) {
    std::ostringstream out;
    out << "value,visibility,fwhm_fs\n";
    for (size_t k = 0; k < sweep.values.size(); ++k)
        out << format_number(sweep.values[k]) << ',' << format_number(sweep.visibility[k])
            << ',' << format_number(sweep.fwhm[k]) << '\n';
    return out.str();
}

std::string spectrum_csv(const SpectralAmplitude& spec, int n_points) {
    std::ostringstream out;
    out << "wavelength_nm,intensity\n";
    const double lo = spec.support_lo();
    const double hi = spec.support_hi();
    // emit in ascending wavelength (descending detuning)
    for (int i = n_points - 1; i >= 0; --i) {
        const double w = lo + (hi - lo) * i / (n_points - 1);
        const double wl = wavelength_from_detuning(w, spec.center_wavelength());
        out << format_number(wl) << ',' << format_number(spec.intensity(w)) << '\n';
    }
    return out.str();
}

std::string slm_table_csv(const std::vector<double>& table) {
    std::ostringstream out;
    out << "pixel,phase_rad\n";
    for (size_t i = 0; i < table.size(); ++i)
        out << i << ',' << format_number(table[i]) << '\n';
    return out.str();
}

std::string metrics_json(const DipMetrics& m) {
    nlohmann::ordered_json j;
    j["visibility"] = m.visibility;
    j["fwhm_fs"] = m.fwhm;
    j["baseline"] = m.baseline;
    j["min_value"] = m.min_value;
    j["min_position_fs"] = m.min_position;
    j["sidelobes"] = nlohmann::ordered_json::array();
    for (const auto& s : m.sidelobes)
        j["sidelobes"].push_back({{"tau_fs", s.tau}, {"height", s.height}, {"paired", s.paired}});
    return j.dump(2) + "\n";
}

std::string fit_json(const FitResult& f) {
    nlohmann::ordered_json j;
    j["beta2_fs2"] = f.beta2;
    j["beta3_fs3"] = f.beta3;
    j["tau0_fs"] = f.tau0;
    j["p"] = f.p;
    j["residual"] = f.residual;
    j["iterations"] = f.iterations;
    j["converged"] = f.converged;
    return j.dump(2) + "\n";
}

DipProfile load_dip_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedInputError("cannot open profile: " + path);
    DipProfile p;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        std::istringstream ss(line);
        std::string a, b, c;
        std::getline(ss, a, ',');
        std::getline(ss, b, ',');
        const bool has_third = static_cast<bool>(std::getline(ss, c));
        char* end = nullptr;
        const double tau = std::strtod(a.c_str(), &end);
        if (end == a.c_str()) {
            if (lineno == 1) continue; // header
            throw MalformedInputError(path + ": row " + std::to_string(lineno) +
                                      ": cannot parse tau '" + a + "'");
        }
        const std::string& vs = has_third ? c : b;
        const double v = std::strtod(vs.c_str(), &end);
        if (end == vs.c_str())
            throw MalformedInputError(path + ": row " + std::to_string(lineno) +
                                      ": cannot parse probability '" + vs + "'");
        p.tau_samples.push_back(tau);
        p.probability.push_back(v);
    }
    if (p.tau_samples.empty()) throw MalformedInputError(path + ": no data rows");
    p.baseline = 1.0;
    p.normalized = true;
    return p;
}

} // namespace homsim
