#include "homsim/phase.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "homsim/errors.hpp"
#include "homsim/units.hpp"

namespace homsim {

PhaseExpansion total_phase(const ChannelPhase& ch) {
    PhaseExpansion total;
    total.label = "total";
    for (const auto& e : ch.elements) total += e;
    return total;
}

DispersionTotals dispersion_totals(const ChannelPhase& signal, const ChannelPhase& idler) {
    const PhaseExpansion s = total_phase(signal);
    const PhaseExpansion i = total_phase(idler);
    DispersionTotals t;
    t.tau = s.beta1 - i.beta1;
    t.beta2_tot = s.beta2 - i.beta2;
    t.beta3_tot = s.beta3 - i.beta3;
    return t;
}

double material_beta(const MaterialDispersion& m, double length_mm, int order) {
    if (length_mm < 0.0) throw std::invalid_argument("material_beta: negative length");
    if (order == 2) return m.d2 * length_mm;
    if (order == 3) return m.d3 * length_mm;
    throw std::invalid_argument("material_beta: unsupported order " + std::to_string(order));
}

PhaseTerms phase_term_values(double beta2_tot, double beta3_tot, double omega_p, double omega) {
    PhaseTerms t;
    t.phi2 = beta2_tot * omega_p * omega;
    t.phi3 = 0.25 * beta3_tot * omega_p * omega_p * omega +
             beta3_tot * omega * omega * omega / 3.0;
    return t;
}

double slm_pixel_detuning(const SlmGeometry& geom, int pixel, double center_wavelength_nm) {
    const double pos_mm = (pixel - geom.center_pixel) * geom.pixel_pitch_mm;
    const double wavelength = center_wavelength_nm + pos_mm * geom.nm_per_mm;
    return detuning_from_wavelength(wavelength, center_wavelength_nm);
}

std::vector<double> slm_quantize(const PhaseExpansion& target, const SlmGeometry& geom,
                                 double center_wavelength_nm, bool wrap) {
    if (geom.pixel_count <= 0 || geom.nm_per_mm <= 0.0 || geom.pixel_pitch_mm <= 0.0)
        throw std::invalid_argument("slm_quantize: invalid SLM geometry");
    std::vector<double> table(static_cast<size_t>(geom.pixel_count));
    for (int px = 0; px < geom.pixel_count; ++px) {
        double phi = target.eval(slm_pixel_detuning(geom, px, center_wavelength_nm));
        if (wrap) {
            phi = std::fmod(phi, 2.0 * pi);
            if (phi < 0.0) phi += 2.0 * pi;
        }
        table[static_cast<size_t>(px)] = phi;
    }
    return table;
}

std::vector<MaterialDispersion> load_material_catalog(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedInputError("cannot open material catalog: " + path);
    std::vector<MaterialDispersion> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        std::istringstream ss(line);
        std::string name, d2s, d3s;
        if (!std::getline(ss, name, ',') || !std::getline(ss, d2s, ',') || !std::getline(ss, d3s))
            throw MalformedInputError(path + ": row " + std::to_string(lineno) +
                                      ": expected name,d2,d3");
        char* end = nullptr;
        const double d2 = std::strtod(d2s.c_str(), &end);
        if (end == d2s.c_str()) {
            if (lineno == 1) continue; // header
            throw MalformedInputError(path + ": row " + std::to_string(lineno) +
                                      ": cannot parse d2 '" + d2s + "'");
        }
        const double d3 = std::strtod(d3s.c_str(), &end);
        if (end == d3s.c_str())
            throw MalformedInputError(path + ": row " + std::to_string(lineno) +
                                      ": cannot parse d3 '" + d3s + "'");
        out.push_back({name, d2, d3});
    }
    return out;
}

const MaterialDispersion& find_material(const std::vector<MaterialDispersion>& catalog,
                                        const std::string& name) {
    for (const auto& m : catalog)
        if (m.name == name) return m;
    throw MalformedInputError("unknown material: " + name);
}

const std::vector<MaterialDispersion>& builtin_materials() {
    static const std::vector<MaterialDispersion> catalog = {
        {"fused_silica", 35.0, 30.0},
        {"znse", 0.0, 870.0},
    };
    return catalog;
}

} // namespace homsim
