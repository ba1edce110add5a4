#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "homsim/interference.hpp"

namespace homsim {

/// Fully-resolved run configuration. Parsed from JSON; presets S1/S2/S3
/// expand to the standard pump/PDC width combinations. Unknown keys are
/// rejected.
struct RunConfig {
    // pump: fwhm_nm == 0 means monochromatic
    double pump_center_nm = 405.5;
    double pump_fwhm_nm = 1.0;
    std::string pump_csv;

    double pdc_center_nm = 811.0;
    double pdc_fwhm_nm = 20.0;
    std::string pdc_csv;
    std::optional<double> slit_fwhm_nm;
    double slit_center_nm = 811.0;

    double bs_t = 0.467;
    double bs_r = 0.533;

    // exactly one of these drives the purity model
    std::optional<double> purity_theta_deg;
    std::optional<double> purity_v_i;
    std::optional<double> purity_p; // default 0.913 when none given

    ChannelPhase signal;
    ChannelPhase idler;

    int n_omega = 401;
    int n_omega_p = 201;

    double tau_start_fs = -300.0;
    double tau_stop_fs = 300.0;
    double tau_step_fs = 2.0;

    // explicit dispersion totals override the channel-derived ones
    std::optional<double> beta2_tot_fs2;
    std::optional<double> beta3_tot_fs3;
    double tau0_fs = 0.0;

    bool normalize = true;
    std::string label = "custom";

    InterferometerConfig make_interferometer() const;
    DispersionTotals totals() const;
    std::vector<double> tau_grid() const;

    /// Effective-parameter echo, defaults included.
    nlohmann::ordered_json echo() const;
    /// FNV-1a hash of the canonical echo, as hex.
    std::string hash() const;
};

RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

/// Apply repeatable `--set key=value` overrides (dotted paths) onto raw JSON.
void apply_override(nlohmann::json& j, const std::string& assignment);

/// Default configuration for a named preset (S1, S2, S3).
nlohmann::json preset_json(const std::string& name);

} // namespace homsim
