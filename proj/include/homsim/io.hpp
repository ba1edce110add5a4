#pragma once

#include <string>

#include "homsim/interference.hpp"
#include "homsim/inverse.hpp"
#include "homsim/metrics.hpp"

namespace homsim {

/// Fixed numeric formatting for deterministic outputs: 9 significant digits,
/// '.' decimal separator.
std::string format_number(double v);

/// Write via a temp file in the same directory, then rename.
void atomic_write(const std::string& path, const std::string& contents);

std::string dip_profile_csv(const DipProfile& profile);
std::string sweep_csv(const SweepResult& sweep);
std::string spectrum_csv(const SpectralAmplitude& spec, int n_points);
std::string slm_table_csv(const std::vector<double>& table);

std::string metrics_json(const DipMetrics& metrics);
std::string fit_json(const FitResult& fit);

/// Parse a normalized dip profile from `tau_fs,probability[,normalized]` CSV.
DipProfile load_dip_csv(const std::string& path);

} // namespace homsim
