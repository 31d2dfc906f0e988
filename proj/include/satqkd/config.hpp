#pragma once

#include "satqkd/channel.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace satqkd {

struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Flat run configuration. Defaults reproduce the low-orbit reference
/// scenario: 100 MHz source, 0.5 s window, 5e-5 attenuation, xi = 5.
struct RunConfig {
    std::uint64_t seed = 1;
    OrbitClass orbit = OrbitClass::leo();
    double rep_rate_hz = 1e8;
    double window_s = 0.5;
    bool window_set_explicitly = false;
    double delta = 5e-5;
    int xi = 5;
    std::uint64_t n_data = 2446;
    int trials = 1000;
    std::string out_dir = ".";
    TransmitMode transmit_mode = TransmitMode::expected;
    int threads = 1;

    // tables command
    int table1_xi_min = 1;
    int table1_xi_max = 10;
    std::vector<double> table2_f_hz = {1e10, 5e9, 1e9, 5e8, 1e8};
    int fig4_xi_min = 1;
    int fig4_xi_max = 16;

    // sweep command
    std::vector<int> sweep_xi = {10, 20, 30};
    double p_min = 0.0;
    double p_max = 0.99;
    int steps = 100;
    std::uint64_t sweep_n = 2500;
    int cascade_trials = 100;
    int cascade_passes = 4;
    bool emit_plot = false;
};

/// Applies one key=value assignment. Unknown keys and malformed values are
/// rejected with config_error.
void apply_config_entry(RunConfig& config, const std::string& key,
                        const std::string& value);

/// Loads a flat key=value file ('#' starts a comment line).
RunConfig load_config_file(const std::filesystem::path& path);

/// Range-checks every field; throws config_error on the first violation.
void validate(const RunConfig& config);

/// The window the run actually uses: explicit setting, else orbit default.
double effective_window_s(const RunConfig& config);

LinkParams link_params(const RunConfig& config);

} // namespace satqkd
