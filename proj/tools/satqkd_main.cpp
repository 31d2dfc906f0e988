#include "satqkd/commands.hpp"
#include "satqkd/csv.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

namespace {

// exit codes: 0 success, 1 check failure, 2 usage or validation, 3 I/O
constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct CliOverrides {
    std::optional<std::string> config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<int> threads;
    std::optional<int> xi;
    std::optional<std::uint64_t> n_data;
    std::optional<int> trials;
    std::optional<std::string> orbit;
    std::optional<double> rep_rate_hz;
    std::optional<double> window_s;
    std::optional<double> delta;
    std::optional<std::vector<int>> sweep_xi;
    std::optional<double> p_min;
    std::optional<double> p_max;
    std::optional<int> steps;
    std::optional<std::uint64_t> sweep_n;
    std::optional<int> cascade_trials;
    bool plot = false;
    bool inject_rotation_fault = false;
};

satqkd::RunConfig build_config(const CliOverrides& cli) {
    satqkd::RunConfig config;
    if (cli.config_path) config = satqkd::load_config_file(*cli.config_path);
    if (cli.seed) config.seed = *cli.seed;
    if (cli.out_dir) config.out_dir = *cli.out_dir;
    if (cli.threads) config.threads = *cli.threads;
    if (cli.xi) config.xi = *cli.xi;
    if (cli.n_data) config.n_data = *cli.n_data;
    if (cli.trials) config.trials = *cli.trials;
    if (cli.orbit) {
        config.orbit = satqkd::orbit_from_name(*cli.orbit);
        if (!config.window_set_explicitly)
            config.window_s = config.orbit.default_window_s;
    }
    if (cli.rep_rate_hz) config.rep_rate_hz = *cli.rep_rate_hz;
    if (cli.window_s) {
        config.window_s = *cli.window_s;
        config.window_set_explicitly = true;
    }
    if (cli.delta) config.delta = *cli.delta;
    if (cli.sweep_xi) config.sweep_xi = *cli.sweep_xi;
    if (cli.p_min) config.p_min = *cli.p_min;
    if (cli.p_max) config.p_max = *cli.p_max;
    if (cli.steps) config.steps = *cli.steps;
    if (cli.sweep_n) config.sweep_n = *cli.sweep_n;
    if (cli.cascade_trials) config.cascade_trials = *cli.cascade_trials;
    if (cli.plot) config.emit_plot = true;
    satqkd::validate(config);
    return config;
}

template <typename T>
void add_opt(CLI::App* app, const std::string& name, std::optional<T>& slot,
             const std::string& help) {
    app->add_option_function<T>(
           name, [&slot](const T& value) { slot = value; }, help);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"satellite rotation-channel key-distribution toolkit"};
    app.require_subcommand(1);

    CliOverrides cli;
    for (CLI::App* sub :
         {app.add_subcommand("tables", "write pilot and downlink budget tables"),
          app.add_subcommand("simulate", "run the end-to-end Monte Carlo"),
          app.add_subcommand("sweep",
                             "sweep throughput efficiency against the "
                             "interactive baseline"),
          app.add_subcommand("verify", "run the invariant checks")}) {
        add_opt<std::string>(sub, "--config", cli.config_path,
                             "key=value configuration file");
        add_opt<std::uint64_t>(sub, "--seed", cli.seed, "master seed");
        add_opt<std::string>(sub, "--out", cli.out_dir, "output directory");
        add_opt<int>(sub, "--threads", cli.threads, "worker thread count");
    }

    CLI::App* simulate = app.get_subcommand("simulate");
    add_opt<int>(simulate, "--xi", cli.xi, "pilot string length");
    add_opt<std::uint64_t>(simulate, "--n-data", cli.n_data,
                           "data qubits per window");
    add_opt<int>(simulate, "--trials", cli.trials, "number of windows");
    add_opt<std::string>(simulate, "--orbit", cli.orbit, "leo, meo or geo");
    add_opt<double>(simulate, "--f-hz", cli.rep_rate_hz, "source rate in Hz");
    add_opt<double>(simulate, "--window-s", cli.window_s, "window duration");
    add_opt<double>(simulate, "--delta", cli.delta, "attenuation");

    CLI::App* sweep = app.get_subcommand("sweep");
    sweep
        ->add_option_function<std::vector<int>>(
            "--xi-list",
            [&cli](const std::vector<int>& value) { cli.sweep_xi = value; },
            "pilot string lengths to sweep (comma separated)")
        ->delimiter(',');
    add_opt<double>(sweep, "--p-min", cli.p_min, "lowest failure probability");
    add_opt<double>(sweep, "--p-max", cli.p_max, "highest failure probability");
    add_opt<int>(sweep, "--steps", cli.steps, "grid points");
    add_opt<std::uint64_t>(sweep, "--n", cli.sweep_n, "budget per window");
    add_opt<int>(sweep, "--cascade-trials", cli.cascade_trials,
                 "baseline runs per grid point");
    sweep->add_flag("--plot", cli.plot, "also emit fig5.svg");

    CLI::App* verify = app.get_subcommand("verify");
    verify->add_flag("--inject-rotation-fault", cli.inject_rotation_fault,
                     "corrupt the rotation gate; the checks must then fail");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        const satqkd::RunConfig config = build_config(cli);
        if (app.got_subcommand("tables")) {
            satqkd::cmd_tables(config);
        } else if (app.got_subcommand("simulate")) {
            satqkd::cmd_simulate(config, std::cout);
        } else if (app.got_subcommand("sweep")) {
            satqkd::cmd_sweep(config);
        } else {
            const int failures =
                satqkd::cmd_verify(config, std::cout, cli.inject_rotation_fault);
            if (failures > 0) return kExitCheckFailure;
        }
    } catch (const satqkd::io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitOk;
}
