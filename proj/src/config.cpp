#include "satqkd/config.hpp"

#include "satqkd/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace satqkd {
namespace {

std::string trim(const std::string& s) {
    std::size_t begin = 0, end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin])))
        ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1])))
        --end;
    return s.substr(begin, end - begin);
}

double parse_real(const std::string& key, const std::string& value) {
    try {
        return csv::parse_double(value);
    } catch (const std::exception&) {
        throw config_error("bad value for " + key + ": " + value);
    }
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
    std::int64_t out = 0;
    const auto [ptr, ec] =
        std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw config_error("bad value for " + key + ": " + value);
    return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::uint64_t out = 0;
    const auto [ptr, ec] =
        std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw config_error("bad value for " + key + ": " + value);
    return out;
}

bool parse_flag(const std::string& key, const std::string& value) {
    if (value == "0" || value == "false") return false;
    if (value == "1" || value == "true") return true;
    throw config_error("bad value for " + key + ": " + value);
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& key, const std::string& value,
                          Parse parse) {
    std::vector<T> out;
    std::istringstream in(value);
    std::string item;
    while (std::getline(in, item, ','))
        out.push_back(parse(key, trim(item)));
    if (out.empty()) throw config_error("empty list for " + key);
    return out;
}

} // namespace

void apply_config_entry(RunConfig& config, const std::string& key,
                        const std::string& value) {
    if (key == "seed") {
        config.seed = parse_u64(key, value);
    } else if (key == "orbit") {
        try {
            config.orbit = orbit_from_name(value);
        } catch (const std::exception&) {
            throw config_error("bad value for orbit: " + value);
        }
    } else if (key == "f_hz") {
        config.rep_rate_hz = parse_real(key, value);
    } else if (key == "window_s") {
        config.window_s = parse_real(key, value);
        config.window_set_explicitly = true;
    } else if (key == "delta") {
        config.delta = parse_real(key, value);
    } else if (key == "xi") {
        config.xi = static_cast<int>(parse_int(key, value));
    } else if (key == "n_data") {
        config.n_data = parse_u64(key, value);
    } else if (key == "trials") {
        config.trials = static_cast<int>(parse_int(key, value));
    } else if (key == "out_dir") {
        config.out_dir = value;
    } else if (key == "transmit_mode") {
        if (value == "expected")
            config.transmit_mode = TransmitMode::expected;
        else if (value == "bernoulli")
            config.transmit_mode = TransmitMode::bernoulli;
        else
            throw config_error("bad value for transmit_mode: " + value);
    } else if (key == "threads") {
        config.threads = static_cast<int>(parse_int(key, value));
    } else if (key == "table1_xi_min") {
        config.table1_xi_min = static_cast<int>(parse_int(key, value));
    } else if (key == "table1_xi_max") {
        config.table1_xi_max = static_cast<int>(parse_int(key, value));
    } else if (key == "table2_f_hz") {
        config.table2_f_hz = parse_list<double>(key, value, parse_real);
    } else if (key == "fig4_xi_min") {
        config.fig4_xi_min = static_cast<int>(parse_int(key, value));
    } else if (key == "fig4_xi_max") {
        config.fig4_xi_max = static_cast<int>(parse_int(key, value));
    } else if (key == "sweep_xi") {
        config.sweep_xi = parse_list<int>(key, value,
                                          [](const std::string& k,
                                             const std::string& v) {
                                              return static_cast<int>(
                                                  parse_int(k, v));
                                          });
    } else if (key == "p_min") {
        config.p_min = parse_real(key, value);
    } else if (key == "p_max") {
        config.p_max = parse_real(key, value);
    } else if (key == "steps") {
        config.steps = static_cast<int>(parse_int(key, value));
    } else if (key == "sweep_n") {
        config.sweep_n = parse_u64(key, value);
    } else if (key == "cascade_trials") {
        config.cascade_trials = static_cast<int>(parse_int(key, value));
    } else if (key == "cascade_passes") {
        config.cascade_passes = static_cast<int>(parse_int(key, value));
    } else if (key == "plot") {
        config.emit_plot = parse_flag(key, value);
    } else {
        throw config_error("unknown config key: " + key);
    }
}

RunConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config file " + path.string());
    RunConfig config;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw config_error("line " + std::to_string(line_number) +
                               ": expected key=value");
        apply_config_entry(config, trim(stripped.substr(0, eq)),
                           trim(stripped.substr(eq + 1)));
    }
    if (in.bad()) throw io_error("read failure on " + path.string());
    return config;
}

void validate(const RunConfig& config) {
    if (!(config.rep_rate_hz > 0.0))
        throw config_error("f_hz must be positive");
    if (config.window_set_explicitly && !(config.window_s > 0.0))
        throw config_error("window_s must be positive");
    if (!(config.delta >= 0.0 && config.delta <= 1.0))
        throw config_error("delta must lie in [0, 1]");
    if (config.xi < 1 || config.xi > 20)
        throw config_error("xi must lie in [1, 20]");
    if (config.n_data < 1) throw config_error("n_data must be positive");
    if (config.trials < 1) throw config_error("trials must be positive");
    if (config.threads < 1 || config.threads > 256)
        throw config_error("threads must lie in [1, 256]");
    if (config.table1_xi_min < 1 || config.table1_xi_max > 20 ||
        config.table1_xi_min > config.table1_xi_max)
        throw config_error("bad table1 xi range");
    if (config.table2_f_hz.empty())
        throw config_error("table2_f_hz must be nonempty");
    for (double f : config.table2_f_hz)
        if (!(f > 0.0)) throw config_error("table2_f_hz entries must be positive");
    if (config.fig4_xi_min < 1 || config.fig4_xi_max > 20 ||
        config.fig4_xi_min > config.fig4_xi_max)
        throw config_error("bad fig4 xi range");
    if (config.sweep_xi.empty()) throw config_error("sweep_xi must be nonempty");
    for (int xi : config.sweep_xi)
        if (xi < 1 || xi > 57) throw config_error("sweep_xi entries out of range");
    if (!(config.p_min >= 0.0 && config.p_min < 1.0) ||
        !(config.p_max >= 0.0 && config.p_max < 1.0) ||
        config.p_min > config.p_max)
        throw config_error("sweep failure-probability range must satisfy "
                           "0 <= p_min <= p_max < 1");
    if (config.steps < 2) throw config_error("steps must be >= 2");
    if (config.sweep_n < 16) throw config_error("sweep_n must be >= 16");
    if (config.cascade_trials < 1)
        throw config_error("cascade_trials must be positive");
    if (config.cascade_passes < 1)
        throw config_error("cascade_passes must be positive");
}

double effective_window_s(const RunConfig& config) {
    return config.window_set_explicitly ? config.window_s
                                        : config.orbit.default_window_s;
}

LinkParams link_params(const RunConfig& config) {
    return {config.rep_rate_hz, effective_window_s(config), config.delta,
            config.orbit};
}

} // namespace satqkd
