#include "satqkd/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace satqkd {

std::string_view orbit_name(Orbit orbit) {
    switch (orbit) {
        case Orbit::leo: return "leo";
        case Orbit::meo: return "meo";
        case Orbit::geo: return "geo";
    }
    throw std::invalid_argument("unknown orbit tag");
}

OrbitClass orbit_from_name(std::string_view name) {
    if (name == "leo") return OrbitClass::leo();
    if (name == "meo") return OrbitClass::meo();
    if (name == "geo") return OrbitClass::geo();
    throw std::invalid_argument("unknown orbit class: " + std::string(name));
}

ChannelInstance sample_channel(const OrbitClass& orbit, Rng& rng,
                               std::optional<double> window_override) {
    const double window = window_override.value_or(orbit.default_window_s);
    if (!(window > 0.0) || !std::isfinite(window))
        throw std::invalid_argument("window duration must be positive");
    // uniform01 < 1, so theta stays inside [0, 2*pi)
    return {rng.uniform01() * 2.0 * std::numbers::pi, window};
}

StateVector damage(const StateVector& state, const ChannelInstance& channel,
                   std::span<const int> targets) {
    const Gate2x2 u = gate_u_theta(channel.theta);
    StateVector out = state;
    for (int target : targets) out = apply_gate(out, u, target);
    return out;
}

std::uint64_t transmit_count(std::uint64_t sent, double delta, TransmitMode mode,
                             Rng& rng) {
    if (!(delta >= 0.0 && delta <= 1.0))
        throw std::invalid_argument("attenuation must lie in [0, 1]");
    if (mode == TransmitMode::expected)
        return static_cast<std::uint64_t>(
            std::llround(static_cast<double>(sent) * delta));
    return rng.binomial(sent, delta);
}

} // namespace satqkd
