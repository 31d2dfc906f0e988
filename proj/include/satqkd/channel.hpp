#pragma once

#include "satqkd/quantum.hpp"
#include "satqkd/rng.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace satqkd {

enum class Orbit { leo, meo, geo };

// Orbit preset: only the stationarity-window default differs between classes
// here; rep rate and attenuation live in LinkParams.
struct OrbitClass {
    Orbit tag = Orbit::leo;
    double default_window_s = 0.5;

    static OrbitClass leo() { return {Orbit::leo, 0.5}; }
    static OrbitClass meo() { return {Orbit::meo, 0.5}; }
    static OrbitClass geo() { return {Orbit::geo, 10.0}; }
};

std::string_view orbit_name(Orbit orbit);
OrbitClass orbit_from_name(std::string_view name);

/// One stationarity window: the phase-rotation angle the link applies to
/// every qubit sent while the window holds.
struct ChannelInstance {
    double theta = 0.0; // radians, [0, 2*pi)
    double window_s = 0.5;
};

struct LinkParams {
    double rep_rate_hz = 1e8;
    double window_s = 0.5;
    double attenuation = 5e-5;
    OrbitClass orbit = OrbitClass::leo();
};

/// Draws a fresh window: theta uniform over [0, 2*pi), duration from the
/// orbit default unless overridden.
ChannelInstance sample_channel(const OrbitClass& orbit, Rng& rng,
                               std::optional<double> window_override = {});

/// Applies the window's rotation to each listed qubit of `state`.
StateVector damage(const StateVector& state, const ChannelInstance& channel,
                   std::span<const int> targets);

enum class TransmitMode { expected, bernoulli };

/// Survivor count after attenuation delta: the rounded expectation, or an
/// exact per-qubit Bernoulli draw.
std::uint64_t transmit_count(std::uint64_t sent, double delta, TransmitMode mode,
                             Rng& rng);

} // namespace satqkd
