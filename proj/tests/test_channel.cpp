#include "doctest.h"

#include "satqkd/channel.hpp"
#include "satqkd/quantum.hpp"
#include "satqkd/rng.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

using namespace satqkd;

namespace {
const double kPi = std::acos(-1.0);
}

TEST_CASE("orbit presets expose the stationarity windows") {
    CHECK(OrbitClass::leo().default_window_s == 0.5);
    CHECK(OrbitClass::meo().default_window_s == 0.5);
    CHECK(OrbitClass::geo().default_window_s == 10.0);
    CHECK(orbit_name(Orbit::geo) == "geo");
    CHECK(orbit_from_name("meo").tag == Orbit::meo);
    CHECK_THROWS_AS(orbit_from_name("ground"), std::invalid_argument);
}

TEST_CASE("channel sampling is seeded and respects the window override") {
    Rng a(404), b(404);
    const ChannelInstance first = sample_channel(OrbitClass::leo(), a);
    const ChannelInstance second = sample_channel(OrbitClass::leo(), b);
    CHECK(first.theta == second.theta);
    CHECK(first.window_s == 0.5);
    CHECK(first.theta >= 0.0);
    CHECK(first.theta < 2.0 * kPi);

    Rng c(404);
    const ChannelInstance overridden = sample_channel(OrbitClass::geo(), c, 2.5);
    CHECK(overridden.window_s == 2.5);
    CHECK_THROWS_AS(sample_channel(OrbitClass::leo(), c, 0.0),
                    std::invalid_argument);
}

TEST_CASE("sampled angles are uniform over the full circle") {
    Rng rng(505);
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        sum += sample_channel(OrbitClass::leo(), rng).theta;
    const double mean = sum / n;
    const double sigma = (2.0 * kPi / std::sqrt(12.0)) / std::sqrt(double(n));
    CHECK(std::abs(mean - kPi) < 3.0 * sigma);
}

TEST_CASE("zero rotation leaves any state unchanged") {
    const StateVector plus =
        apply_gate(make_basis_state(1, 0), Gate2x2::hadamard(), 0);
    const std::array<int, 1> targets{0};
    const StateVector out = damage(plus, ChannelInstance{0.0, 0.5}, targets);
    CHECK(fidelity(out, plus) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("quarter-turn damage overlaps the plus state at one half") {
    const StateVector plus =
        apply_gate(make_basis_state(1, 0), Gate2x2::hadamard(), 0);
    const std::array<int, 1> targets{0};
    const StateVector out = damage(plus, ChannelInstance{kPi / 2.0, 0.5}, targets);
    CHECK(fidelity(out, plus) == doctest::Approx(0.5).epsilon(1e-9));

    // Two independent qubits damaged together: the overlaps multiply.
    const StateVector pair = tensor(plus, plus);
    const std::array<int, 2> both{0, 1};
    const StateVector damaged_pair =
        damage(pair, ChannelInstance{kPi / 2.0, 0.5}, both);
    CHECK(fidelity(damaged_pair, pair) == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("damage is undone by the complementary angle") {
    Rng rng(606);
    for (int i = 0; i < 50; ++i) {
        const double theta = rng.uniform(1e-6, 2.0 * kPi);
        const StateVector plus =
            apply_gate(make_basis_state(1, 0), Gate2x2::hadamard(), 0);
        const std::array<int, 1> targets{0};
        const StateVector forward =
            damage(plus, ChannelInstance{theta, 0.5}, targets);
        const StateVector back =
            damage(forward, ChannelInstance{2.0 * kPi - theta, 0.5}, targets);
        CHECK(fidelity(back, plus) > 1.0 - 1e-9);
    }
}

TEST_CASE("register damage equals sequential single-qubit damage") {
    Rng rng(707);
    const StateVector bell = [] {
        const StateVector h =
            apply_gate(make_basis_state(2, 0), Gate2x2::hadamard(), 0);
        return apply_controlled(h, 0, 1, Gate2x2::pauli_x());
    }();
    const double theta = rng.uniform(0.0, 2.0 * kPi);
    const ChannelInstance channel{theta, 0.5};

    const std::array<int, 2> both{0, 1};
    const StateVector at_once = damage(bell, channel, both);
    const std::array<int, 1> first{0}, second{1};
    const StateVector stepwise =
        damage(damage(bell, channel, second), channel, first);

    double worst = 0.0;
    for (std::uint64_t k = 0; k < at_once.dimension(); ++k)
        worst = std::max(worst,
                         std::abs(at_once.amplitude(k) - stepwise.amplitude(k)));
    CHECK(worst < 1e-12);
    CHECK_THROWS_AS(damage(bell, channel, std::array<int, 1>{2}),
                    std::out_of_range);
}

TEST_CASE("expected-mode attenuation rounds the survivor count") {
    Rng rng(808);
    CHECK(transmit_count(50000000, 5e-5, TransmitMode::expected, rng) == 2500);
    CHECK(transmit_count(5000000000, 5e-5, TransmitMode::expected, rng) ==
          250000);
    CHECK(transmit_count(1234, 1.0, TransmitMode::expected, rng) == 1234);
    CHECK_THROWS_AS(transmit_count(10, 1.5, TransmitMode::expected, rng),
                    std::invalid_argument);
}

TEST_CASE("bernoulli-mode attenuation matches the expectation statistically") {
    Rng rng(909);
    const std::uint64_t sent = 1000000;
    const double delta = 0.01;
    const int trials = 100;
    double sum = 0.0;
    for (int i = 0; i < trials; ++i)
        sum += double(transmit_count(sent, delta, TransmitMode::bernoulli, rng));
    const double mean = sum / trials;
    const double sigma = std::sqrt(sent * delta * (1 - delta) / trials);
    CHECK(std::abs(mean - sent * delta) < 4.0 * sigma);
}
