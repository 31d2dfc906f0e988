#include "satqkd/verify.hpp"

#include "satqkd/bb84.hpp"
#include "satqkd/cascade.hpp"
#include "satqkd/channel.hpp"
#include "satqkd/csv.hpp"
#include "satqkd/link_analysis.hpp"
#include "satqkd/pilot_qec.hpp"
#include "satqkd/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace satqkd {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Suite {
    std::uint64_t seed;
    std::vector<CheckResult> results;

    Rng rng_for(const std::string& check_name) const {
        return Rng::child(seed, "verify:" + check_name, 0);
    }

    void add(const std::string& name, bool passed, const std::string& detail) {
        results.push_back({name, passed, detail});
    }
};

std::string fmt(double value) { return csv::format_double(value); }

Gate2x2 make_rotation(double theta, bool faulty) {
    if (!faulty) return gate_u_theta(theta);
    // Deliberately wrong: the Z term loses its imaginary unit, so the matrix
    // is no longer unitary and composition breaks.
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return {Amplitude{c + s, 0.0}, 0.0, 0.0, Amplitude{c - s, 0.0}};
}

StateVector random_qubit_state(Rng& rng) {
    const double polar = std::acos(1.0 - 2.0 * rng.uniform01());
    const double phase = rng.uniform01() * kTwoPi;
    return StateVector(1, {Amplitude{std::cos(polar / 2.0), 0.0},
                           std::polar(std::sin(polar / 2.0), phase)});
}

StateVector random_product_state(int qubits, Rng& rng) {
    StateVector state = random_qubit_state(rng);
    for (int i = 1; i < qubits; ++i) state = tensor(state, random_qubit_state(rng));
    return state;
}

double gate_distance(const Gate2x2& a, const Gate2x2& b) {
    return std::max({std::abs(a.m00 - b.m00), std::abs(a.m01 - b.m01),
                     std::abs(a.m10 - b.m10), std::abs(a.m11 - b.m11)});
}

// ---- dense-matrix reference path -----------------------------------------

using Matrix = std::vector<std::vector<Amplitude>>;

Matrix single_gate_matrix(int qubits, const Gate2x2& g, int target) {
    const std::uint64_t dim = std::uint64_t{1} << qubits;
    const std::uint64_t stride = std::uint64_t{1} << (qubits - 1 - target);
    Matrix m(dim, std::vector<Amplitude>(dim, Amplitude{0.0, 0.0}));
    const Amplitude entries[2][2] = {{g.m00, g.m01}, {g.m10, g.m11}};
    for (std::uint64_t i = 0; i < dim; ++i)
        for (std::uint64_t j = 0; j < dim; ++j)
            if ((i & ~stride) == (j & ~stride))
                m[i][j] = entries[(i & stride) ? 1 : 0][(j & stride) ? 1 : 0];
    return m;
}

Matrix controlled_gate_matrix(int qubits, int control, int target,
                              const Gate2x2& g) {
    const std::uint64_t dim = std::uint64_t{1} << qubits;
    const std::uint64_t cstride = std::uint64_t{1} << (qubits - 1 - control);
    const std::uint64_t tstride = std::uint64_t{1} << (qubits - 1 - target);
    Matrix m(dim, std::vector<Amplitude>(dim, Amplitude{0.0, 0.0}));
    const Amplitude entries[2][2] = {{g.m00, g.m01}, {g.m10, g.m11}};
    for (std::uint64_t i = 0; i < dim; ++i)
        for (std::uint64_t j = 0; j < dim; ++j) {
            if ((i & ~tstride) != (j & ~tstride)) continue;
            if (i & cstride)
                m[i][j] = entries[(i & tstride) ? 1 : 0][(j & tstride) ? 1 : 0];
            else if (i == j)
                m[i][j] = 1.0;
        }
    return m;
}

std::vector<Amplitude> dense_apply(const Matrix& m,
                                   const std::vector<Amplitude>& v) {
    std::vector<Amplitude> out(v.size(), Amplitude{0.0, 0.0});
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
    return out;
}

// ---- quantum-core checks ---------------------------------------------------

void check_rotation_unitarity(Suite& suite, bool faulty) {
    Rng rng = suite.rng_for("rotation-unitarity");
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double theta = rng.uniform(-10.0, 10.0);
        worst = std::max(worst, make_rotation(theta, faulty).unitarity_defect());
    }
    suite.add("rotation-unitarity", worst <= 1e-12, "max defect " + fmt(worst));
}

void check_rotation_composition(Suite& suite, bool faulty) {
    Rng rng = suite.rng_for("rotation-composition");
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double a = rng.uniform(-6.0, 6.0);
        const double b = rng.uniform(-6.0, 6.0);
        const Gate2x2 composed = make_rotation(a, faulty) * make_rotation(b, faulty);
        worst = std::max(worst, gate_distance(composed, make_rotation(a + b, faulty)));
    }
    suite.add("rotation-composition", worst <= 1e-12, "max deviation " + fmt(worst));
}

void check_rotation_period(Suite& suite) {
    Rng rng = suite.rng_for("rotation-period");
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double theta = rng.uniform(-6.0, 6.0);
        const Gate2x2 shifted = gate_u_theta(theta + kTwoPi);
        const Gate2x2 negated = gate_u_theta(theta);
        worst = std::max(worst,
                         gate_distance(shifted, {-negated.m00, -negated.m01,
                                                 -negated.m10, -negated.m11}));
    }
    suite.add("rotation-period", worst <= 1e-9,
              "2*pi shift flips the global sign; max deviation " + fmt(worst));
}

void check_norm_conservation(Suite& suite) {
    Rng rng = suite.rng_for("norm-conservation");
    double worst = 0.0;
    for (int circuit = 0; circuit < 10000; ++circuit) {
        const int qubits = 1 + static_cast<int>(rng.below(4));
        StateVector state = random_product_state(qubits, rng);
        const int depth = 1 + static_cast<int>(rng.below(50));
        for (int d = 0; d < depth; ++d) {
            const int target = static_cast<int>(rng.below(qubits));
            switch (rng.below(5)) {
                case 0:
                    state = apply_gate(state, gate_u_theta(rng.uniform(0.0, kTwoPi)),
                                       target);
                    break;
                case 1: state = apply_gate(state, Gate2x2::hadamard(), target); break;
                case 2: state = apply_gate(state, Gate2x2::pauli_x(), target); break;
                case 3: state = apply_gate(state, Gate2x2::pauli_z(), target); break;
                default: {
                    if (qubits == 1) {
                        state = apply_gate(state, Gate2x2::pauli_z(), target);
                        break;
                    }
                    int control = static_cast<int>(rng.below(qubits));
                    if (control == target) control = (control + 1) % qubits;
                    state = apply_controlled(state, control, target,
                                             Gate2x2::pauli_z());
                    break;
                }
            }
        }
        worst = std::max(worst, std::abs(state.norm_squared() - 1.0));
    }
    suite.add("norm-conservation", worst <= 1e-9,
              "10000 random circuits, max norm drift " + fmt(worst));
}

void check_measurement_statistics(Suite& suite) {
    Rng rng = suite.rng_for("measurement-statistics");
    const StateVector plus =
        apply_gate(make_basis_state(1, 0), Gate2x2::hadamard(), 0);
    const int trials = 100000;
    int zeros = 0;
    for (int i = 0; i < trials; ++i) {
        auto [record, _] = measure_qubit(plus, 0, rng);
        if (record.outcome == 0) ++zeros;
    }
    const double freq = static_cast<double>(zeros) / trials;
    const double bound = 3.0 * std::sqrt(0.25 / trials);
    suite.add("measurement-statistics", std::abs(freq - 0.5) <= bound,
              "|+> zero-outcome frequency " + fmt(freq) + ", bound " + fmt(bound));
}

void check_measurement_collapse(Suite& suite) {
    Rng rng = suite.rng_for("measurement-collapse");
    bool ok = true;
    for (int i = 0; i < 200 && ok; ++i) {
        StateVector state = random_product_state(3, rng);
        state = apply_gate(state, Gate2x2::hadamard(),
                           static_cast<int>(rng.below(3)));
        const int target = static_cast<int>(rng.below(3));
        auto [first, collapsed] = measure_qubit(state, target, rng);
        auto [second, _] = measure_qubit(collapsed, target, rng);
        ok = second.outcome == first.outcome &&
             std::abs(second.outcome_probability - 1.0) <= 1e-12;
    }
    suite.add("measurement-collapse", ok,
              "repeated measurement reproduces the first outcome");
}

void check_dense_matrix_equivalence(Suite& suite) {
    Rng rng = suite.rng_for("dense-matrix-equivalence");
    double worst = 0.0;
    for (int circuit = 0; circuit < 100; ++circuit) {
        const int qubits = 3;
        StateVector state = random_product_state(qubits, rng);
        std::vector<Amplitude> dense = state.amplitudes();
        for (int d = 0; d < 10; ++d) {
            const int target = static_cast<int>(rng.below(qubits));
            if (rng.coin()) {
                const Gate2x2 g = gate_u_theta(rng.uniform(0.0, kTwoPi));
                state = apply_gate(state, g, target);
                dense = dense_apply(single_gate_matrix(qubits, g, target), dense);
            } else {
                int control = static_cast<int>(rng.below(qubits));
                if (control == target) control = (control + 1) % qubits;
                state = apply_controlled(state, control, target,
                                         Gate2x2::pauli_z());
                dense = dense_apply(
                    controlled_gate_matrix(qubits, control, target,
                                           Gate2x2::pauli_z()),
                    dense);
            }
        }
        for (std::uint64_t k = 0; k < state.dimension(); ++k)
            worst = std::max(worst, std::abs(state.amplitude(k) - dense[k]));
    }
    suite.add("dense-matrix-equivalence", worst <= 1e-12,
              "strided kernels vs full matrices, max deviation " + fmt(worst));
}

void check_pilot_state_components(Suite& suite) {
    Rng rng = suite.rng_for("pilot-state-components");
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double theta = rng.uniform01() * kTwoPi;
        const StateVector p = pilot_state(theta);
        worst = std::max(
            {worst, std::abs(p.amplitude(0) - Amplitude{std::cos(theta / 2), 0.0}),
             std::abs(p.amplitude(1) - Amplitude{0.0, std::sin(theta / 2)}),
             std::abs(p.norm_squared() - 1.0)});
    }
    suite.add("pilot-state-components", worst <= 1e-12,
              "max component deviation " + fmt(worst));
}

void check_tensor_layout(Suite& suite) {
    Rng rng = suite.rng_for("tensor-layout");
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const StateVector a = random_qubit_state(rng);
        const StateVector b = random_qubit_state(rng);
        const StateVector joint = tensor(a, b);
        for (int ia = 0; ia < 2; ++ia)
            for (int ib = 0; ib < 2; ++ib)
                worst = std::max(
                    worst,
                    std::abs(joint.amplitude(static_cast<std::uint64_t>(2 * ia + ib)) -
                             a.amplitude(ia) * b.amplitude(ib)));
    }
    suite.add("tensor-layout", worst <= 1e-15,
              "left factor occupies the high-order bit; max deviation " +
                  fmt(worst));
}

void check_density_conjugation(Suite& suite) {
    Rng rng = suite.rng_for("density-conjugation");
    double worst = 0.0;
    for (int i = 0; i < 300; ++i) {
        const StateVector psi = random_qubit_state(rng);
        const double theta = rng.uniform(-8.0, 8.0);
        const Amplitude a0 = psi.amplitude(0), a1 = psi.amplitude(1);
        const Density2 rho{a0 * std::conj(a0), a0 * std::conj(a1),
                           a1 * std::conj(a0), a1 * std::conj(a1)};
        const Density2 rotated = density_conjugate(rho, theta);
        const StateVector moved = apply_gate(psi, gate_u_theta(theta), 0);
        const Amplitude b0 = moved.amplitude(0), b1 = moved.amplitude(1);
        worst = std::max({worst, std::abs(rotated.m00 - b0 * std::conj(b0)),
                          std::abs(rotated.m01 - b0 * std::conj(b1)),
                          std::abs(rotated.m10 - b1 * std::conj(b0)),
                          std::abs(rotated.m11 - b1 * std::conj(b1))});
    }
    suite.add("density-conjugation", worst <= 1e-12,
              "matches the pure-state rotation; max deviation " + fmt(worst));
}

// ---- channel checks --------------------------------------------------------

void check_channel_angle_distribution(Suite& suite) {
    Rng rng = suite.rng_for("channel-angle-distribution");
    const int samples = 100000;
    double sum = 0.0;
    bool in_range = true;
    for (int i = 0; i < samples; ++i) {
        const ChannelInstance ch = sample_channel(OrbitClass::leo(), rng);
        in_range = in_range && ch.theta >= 0.0 && ch.theta < kTwoPi;
        sum += ch.theta;
    }
    const double mean = sum / samples;
    const double bound = 3.0 * (kTwoPi / std::sqrt(12.0)) / std::sqrt(samples);
    suite.add("channel-angle-distribution",
              in_range && std::abs(mean - std::numbers::pi) <= bound,
              "mean " + fmt(mean) + ", bound " + fmt(bound));
}

void check_channel_inverse(Suite& suite) {
    Rng rng = suite.rng_for("channel-inverse");
    double worst = 1.0;
    const std::vector<int> target{0};
    for (int i = 0; i < 300; ++i) {
        const StateVector psi = random_qubit_state(rng);
        const double theta = rng.uniform01() * kTwoPi;
        const StateVector forward = damage(psi, {theta, 0.5}, target);
        const StateVector back = damage(forward, {kTwoPi - theta, 0.5}, target);
        worst = std::min(worst, fidelity(back, psi));
    }
    suite.add("channel-inverse", worst >= 1.0 - 1e-9,
              "min return fidelity " + fmt(worst));
}

void check_channel_product_structure(Suite& suite) {
    Rng rng = suite.rng_for("channel-product-structure");
    double worst = 0.0;
    const std::vector<int> all{0, 1, 2};
    const std::vector<int> single{0};
    for (int i = 0; i < 100; ++i) {
        const double theta = rng.uniform01() * kTwoPi;
        const StateVector q0 = random_qubit_state(rng);
        const StateVector q1 = random_qubit_state(rng);
        const StateVector q2 = random_qubit_state(rng);
        const StateVector whole =
            damage(tensor(tensor(q0, q1), q2), {theta, 0.5}, all);
        const StateVector parts =
            tensor(tensor(damage(q0, {theta, 0.5}, single),
                          damage(q1, {theta, 0.5}, single)),
                   damage(q2, {theta, 0.5}, single));
        for (std::uint64_t k = 0; k < whole.dimension(); ++k)
            worst = std::max(worst,
                             std::abs(whole.amplitude(k) - parts.amplitude(k)));
    }
    suite.add("channel-product-structure", worst <= 1e-12,
              "register damage factorizes; max deviation " + fmt(worst));
}

void check_attenuation_modes(Suite& suite) {
    Rng rng = suite.rng_for("attenuation-modes");
    const std::uint64_t expected = transmit_count(
        50000000, 5e-5, TransmitMode::expected, rng);
    const std::uint64_t n = 1000000;
    const double p = 0.01;
    const std::uint64_t drawn =
        transmit_count(n, p, TransmitMode::bernoulli, rng);
    const double bound =
        3.0 * std::sqrt(static_cast<double>(n) * p * (1.0 - p));
    const bool ok =
        expected == 2500 &&
        std::abs(static_cast<double>(drawn) - static_cast<double>(n) * p) <= bound;
    suite.add("attenuation-modes", ok,
              "expected-mode 2500, bernoulli draw " + std::to_string(drawn));
}

// ---- pilot-correction checks ----------------------------------------------

void check_pilot_cost_closed_form(Suite& suite) {
    bool ok = true;
    std::uint64_t first_bad = 0;
    for (int xi = 1; xi <= 12; ++xi) {
        // literal series: sum_{j=1}^{xi-1} j*2^(j-1), plus the first pilot,
        // plus one fresh pilot per retry
        std::uint64_t series = 1 + static_cast<std::uint64_t>(xi - 1);
        for (int j = 1; j <= xi - 1; ++j)
            series += static_cast<std::uint64_t>(j) * (std::uint64_t{1} << (j - 1));
        if (pilot_requirement(xi) != series) {
            ok = false;
            first_bad = static_cast<std::uint64_t>(xi);
            break;
        }
    }
    suite.add("pilot-cost-closed-form", ok,
              ok ? "closed form equals the series for xi=1..12"
                 : "mismatch at xi=" + std::to_string(first_bad));
}

void check_attempt_probability(Suite& suite) {
    Rng rng = suite.rng_for("attempt-probability");
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double theta = rng.uniform01() * kTwoPi;
        const StateVector damaged =
            apply_gate(random_qubit_state(rng), gate_u_theta(theta), 0);
        const AttemptResult attempt = correction_attempt(damaged, 0, theta, rng);
        worst = std::max(worst, std::abs(attempt.correct_probability - 0.5));
    }
    suite.add("attempt-probability", worst <= 1e-12,
              "max |p_correct - 1/2| = " + fmt(worst));
}

void check_attempt_branches(Suite& suite) {
    Rng rng = suite.rng_for("attempt-branches");
    double worst = 1.0;
    int successes = 0, failures = 0;
    for (int i = 0; i < 200; ++i) {
        const double theta = rng.uniform01() * kTwoPi;
        const StateVector psi = random_qubit_state(rng);
        const StateVector damaged = apply_gate(psi, gate_u_theta(theta), 0);
        const AttemptResult attempt = correction_attempt(damaged, 0, theta, rng);
        if (attempt.success) {
            ++successes;
            worst = std::min(worst, fidelity(attempt.state, psi));
        } else {
            ++failures;
            const StateVector doubled =
                apply_gate(psi, gate_u_theta(2.0 * theta), 0);
            worst = std::min(worst, fidelity(attempt.state, doubled));
        }
    }
    suite.add("attempt-branches",
              worst >= 1.0 - 1e-9 && successes > 0 && failures > 0,
              "min branch fidelity " + fmt(worst) + " over " +
                  std::to_string(successes) + "+" + std::to_string(failures) +
                  " outcomes");
}

void check_chain_success_rates(Suite& suite) {
    Rng rng = suite.rng_for("chain-success-rates");
    bool ok = true;
    std::ostringstream detail;
    for (int xi = 1; xi <= 6; ++xi) {
        const int trials = 20000;
        int successes = 0;
        for (int t = 0; t < trials; ++t) {
            const double theta = rng.uniform01() * kTwoPi;
            const StateVector damaged =
                apply_gate(random_qubit_state(rng), gate_u_theta(theta), 0);
            const CorrectionResult result = correction_chain(
                damaged, 0, make_pilot_string(theta, xi), rng);
            if (result.success) ++successes;
        }
        const double p = success_probability(xi);
        const double rate = static_cast<double>(successes) / trials;
        const double bound = 3.0 * std::sqrt(p * (1.0 - p) / trials);
        if (std::abs(rate - p) > bound) ok = false;
        detail << "xi=" << xi << ":" << fmt(rate) << " ";
    }
    suite.add("chain-success-rates", ok, detail.str());
}

void check_chain_residual(Suite& suite) {
    Rng rng = suite.rng_for("chain-residual");
    const int xi = 3;
    double worst = 1.0;
    int failures = 0;
    for (int i = 0; i < 2000 && failures < 100; ++i) {
        const double theta = rng.uniform01() * kTwoPi;
        const StateVector psi = random_qubit_state(rng);
        const StateVector damaged = apply_gate(psi, gate_u_theta(theta), 0);
        const CorrectionResult result =
            correction_chain(damaged, 0, make_pilot_string(theta, xi), rng);
        if (result.success) continue;
        ++failures;
        const bool exponent_ok = result.residual_exponent == xi;
        const StateVector reference = apply_gate(
            psi, gate_u_theta(std::ldexp(theta, xi)), 0);
        if (!exponent_ok) worst = 0.0;
        worst = std::min(worst, fidelity(result.output_state, reference));
    }
    suite.add("chain-residual", worst >= 1.0 - 1e-9 && failures > 0,
              "residual matches the doubled rotation on " +
                  std::to_string(failures) + " failed runs; min fidelity " +
                  fmt(worst));
}

void check_register_size_independence(Suite& suite) {
    Rng rng = suite.rng_for("register-size-independence");
    const int xi = 3;
    const int trials = 5000;
    const int sizes[] = {1, 4, 8};
    double rates[3] = {0.0, 0.0, 0.0};
    for (int si = 0; si < 3; ++si) {
        const int n = sizes[si];
        std::vector<int> targets(static_cast<std::size_t>(n));
        for (int q = 0; q < n; ++q) targets[static_cast<std::size_t>(q)] = q;
        int successes = 0;
        for (int t = 0; t < trials; ++t) {
            const double theta = rng.uniform01() * kTwoPi;
            StateVector reg = random_product_state(n, rng);
            reg = damage(reg, {theta, 0.5}, targets);
            const CorrectionResult result =
                correct_register(reg, targets, make_pilot_string(theta, xi), rng);
            if (result.success) ++successes;
        }
        rates[si] = static_cast<double>(successes) / trials;
    }
    const double p = success_probability(xi);
    const double bound = 3.0 * std::sqrt(p * (1.0 - p) * 2.0 / trials);
    const bool ok = std::abs(rates[0] - rates[1]) <= bound &&
                    std::abs(rates[0] - rates[2]) <= bound &&
                    std::abs(rates[1] - rates[2]) <= bound;
    suite.add("register-size-independence", ok,
              "success rates " + fmt(rates[0]) + "/" + fmt(rates[1]) + "/" +
                  fmt(rates[2]) + " for 1/4/8 qubits");
}

void check_register_matches_chain(Suite& suite) {
    bool ok = true;
    double worst = 1.0;
    for (int s = 0; s < 500 && ok; ++s) {
        Rng setup = Rng::child(suite.seed, "verify:register-vs-chain-setup",
                               static_cast<std::uint64_t>(s));
        const double theta = setup.uniform01() * kTwoPi;
        const StateVector psi = random_qubit_state(setup);
        const StateVector damaged = apply_gate(psi, gate_u_theta(theta), 0);
        const PilotString pilots = make_pilot_string(theta, 4);

        Rng rng_chain = Rng::child(suite.seed, "verify:register-vs-chain-run",
                                   static_cast<std::uint64_t>(s));
        Rng rng_register = Rng::child(suite.seed, "verify:register-vs-chain-run",
                                      static_cast<std::uint64_t>(s));
        const CorrectionResult via_chain =
            correction_chain(damaged, 0, pilots, rng_chain);
        const std::vector<int> targets{0};
        const CorrectionResult via_register =
            correct_register(damaged, targets, pilots, rng_register);
        ok = via_chain.success == via_register.success &&
             via_chain.attempts_used == via_register.attempts_used;
        worst = std::min(worst, fidelity(via_chain.output_state,
                                         via_register.output_state));
    }
    suite.add("register-vs-chain", ok && worst >= 1.0 - 1e-9,
              "same seed gives the same decisions; min output overlap " +
                  fmt(worst));
}

void check_theta_zero_chain(Suite& suite) {
    Rng rng = suite.rng_for("theta-zero-chain");
    double worst = 1.0;
    for (int i = 0; i < 50; ++i) {
        const StateVector psi = random_qubit_state(rng);
        const CorrectionResult result =
            correction_chain(psi, 0, make_pilot_string(0.0, 3), rng);
        worst = std::min(worst, fidelity(result.output_state, psi));
    }
    suite.add("theta-zero-chain", worst >= 1.0 - 1e-9,
              "identity channel leaves the state untouched on every branch; "
              "min fidelity " + fmt(worst));
}

// ---- key-protocol checks ---------------------------------------------------

void check_sift_noiseless(Suite& suite) {
    Rng rng = suite.rng_for("sift-noiseless");
    const std::size_t n = 100000;
    const RawKey raw = generate_raw(n, rng);
    const std::vector<StateVector> states = encode(raw);
    const MeasuredKey bob = measure_with_random_bases(states, rng);
    const auto [sa, sb] = sift(raw, bob.bases, bob.bits);
    const bool equal = sa.bits == sb.bits;
    const double fraction = static_cast<double>(sa.size()) / static_cast<double>(n);
    const double bound = 3.0 * std::sqrt(0.25 / static_cast<double>(n));
    suite.add("sift-noiseless", equal && std::abs(fraction - 0.5) <= bound,
              "keys match, sifted fraction " + fmt(fraction));
}

void check_qber_estimate(Suite& suite) {
    Rng rng = suite.rng_for("qber-estimate");
    const std::size_t n = 10000;
    SiftedKey a, b;
    a.bits.assign(n, 0);
    b.bits.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        a.source_positions.push_back(i);
        b.source_positions.push_back(i);
    }
    std::size_t planted = 0;
    while (planted < n * 11 / 100) {
        const std::size_t pos = rng.below(n);
        if (b.bits[pos] == 0) {
            b.bits[pos] = 1;
            ++planted;
        }
    }
    const QberEstimate est = estimate_qber(a, b, 0.5, rng);
    bool disclosure_ok = est.remaining_a.size() == n - n / 2;
    for (std::size_t pos : est.disclosed_positions)
        for (std::size_t kept : est.remaining_a.source_positions)
            if (kept == a.source_positions[pos]) disclosure_ok = false;
    suite.add("qber-estimate",
              std::abs(est.qber - 0.11) <= 0.01 && disclosure_ok,
              "estimate " + fmt(est.qber) + " for an 11% planted error rate");
}

void check_encode_measure_roundtrip(Suite& suite) {
    Rng rng = suite.rng_for("encode-measure-roundtrip");
    bool ok = true;
    for (int bit = 0; bit < 2; ++bit)
        for (int basis = 0; basis < 2; ++basis) {
            StateVector s = encode_qubit(static_cast<std::uint8_t>(bit),
                                         static_cast<Basis>(basis));
            if (basis == 1) s = apply_gate(s, Gate2x2::hadamard(), 0);
            auto [record, _] = measure_qubit(s, 0, rng);
            ok = ok && record.outcome == bit &&
                 std::abs(record.outcome_probability - 1.0) <= 1e-12;
        }
    suite.add("encode-measure-roundtrip", ok,
              "matched-basis readout is deterministic");
}

// ---- reconciliation checks -------------------------------------------------

void check_cascade_roundtrip(Suite& suite) {
    Rng rng = suite.rng_for("cascade-roundtrip");
    const CascadeParams params;
    const EfficiencySample sample =
        cascade_efficiency_sample(2500, 0.02, params, 20, rng);
    suite.add("cascade-roundtrip", sample.corrected_runs >= 19,
              std::to_string(sample.corrected_runs) +
                  "/20 runs corrected at qber 0.02, mean leak " +
                  fmt(sample.mean_leaked));
}

void check_cascade_determinism(Suite& suite) {
    Rng rng_keys = suite.rng_for("cascade-determinism");
    const std::size_t n = 1024;
    std::vector<std::uint8_t> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = rng_keys.coin() ? 1 : 0;
    b = a;
    for (std::size_t i = 0; i < n; ++i)
        if (rng_keys.uniform01() < 0.03) b[i] ^= 1;

    Rng r1 = Rng::child(suite.seed, "verify:cascade-determinism-run", 7);
    Rng r2 = Rng::child(suite.seed, "verify:cascade-determinism-run", 7);
    const ReconciliationReport rep1 = reconcile(a, b, 0.03, {}, r1);
    const ReconciliationReport rep2 = reconcile(a, b, 0.03, {}, r2);
    bool same = rep1.leaked_bits == rep2.leaked_bits &&
                rep1.transcript.size() == rep2.transcript.size() &&
                rep1.final_key_b == rep2.final_key_b;
    for (std::size_t i = 0; same && i < rep1.transcript.size(); ++i) {
        const ParityMessage& m1 = rep1.transcript[i];
        const ParityMessage& m2 = rep2.transcript[i];
        same = m1.pass == m2.pass && m1.block == m2.block &&
               m1.parity_a == m2.parity_a && m1.parity_b == m2.parity_b;
    }
    suite.add("cascade-determinism", same,
              "same seed reproduces the transcript bit-for-bit");
}

void check_cascade_leak_accounting(Suite& suite) {
    Rng rng = suite.rng_for("cascade-leak-accounting");
    bool ok = true;
    for (int t = 0; t < 10 && ok; ++t) {
        const std::size_t n = 512;
        std::vector<std::uint8_t> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) a[i] = rng.coin() ? 1 : 0;
        b = a;
        for (std::size_t i = 0; i < n; ++i)
            if (rng.uniform01() < 0.05) b[i] ^= 1;
        const ReconciliationReport rep = reconcile(a, b, 0.05, {}, rng);
        ok = rep.leaked_bits == rep.transcript.size() &&
             rep.final_key_a == std::vector<std::uint8_t>(a.begin(), a.end());
    }
    suite.add("cascade-leak-accounting", ok,
              "leaked bits equal the parity-message count");
}

void check_cascade_cost_monotone(Suite& suite) {
    Rng rng = suite.rng_for("cascade-cost-monotone");
    const CascadeParams params;
    const double q1 = cascade_efficiency_sample(1024, 0.01, params, 20, rng)
                          .mean_leaked_all;
    const double q2 = cascade_efficiency_sample(1024, 0.05, params, 20, rng)
                          .mean_leaked_all;
    const double q3 = cascade_efficiency_sample(1024, 0.15, params, 20, rng)
                          .mean_leaked_all;
    suite.add("cascade-cost-monotone", q1 < q2 && q2 < q3,
              "mean leak " + fmt(q1) + " -> " + fmt(q2) + " -> " + fmt(q3));
}

// ---- link-analysis checks --------------------------------------------------

void check_budget_rows(Suite& suite) {
    struct Expected {
        double f;
        std::uint64_t raw, transmittable, corrected;
    };
    const Expected expected[] = {{1e10, 5000000000, 250000, 249946},
                                 {5e9, 2500000000, 125000, 124946},
                                 {1e9, 500000000, 25000, 24946},
                                 {5e8, 250000000, 12500, 12446},
                                 {1e8, 50000000, 2500, 2446}};
    bool ok = true;
    for (const Expected& e : expected) {
        const BudgetRow row = budget_row(e.f, 0.5, 5e-5, 5);
        ok = ok && row.raw_qubits == e.raw && row.transmittable == e.transmittable &&
             row.corrected_data == e.corrected &&
             row.redundancy == redundancy(54, e.transmittable);
    }
    suite.add("budget-rows", ok, "five reference downlink budgets exact");
}

void check_budget_table_values(Suite& suite) {
    const std::vector<PilotBudget> rows = budget_table(2, 6);
    const std::uint64_t costs[] = {3, 8, 21, 54, 135};
    const double probs[] = {0.75, 0.875, 0.9375, 0.96875, 0.984375};
    bool ok = rows.size() == 5;
    for (std::size_t i = 0; ok && i < rows.size(); ++i)
        ok = rows[i].xi == static_cast<int>(i) + 2 && rows[i].r == costs[i] &&
             rows[i].p_success == probs[i];
    suite.add("budget-table-values", ok, "xi=2..6 costs and probabilities exact");
}

void check_efficiency_identities(Suite& suite) {
    bool ok = true;
    const double ps[] = {0.0, 0.3, 0.9, 0.99};
    const int xis[] = {10, 20, 30};
    for (double p : ps) {
        double previous = 2.0;
        for (int xi : xis) {
            const double eta = throughput_efficiency(p, xi, 2500);
            const double overhead = throughput_overhead(p, xi, 2500);
            ok = ok && eta == 1.0 - overhead;
            ok = ok && overhead ==
                           2.0 * throughput_overhead(p, xi, 5000);
            ok = ok && eta <= previous;
            previous = eta;
        }
    }
    suite.add("efficiency-identities", ok,
              "eta identity, exact overhead halving, xi ordering");
}

void check_experiment_consistency(Suite& suite) {
    const LinkParams link{1e8, 0.5, 5e-5, OrbitClass::leo()};
    const ExperimentSummary summary =
        end_to_end_experiment(link, 3, 64, 2000, suite.seed, 1);
    const double p = success_probability(3);
    const double bound = 3.0 * std::sqrt(p * (1.0 - p) / summary.trials);
    const bool ok = std::abs(summary.success_rate - p) <= bound &&
                    summary.mean_qber_success <= 0.005 &&
                    (summary.failure_runs == 0 || summary.mean_qber_failure > 0.05);
    suite.add("experiment-consistency", ok,
              "success rate " + fmt(summary.success_rate) + ", qber " +
                  fmt(summary.mean_qber_success) + "/" +
                  fmt(summary.mean_qber_failure) + " (success/failure runs)");
}

void check_csv_round_trip(Suite& suite) {
    const double values[] = {0.1,      1.0 / 3.0,          0.0216, 2.16,
                             5e-5,     std::numbers::pi,   1e-30,  12345.6789,
                             0.96875,  0.99999999999999989};
    bool ok = true;
    for (double v : values)
        ok = ok && csv::parse_double(csv::format_double(v)) == v;
    suite.add("csv-round-trip", ok,
              "17-digit serialization recovers every double bit-for-bit");
}

} // namespace

std::vector<CheckResult> run_verify_suite(const VerifyOptions& options) {
    Suite suite{options.seed, {}};

    check_rotation_unitarity(suite, options.inject_rotation_fault);
    check_rotation_composition(suite, options.inject_rotation_fault);
    check_rotation_period(suite);
    check_norm_conservation(suite);
    check_measurement_statistics(suite);
    check_measurement_collapse(suite);
    check_dense_matrix_equivalence(suite);
    check_pilot_state_components(suite);
    check_tensor_layout(suite);
    check_density_conjugation(suite);

    check_channel_angle_distribution(suite);
    check_channel_inverse(suite);
    check_channel_product_structure(suite);
    check_attenuation_modes(suite);

    check_pilot_cost_closed_form(suite);
    check_attempt_probability(suite);
    check_attempt_branches(suite);
    check_chain_success_rates(suite);
    check_chain_residual(suite);
    check_register_size_independence(suite);
    check_register_matches_chain(suite);
    check_theta_zero_chain(suite);

    check_sift_noiseless(suite);
    check_qber_estimate(suite);
    check_encode_measure_roundtrip(suite);

    check_cascade_roundtrip(suite);
    check_cascade_determinism(suite);
    check_cascade_leak_accounting(suite);
    check_cascade_cost_monotone(suite);

    check_budget_rows(suite);
    check_budget_table_values(suite);
    check_efficiency_identities(suite);
    check_experiment_consistency(suite);
    check_csv_round_trip(suite);

    return suite.results;
}

} // namespace satqkd
