#include "satqkd/pilot_qec.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_set>

namespace satqkd {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double fold_angle(double theta) {
    if (!std::isfinite(theta))
        throw std::invalid_argument("angle must be finite");
    double folded = std::fmod(theta, kTwoPi);
    if (folded < 0.0) folded += kTwoPi;
    return folded;
}

void check_xi(int xi, int max_xi) {
    if (xi < 1 || xi > max_xi)
        throw std::out_of_range("pilot string length out of range");
}

// Removes the appended pilot (lowest index bit) after its measurement.
StateVector drop_measured_pilot(const StateVector& joint, int outcome) {
    const int data_qubits = joint.qubit_count() - 1;
    std::vector<Amplitude> amps(std::uint64_t{1} << data_qubits);
    for (std::uint64_t k = 0; k < amps.size(); ++k)
        amps[k] = joint.amplitude(2 * k + static_cast<std::uint64_t>(outcome));
    return StateVector(data_qubits, std::move(amps));
}

} // namespace

std::uint64_t pilot_requirement(int xi) {
    // (xi-2)*2^(xi-1) + xi + 1 stays inside int64 up to xi = 57.
    check_xi(xi, 57);
    const std::int64_t doubled = static_cast<std::int64_t>(xi - 2)
                                 * (std::int64_t{1} << (xi - 1));
    return static_cast<std::uint64_t>(doubled + xi + 1);
}

double success_probability(int xi) {
    check_xi(xi, 1024);
    return 1.0 - std::ldexp(1.0, -xi);
}

std::vector<PilotBudget> budget_table(int xi_min, int xi_max) {
    check_xi(xi_min, 20);
    check_xi(xi_max, 20);
    if (xi_min > xi_max)
        throw std::invalid_argument("budget range is empty");
    std::vector<PilotBudget> rows;
    rows.reserve(static_cast<std::size_t>(xi_max - xi_min + 1));
    for (int xi = xi_min; xi <= xi_max; ++xi)
        rows.push_back({xi, pilot_requirement(xi), success_probability(xi)});
    return rows;
}

PilotString make_pilot_string(double base_theta, int xi) {
    check_xi(xi, 57);
    PilotString pilots;
    pilots.base_theta = fold_angle(base_theta);
    pilots.angles.resize(static_cast<std::size_t>(xi));
    double angle = pilots.base_theta;
    for (int i = 0; i < xi; ++i) {
        pilots.angles[static_cast<std::size_t>(i)] = angle;
        angle = std::fmod(2.0 * angle, kTwoPi);
    }
    return pilots;
}

AttemptResult correction_attempt(const StateVector& damaged, int data_qubit,
                                 double pilot_theta, Rng& rng) {
    const int pilot = damaged.qubit_count();
    StateVector joint = tensor(damaged, pilot_state(fold_angle(pilot_theta)));
    joint = apply_controlled(joint, data_qubit, pilot, Gate2x2::pauli_z());
    joint = apply_gate(joint, Gate2x2::hadamard(), pilot);
    joint = apply_gate(joint, Gate2x2::pauli_x(), pilot);

    auto [record, collapsed] = measure_qubit(joint, pilot, rng);
    const bool success = record.outcome == 0;
    const double p_correct = success ? record.outcome_probability
                                     : 1.0 - record.outcome_probability;
    return {success, p_correct, drop_measured_pilot(collapsed, record.outcome)};
}

CorrectionResult correction_chain(const StateVector& damaged, int data_qubit,
                                  const PilotString& pilots, Rng& rng) {
    if (pilots.length() < 1)
        throw std::invalid_argument("pilot string is empty");
    StateVector state = damaged;
    for (int i = 0; i < pilots.length(); ++i) {
        AttemptResult attempt = correction_attempt(
            state, data_qubit, pilots.angles[static_cast<std::size_t>(i)], rng);
        state = std::move(attempt.state);
        if (attempt.success) return {true, i + 1, 0, std::move(state)};
    }
    return {false, pilots.length(), pilots.length(), std::move(state)};
}

ChainTranscript run_chain_transcript(int xi, Rng& rng) {
    check_xi(xi, 57);
    ChainTranscript t;
    for (int i = 0; i < xi; ++i) {
        // One uniform per attempt, exactly like a pilot measurement; both
        // branches carry Born weight 1/2.
        const int outcome = rng.uniform01() < 0.5 ? 0 : 1;
        t.outcomes.push_back(outcome);
        if (outcome == 0) {
            t.success = true;
            t.attempts_used = i + 1;
            t.residual_exponent = 0;
            return t;
        }
    }
    t.success = false;
    t.attempts_used = xi;
    t.residual_exponent = xi;
    return t;
}

Gate2x2 transcript_rotation(const PilotString& pilots, const ChainTranscript& t) {
    if (t.attempts_used > pilots.length())
        throw std::invalid_argument("transcript longer than pilot string");
    // Failures pile up forward rotations; the terminal success inverts the
    // whole accumulated error, which telescopes to -theta.
    double angle = 0.0;
    for (std::size_t i = 0; i < t.outcomes.size(); ++i) {
        const double a = pilots.angles[i];
        angle = std::fmod(t.outcomes[i] == 0 ? angle - a : angle + a, kTwoPi);
    }
    return gate_u_theta(angle);
}

CorrectionResult correct_register(const StateVector& damaged_register,
                                  std::span<const int> data_qubits,
                                  const PilotString& pilots, Rng& rng) {
    if (pilots.length() < 1)
        throw std::invalid_argument("pilot string is empty");
    if (data_qubits.empty())
        throw std::invalid_argument("register has no data qubits");
    std::unordered_set<int> seen;
    for (int q : data_qubits) {
        if (q < 0 || q >= damaged_register.qubit_count())
            throw std::out_of_range("data qubit index out of range");
        if (!seen.insert(q).second)
            throw std::invalid_argument("duplicate data qubit index");
    }

    const ChainTranscript t = run_chain_transcript(pilots.length(), rng);
    const Gate2x2 net = transcript_rotation(pilots, t);
    StateVector out = damaged_register;
    for (int q : data_qubits) out = apply_gate(out, net, q);
    return {t.success, t.attempts_used, t.residual_exponent, std::move(out)};
}

ChainTranscript correct_qubit_batch(std::vector<StateVector>& qubits,
                                    std::span<const double> damage_thetas,
                                    int xi, Rng& rng) {
    if (qubits.empty())
        throw std::invalid_argument("batch has no qubits");
    if (damage_thetas.size() != qubits.size())
        throw std::invalid_argument("one damage angle per qubit required");
    for (double theta : damage_thetas)
        if (theta != damage_thetas[0])
            throw std::invalid_argument(
                "mixed-channel batch: damage angles disagree");
    for (const StateVector& q : qubits)
        if (q.qubit_count() != 1)
            throw std::invalid_argument("batch entries must be single qubits");

    const PilotString pilots = make_pilot_string(damage_thetas[0], xi);
    const ChainTranscript t = run_chain_transcript(xi, rng);
    const Gate2x2 net = transcript_rotation(pilots, t);
    for (StateVector& q : qubits) q = apply_gate(q, net, 0);
    return t;
}

} // namespace satqkd
