#pragma once

#include "satqkd/quantum.hpp"
#include "satqkd/rng.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace satqkd {

/// Resource row for a pilot string of length xi: pilot-state cost r and the
/// analytic chain success probability 1 - 2^-xi.
struct PilotBudget {
    int xi = 0;
    std::uint64_t r = 0;
    double p_success = 0.0;
};

/// Total pilot states consumed by one repeat-until-success chain of length
/// xi, counting preparation of the doubled angles: (xi-2)*2^(xi-1) + xi + 1.
std::uint64_t pilot_requirement(int xi);

double success_probability(int xi);

std::vector<PilotBudget> budget_table(int xi_min, int xi_max);

/// Doubling angle schedule [theta, 2*theta, 4*theta, ...] reduced mod 2*pi.
struct PilotString {
    double base_theta = 0.0;
    std::vector<double> angles;

    int length() const { return static_cast<int>(angles.size()); }
};

PilotString make_pilot_string(double base_theta, int xi);

struct AttemptResult {
    bool success = false;
    /// Born probability of the correcting outcome in the joint
    /// pre-measurement state. Equals 1/2 for every pilot angle and input.
    double correct_probability = 0.0;
    StateVector state;
};

/// One correction round: attach a pilot at `pilot_theta`, entangle, measure.
/// Success leaves the data qubit rotated by U†; failure by U. The pilot is
/// removed before returning. Consumes exactly one uniform draw.
AttemptResult correction_attempt(const StateVector& damaged, int data_qubit,
                                 double pilot_theta, Rng& rng);

struct CorrectionResult {
    bool success = false;
    int attempts_used = 0;
    /// k such that the residual error is U_{2^k * theta}; 0 on success.
    int residual_exponent = 0;
    StateVector output_state;
};

/// Repeat-until-success chain on a single data qubit, walking the doubled
/// pilot angles until one round lands on the correcting branch.
CorrectionResult correction_chain(const StateVector& damaged, int data_qubit,
                                  const PilotString& pilots, Rng& rng);

/// Chain over an n-qubit register that shared one channel window. One
/// measurement transcript drives the same 2x2 rotation on every data qubit,
/// so the cost is independent of n.
CorrectionResult correct_register(const StateVector& damaged_register,
                                  std::span<const int> data_qubits,
                                  const PilotString& pilots, Rng& rng);

/// Outcome record of one chain; outcome 0 is the correcting branch. Each
/// attempt consumes exactly one uniform draw.
struct ChainTranscript {
    std::vector<int> outcomes;
    bool success = false;
    int attempts_used = 0;
    int residual_exponent = 0;
};

ChainTranscript run_chain_transcript(int xi, Rng& rng);

/// Net single-qubit rotation the transcript implies for each register qubit.
Gate2x2 transcript_rotation(const PilotString& pilots, const ChainTranscript& t);

/// Register correction for qubits held as separate single-qubit states (the
/// key pipeline's layout, where n exceeds dense-vector capacity). Rejects
/// batches whose damage angles disagree: one transcript only corrects one
/// shared window.
ChainTranscript correct_qubit_batch(std::vector<StateVector>& qubits,
                                    std::span<const double> damage_thetas,
                                    int xi, Rng& rng);

} // namespace satqkd
