#pragma once

#include "satqkd/rng.hpp"

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

namespace satqkd {

using Amplitude = std::complex<double>;

// Dense state vectors above this size are rejected (16M amplitudes).
inline constexpr int kMaxQubits = 24;

/// Single-qubit operator, row-major: m00 m01 / m10 m11.
struct Gate2x2 {
    Amplitude m00, m01, m10, m11;

    Gate2x2 adjoint() const;
    /// Max-norm of U†U − I; zero (to rounding) for a unitary.
    double unitarity_defect() const;

    static Gate2x2 identity();
    static Gate2x2 pauli_x();
    static Gate2x2 pauli_z();
    static Gate2x2 hadamard();
};

Gate2x2 operator*(const Gate2x2& a, const Gate2x2& b);

/// Relative-phase rotation diag(e^{i theta/2}, e^{-i theta/2}), i.e.
/// cos(theta/2) I + i sin(theta/2) Z. theta must be finite.
Gate2x2 gate_u_theta(double theta);

/// Pure state over 2^qubit_count basis states. Qubit 0 is the most
/// significant bit of the basis index.
class StateVector {
public:
    StateVector(int qubit_count, std::vector<Amplitude> amplitudes);

    int qubit_count() const { return qubit_count_; }
    std::uint64_t dimension() const { return amps_.size(); }
    const std::vector<Amplitude>& amplitudes() const { return amps_; }
    Amplitude amplitude(std::uint64_t index) const { return amps_[index]; }
    double norm_squared() const;

private:
    int qubit_count_;
    std::vector<Amplitude> amps_;
};

struct MeasurementRecord {
    int qubit_index = 0;
    int outcome = 0;
    /// Born probability of the recorded outcome in the pre-measurement state.
    double outcome_probability = 0.0;
};

/// Computational basis state |basis_index> on qubit_count qubits.
StateVector make_basis_state(int qubit_count, std::uint64_t basis_index);

/// Single-qubit reference state cos(theta/2)|0> + i sin(theta/2)|1>
/// carrying the channel angle. theta must lie in [0, 2*pi).
StateVector pilot_state(double theta);

StateVector apply_gate(const StateVector& state, const Gate2x2& gate, int target);

/// Applies `gate` to `target` on the subspace where `control` is |1>.
StateVector apply_controlled(const StateVector& state, int control, int target,
                             const Gate2x2& gate);

/// Kronecker product; `a`'s qubits become the high-order bits.
StateVector tensor(const StateVector& a, const StateVector& b);

/// Projective measurement of one qubit in the computational basis. Consumes
/// exactly one uniform draw; the returned state is collapsed, renormalized,
/// and keeps its full width.
std::pair<MeasurementRecord, StateVector> measure_qubit(const StateVector& state,
                                                        int target, Rng& rng);

Amplitude inner_product(const StateVector& a, const StateVector& b);

/// |<a|b>|^2 — global-phase-blind overlap of two pure states.
double fidelity(const StateVector& a, const StateVector& b);

/// One-qubit density operator, row-major.
struct Density2 {
    Amplitude m00, m01, m10, m11;
};

/// U_theta rho U_theta†. rho must be Hermitian with unit trace and be
/// positive semidefinite (checked to 1e-12).
Density2 density_conjugate(const Density2& rho, double theta);

} // namespace satqkd
