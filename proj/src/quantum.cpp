#include "satqkd/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace satqkd {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNormTolerance = 1e-9;
constexpr double kHermitianTolerance = 1e-12;

void check_qubit_count(int qubit_count) {
    if (qubit_count < 1)
        throw std::invalid_argument("state needs at least one qubit");
    if (qubit_count > kMaxQubits)
        throw std::length_error("state exceeds " + std::to_string(kMaxQubits) +
                                "-qubit capacity");
}

void check_target(const StateVector& state, int target) {
    if (target < 0 || target >= state.qubit_count())
        throw std::out_of_range("qubit index out of range");
}

// Qubit 0 is the most significant index bit.
std::uint64_t bit_stride(const StateVector& state, int target) {
    return std::uint64_t{1} << (state.qubit_count() - 1 - target);
}

void check_normalized(const StateVector& state) {
    if (std::abs(state.norm_squared() - 1.0) > kNormTolerance)
        throw std::invalid_argument("state is not normalized");
}

} // namespace

Gate2x2 Gate2x2::adjoint() const {
    return {std::conj(m00), std::conj(m10), std::conj(m01), std::conj(m11)};
}

double Gate2x2::unitarity_defect() const {
    const Gate2x2 p = adjoint() * *this;
    return std::max({std::abs(p.m00 - 1.0), std::abs(p.m01), std::abs(p.m10),
                     std::abs(p.m11 - 1.0)});
}

Gate2x2 Gate2x2::identity() { return {1.0, 0.0, 0.0, 1.0}; }
Gate2x2 Gate2x2::pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }
Gate2x2 Gate2x2::pauli_z() { return {1.0, 0.0, 0.0, -1.0}; }

Gate2x2 Gate2x2::hadamard() {
    const double s = 1.0 / std::sqrt(2.0);
    return {s, s, s, -s};
}

Gate2x2 operator*(const Gate2x2& a, const Gate2x2& b) {
    return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11,
            a.m10 * b.m00 + a.m11 * b.m10, a.m10 * b.m01 + a.m11 * b.m11};
}

Gate2x2 gate_u_theta(double theta) {
    if (!std::isfinite(theta))
        throw std::invalid_argument("rotation angle must be finite");
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return {Amplitude{c, s}, 0.0, 0.0, Amplitude{c, -s}};
}

StateVector::StateVector(int qubit_count, std::vector<Amplitude> amplitudes)
    : qubit_count_(qubit_count), amps_(std::move(amplitudes)) {
    check_qubit_count(qubit_count_);
    if (amps_.size() != (std::uint64_t{1} << qubit_count_))
        throw std::invalid_argument("amplitude count must be 2^qubit_count");
}

double StateVector::norm_squared() const {
    double total = 0.0;
    for (const auto& a : amps_) total += std::norm(a);
    return total;
}

StateVector make_basis_state(int qubit_count, std::uint64_t basis_index) {
    check_qubit_count(qubit_count);
    const std::uint64_t dim = std::uint64_t{1} << qubit_count;
    if (basis_index >= dim)
        throw std::out_of_range("basis index out of range");
    std::vector<Amplitude> amps(dim, Amplitude{0.0, 0.0});
    amps[basis_index] = 1.0;
    return StateVector(qubit_count, std::move(amps));
}

StateVector pilot_state(double theta) {
    if (!(theta >= 0.0 && theta < 2.0 * kPi))
        throw std::invalid_argument("pilot angle must lie in [0, 2*pi)");
    return StateVector(1, {Amplitude{std::cos(theta / 2.0), 0.0},
                           Amplitude{0.0, std::sin(theta / 2.0)}});
}

StateVector apply_gate(const StateVector& state, const Gate2x2& gate, int target) {
    check_target(state, target);
    auto amps = state.amplitudes();
    const std::uint64_t stride = bit_stride(state, target);
    for (std::uint64_t base = 0; base < amps.size(); ++base) {
        if (base & stride) continue;
        const Amplitude a0 = amps[base];
        const Amplitude a1 = amps[base | stride];
        amps[base] = gate.m00 * a0 + gate.m01 * a1;
        amps[base | stride] = gate.m10 * a0 + gate.m11 * a1;
    }
    return StateVector(state.qubit_count(), std::move(amps));
}

StateVector apply_controlled(const StateVector& state, int control, int target,
                             const Gate2x2& gate) {
    check_target(state, control);
    check_target(state, target);
    if (control == target)
        throw std::invalid_argument("control and target must differ");
    auto amps = state.amplitudes();
    const std::uint64_t cstride = bit_stride(state, control);
    const std::uint64_t tstride = bit_stride(state, target);
    for (std::uint64_t base = 0; base < amps.size(); ++base) {
        if (!(base & cstride) || (base & tstride)) continue;
        const Amplitude a0 = amps[base];
        const Amplitude a1 = amps[base | tstride];
        amps[base] = gate.m00 * a0 + gate.m01 * a1;
        amps[base | tstride] = gate.m10 * a0 + gate.m11 * a1;
    }
    return StateVector(state.qubit_count(), std::move(amps));
}

StateVector tensor(const StateVector& a, const StateVector& b) {
    const int combined = a.qubit_count() + b.qubit_count();
    if (combined > kMaxQubits)
        throw std::length_error("tensor product exceeds qubit capacity");
    std::vector<Amplitude> amps(std::uint64_t{1} << combined);
    const std::uint64_t bdim = b.dimension();
    for (std::uint64_t i = 0; i < a.dimension(); ++i)
        for (std::uint64_t j = 0; j < bdim; ++j)
            amps[i * bdim + j] = a.amplitude(i) * b.amplitude(j);
    return StateVector(combined, std::move(amps));
}

std::pair<MeasurementRecord, StateVector> measure_qubit(const StateVector& state,
                                                        int target, Rng& rng) {
    check_target(state, target);
    check_normalized(state);
    const std::uint64_t stride = bit_stride(state, target);

    double p0 = 0.0;
    const auto& in = state.amplitudes();
    for (std::uint64_t k = 0; k < in.size(); ++k)
        if (!(k & stride)) p0 += std::norm(in[k]);

    const double u = rng.uniform01();
    const int outcome = u < p0 ? 0 : 1;
    const double p_outcome = outcome == 0 ? p0 : 1.0 - p0;
    if (p_outcome < 1e-15)
        throw std::logic_error("sampled a zero-probability branch");

    const double scale = 1.0 / std::sqrt(p_outcome);
    std::vector<Amplitude> amps(in.size());
    for (std::uint64_t k = 0; k < in.size(); ++k) {
        const bool keep = ((k & stride) != 0) == (outcome == 1);
        amps[k] = keep ? in[k] * scale : Amplitude{0.0, 0.0};
    }
    return {MeasurementRecord{target, outcome, p_outcome},
            StateVector(state.qubit_count(), std::move(amps))};
}

Amplitude inner_product(const StateVector& a, const StateVector& b) {
    if (a.qubit_count() != b.qubit_count())
        throw std::invalid_argument("inner product needs equal qubit counts");
    Amplitude total{0.0, 0.0};
    for (std::uint64_t k = 0; k < a.dimension(); ++k)
        total += std::conj(a.amplitude(k)) * b.amplitude(k);
    return total;
}

double fidelity(const StateVector& a, const StateVector& b) {
    return std::norm(inner_product(a, b));
}

Density2 density_conjugate(const Density2& rho, double theta) {
    if (std::abs(rho.m00.imag()) > kHermitianTolerance ||
        std::abs(rho.m11.imag()) > kHermitianTolerance ||
        std::abs(rho.m01 - std::conj(rho.m10)) > kHermitianTolerance)
        throw std::invalid_argument("density operator must be Hermitian");
    if (std::abs(rho.m00.real() + rho.m11.real() - 1.0) > kHermitianTolerance)
        throw std::invalid_argument("density operator must have unit trace");
    const double det =
        (rho.m00 * rho.m11 - rho.m01 * rho.m10).real();
    if (rho.m00.real() < -kHermitianTolerance ||
        rho.m11.real() < -kHermitianTolerance || det < -kHermitianTolerance)
        throw std::invalid_argument("density operator must be positive semidefinite");

    const Gate2x2 u = gate_u_theta(theta);
    const Gate2x2 ud = u.adjoint();
    const Gate2x2 m = u * Gate2x2{rho.m00, rho.m01, rho.m10, rho.m11} * ud;
    return {m.m00, m.m01, m.m10, m.m11};
}

} // namespace satqkd
