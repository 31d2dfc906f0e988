#pragma once

#include "satqkd/quantum.hpp"
#include "satqkd/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace satqkd {

enum class Basis : std::uint8_t { rectilinear = 0, diagonal = 1 };

struct RawKey {
    std::vector<std::uint8_t> bits;
    std::vector<Basis> bases;

    std::size_t size() const { return bits.size(); }
};

struct SiftedKey {
    std::vector<std::uint8_t> bits;
    /// Index each sifted bit had in the raw transmission order.
    std::vector<std::size_t> source_positions;

    std::size_t size() const { return bits.size(); }
};

/// n uniform bits with uniform basis choices.
RawKey generate_raw(std::size_t n, Rng& rng);

/// Polarization encoding: rectilinear 0 -> |0> (vertical), 1 -> |1>
/// (horizontal); diagonal 0 -> |+>, 1 -> |->.
StateVector encode_qubit(std::uint8_t bit, Basis basis);

std::vector<StateVector> encode(const RawKey& raw);

struct MeasuredKey {
    std::vector<std::uint8_t> bits;
    std::vector<Basis> bases;
};

/// Receiver side: picks a uniform basis per qubit, rotates diagonal choices
/// into the computational basis, measures.
MeasuredKey measure_with_random_bases(std::span<const StateVector> states,
                                      Rng& rng);

/// Keeps the positions where both parties chose the same basis.
std::pair<SiftedKey, SiftedKey> sift(const RawKey& alice,
                                     std::span<const Basis> bob_bases,
                                     std::span<const std::uint8_t> bob_bits);

struct QberEstimate {
    double qber = 0.0;
    SiftedKey remaining_a;
    SiftedKey remaining_b;
    /// Indices (into the sifted keys) that were disclosed for the estimate.
    std::vector<std::size_t> disclosed_positions;
};

/// Discloses and discards a random sample of the sifted key to estimate the
/// error rate. sample_fraction must leave at least one disclosed position.
QberEstimate estimate_qber(const SiftedKey& a, const SiftedKey& b,
                           double sample_fraction, Rng& rng);

/// Audit record of one session, serializable for later inspection.
struct SessionTranscript {
    std::vector<Basis> alice_bases;
    std::vector<Basis> bob_bases;
    std::vector<std::size_t> disclosed_positions;
    double qber = 0.0;
};

void write_session_csv(std::ostream& out, const SessionTranscript& transcript);

} // namespace satqkd
