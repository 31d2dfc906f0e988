#include "satqkd/bb84.hpp"

#include "satqkd/csv.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace satqkd {

RawKey generate_raw(std::size_t n, Rng& rng) {
    if (n == 0) throw std::invalid_argument("raw key length must be positive");
    RawKey raw;
    raw.bits.reserve(n);
    raw.bases.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        raw.bits.push_back(rng.coin() ? 1 : 0);
        raw.bases.push_back(rng.coin() ? Basis::diagonal : Basis::rectilinear);
    }
    return raw;
}

StateVector encode_qubit(std::uint8_t bit, Basis basis) {
    if (bit > 1) throw std::invalid_argument("bit must be 0 or 1");
    StateVector state = make_basis_state(1, bit);
    if (basis == Basis::diagonal)
        state = apply_gate(state, Gate2x2::hadamard(), 0);
    return state;
}

std::vector<StateVector> encode(const RawKey& raw) {
    if (raw.bits.size() != raw.bases.size())
        throw std::invalid_argument("raw key bits and bases disagree in length");
    std::vector<StateVector> states;
    states.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i)
        states.push_back(encode_qubit(raw.bits[i], raw.bases[i]));
    return states;
}

MeasuredKey measure_with_random_bases(std::span<const StateVector> states,
                                      Rng& rng) {
    MeasuredKey measured;
    measured.bits.reserve(states.size());
    measured.bases.reserve(states.size());
    for (const StateVector& state : states) {
        if (state.qubit_count() != 1)
            throw std::invalid_argument("expected single-qubit states");
        const Basis basis = rng.coin() ? Basis::diagonal : Basis::rectilinear;
        StateVector s = state;
        if (basis == Basis::diagonal)
            s = apply_gate(s, Gate2x2::hadamard(), 0);
        auto [record, _] = measure_qubit(s, 0, rng);
        measured.bits.push_back(static_cast<std::uint8_t>(record.outcome));
        measured.bases.push_back(basis);
    }
    return measured;
}

std::pair<SiftedKey, SiftedKey> sift(const RawKey& alice,
                                     std::span<const Basis> bob_bases,
                                     std::span<const std::uint8_t> bob_bits) {
    if (alice.bits.size() != bob_bases.size() ||
        bob_bases.size() != bob_bits.size())
        throw std::invalid_argument("sift inputs disagree in length");
    SiftedKey a, b;
    for (std::size_t i = 0; i < alice.size(); ++i) {
        if (alice.bases[i] != bob_bases[i]) continue;
        a.bits.push_back(alice.bits[i]);
        a.source_positions.push_back(i);
        b.bits.push_back(bob_bits[i]);
        b.source_positions.push_back(i);
    }
    return {std::move(a), std::move(b)};
}

QberEstimate estimate_qber(const SiftedKey& a, const SiftedKey& b,
                           double sample_fraction, Rng& rng) {
    if (a.size() != b.size())
        throw std::invalid_argument("sifted keys disagree in length");
    if (!(sample_fraction > 0.0 && sample_fraction <= 1.0))
        throw std::invalid_argument("sample fraction must lie in (0, 1]");
    const std::size_t n = a.size();
    const std::size_t k =
        static_cast<std::size_t>(sample_fraction * static_cast<double>(n));
    if (k == 0) throw std::invalid_argument("estimation sample is empty");

    // Partial Fisher--Yates: the first k slots become the disclosed sample.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (std::size_t i = 0; i < k; ++i)
        std::swap(order[i], order[i + rng.below(n - i)]);

    QberEstimate est;
    est.disclosed_positions.assign(order.begin(),
                                   order.begin() + static_cast<std::ptrdiff_t>(k));
    std::vector<bool> disclosed(n, false);
    std::size_t mismatches = 0;
    for (std::size_t pos : est.disclosed_positions) {
        disclosed[pos] = true;
        if (a.bits[pos] != b.bits[pos]) ++mismatches;
    }
    est.qber = static_cast<double>(mismatches) / static_cast<double>(k);

    for (std::size_t i = 0; i < n; ++i) {
        if (disclosed[i]) continue;
        est.remaining_a.bits.push_back(a.bits[i]);
        est.remaining_a.source_positions.push_back(a.source_positions[i]);
        est.remaining_b.bits.push_back(b.bits[i]);
        est.remaining_b.source_positions.push_back(b.source_positions[i]);
    }
    return est;
}

void write_session_csv(std::ostream& out, const SessionTranscript& transcript) {
    if (transcript.alice_bases.size() != transcript.bob_bases.size())
        throw std::invalid_argument("transcript basis lists disagree in length");
    std::vector<bool> disclosed(transcript.alice_bases.size(), false);
    for (std::size_t pos : transcript.disclosed_positions) {
        if (pos >= disclosed.size())
            throw std::out_of_range("disclosed position out of range");
        disclosed[pos] = true;
    }
    out << "position,alice_basis,bob_basis,disclosed,qber\n";
    for (std::size_t i = 0; i < transcript.alice_bases.size(); ++i) {
        out << i << ',' << static_cast<int>(transcript.alice_bases[i]) << ','
            << static_cast<int>(transcript.bob_bases[i]) << ','
            << (disclosed[i] ? 1 : 0) << ',' << csv::format_double(transcript.qber)
            << '\n';
    }
}

} // namespace satqkd
