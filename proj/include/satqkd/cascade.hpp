#pragma once

#include "satqkd/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace satqkd {

struct CascadeParams {
    int passes = 4;
    /// Pass-1 block size is ceil(block_rule_constant / qber), clamped to
    /// [1, key length]; later passes double it.
    double block_rule_constant = 0.73;
};

/// One disclosed parity. `flips` is 1 when this message pinned down a bit
/// that was then corrected.
struct ParityMessage {
    int pass = 0;
    std::uint32_t block = 0;
    int parity_a = 0;
    int parity_b = 0;
    int flips = 0;
};

struct ReconciliationReport {
    bool corrected = false;
    /// Information leaked to an eavesdropper: one bit per disclosed parity,
    /// always equal to transcript.size().
    std::uint64_t leaked_bits = 0;
    std::uint64_t residual_mismatches = 0;
    std::vector<std::uint8_t> final_key_a;
    std::vector<std::uint8_t> final_key_b;
    std::vector<ParityMessage> transcript;
};

/// Interactive parity reconciliation of b against a: blockwise parity
/// exchange, binary search on odd blocks, and back-propagation of every flip
/// into earlier passes. Deterministic given the rng seed.
ReconciliationReport reconcile(std::span<const std::uint8_t> a,
                               std::span<const std::uint8_t> b,
                               double qber_estimate,
                               const CascadeParams& params, Rng& rng);

struct EfficiencySample {
    std::size_t n = 0;
    double qber = 0.0;
    int trials = 0;
    int corrected_runs = 0;
    /// Mean disclosed bits and mean of 1 - leaked/n over corrected runs.
    double mean_leaked = 0.0;
    double efficiency = 0.0;
    /// Same means over every run, corrected or not.
    double mean_leaked_all = 0.0;
    double efficiency_all = 0.0;
};

/// Monte-Carlo efficiency of reconcile on random keys with i.i.d. errors.
EfficiencySample cascade_efficiency_sample(std::size_t n, double qber,
                                           const CascadeParams& params,
                                           int trials, Rng& rng);

/// Mean of 1 - leaked/n over corrected runs; throws std::runtime_error when
/// no run corrected.
double cascade_efficiency(std::size_t n, double qber,
                          const CascadeParams& params, int trials, Rng& rng);

void write_transcript_csv(std::ostream& out, const ReconciliationReport& report);
void write_efficiency_csv(std::ostream& out,
                          std::span<const EfficiencySample> samples);

} // namespace satqkd
