#pragma once

#include <cstdint>
#include <string_view>

namespace satqkd {

// Deterministic xoshiro256++ stream. Every stochastic operation takes one of
// these explicitly, and independent streams are derived from a master seed by
// (label, index) so parallel trials reproduce bit-for-bit regardless of
// scheduling or worker count.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    static Rng child(std::uint64_t master_seed, std::string_view stream_label,
                     std::uint64_t index);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01();

    double uniform(double lo, double hi);

    bool coin();

    /// Uniform integer in [0, n). n must be nonzero.
    std::uint64_t below(std::uint64_t n);

    /// Exact Binomial(n, p) sample via geometric waiting times; costs
    /// O(n*p) draws, so it stays cheap even for very large n.
    std::uint64_t binomial(std::uint64_t n, double p);

private:
    std::uint64_t state_[4];
};

} // namespace satqkd
