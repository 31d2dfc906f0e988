#include "satqkd/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace satqkd {
namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= kFnvPrime;
    }
    return h;
}

std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace

Rng::Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& s : state_) s = splitmix64(x);
}

Rng Rng::child(std::uint64_t master_seed, std::string_view stream_label,
               std::uint64_t index) {
    std::uint64_t h = kFnvOffset;
    h = fnv1a(h, &master_seed, sizeof master_seed);
    h = fnv1a(h, stream_label.data(), stream_label.size());
    h = fnv1a(h, &index, sizeof index);
    return Rng(h);
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double Rng::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
}

bool Rng::coin() {
    return (next_u64() >> 63) != 0;
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: n must be nonzero");
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % n;
}

std::uint64_t Rng::binomial(std::uint64_t n, double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("Rng::binomial: p outside [0, 1]");
    if (n == 0 || p == 0.0) return 0;
    if (p == 1.0) return n;

    // Skip from success to success; the gap is geometric with mean 1/p.
    const double log_q = std::log1p(-p);
    const double dn = static_cast<double>(n);
    double pos = 0.0;
    std::uint64_t count = 0;
    for (;;) {
        const double u = uniform01();
        pos += std::floor(std::log(1.0 - u) / log_q) + 1.0;
        if (pos > dn) break;
        ++count;
    }
    return count;
}

} // namespace satqkd
