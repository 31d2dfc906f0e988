#include "satqkd/cascade.hpp"

#include "satqkd/csv.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace satqkd {
namespace {

struct PassLayout {
    std::size_t block_size = 0;
    std::vector<std::uint32_t> order;    // permuted position sequence
    std::vector<std::uint32_t> block_of; // position -> block id
    std::size_t block_count = 0;
    std::vector<std::uint8_t> odd;       // parity mismatch per block
};

// Interactive state of one reconciliation session. Alice's key is read-only
// ground truth; `work` is Bob's copy being repaired.
struct Session {
    std::span<const std::uint8_t> a;
    std::vector<std::uint8_t> work;
    std::size_t pass1_block;
    std::vector<PassLayout> layouts;
    std::deque<std::pair<std::size_t, std::uint32_t>> pending;
    std::vector<ParityMessage> transcript;

    int parity_a(const PassLayout& layout, std::size_t lo, std::size_t hi) const {
        int p = 0;
        for (std::size_t i = lo; i < hi; ++i) p ^= a[layout.order[i]];
        return p;
    }

    int parity_b(const PassLayout& layout, std::size_t lo, std::size_t hi) const {
        int p = 0;
        for (std::size_t i = lo; i < hi; ++i) p ^= work[layout.order[i]];
        return p;
    }

    void build_pass(std::size_t pass, Rng& rng) {
        const std::size_t n = work.size();
        PassLayout layout;
        layout.block_size = pass1_block;
        for (std::size_t i = 0; i < pass; ++i)
            layout.block_size = std::min(layout.block_size * 2, n);
        layout.order.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            layout.order[i] = static_cast<std::uint32_t>(i);
        if (pass > 0)
            for (std::size_t i = 0; i + 1 < n; ++i)
                std::swap(layout.order[i], layout.order[i + rng.below(n - i)]);
        layout.block_count = (n + layout.block_size - 1) / layout.block_size;
        layout.block_of.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            layout.block_of[layout.order[i]] =
                static_cast<std::uint32_t>(i / layout.block_size);
        layout.odd.assign(layout.block_count, 0);
        layouts.push_back(std::move(layout));
    }

    void flip(std::size_t pos) {
        work[pos] ^= 1;
        // Both parties can recompute which blocks turned odd, so cascading
        // costs no extra disclosure beyond the next binary searches.
        for (std::size_t p = 0; p < layouts.size(); ++p) {
            const std::uint32_t bid = layouts[p].block_of[pos];
            layouts[p].odd[bid] ^= 1;
            if (layouts[p].odd[bid]) pending.emplace_back(p, bid);
        }
    }

    // Binary parity search over an odd block; each disclosed half-parity is
    // one transcript message. Ends by flipping the located bit.
    void hunt(std::size_t pass, std::uint32_t bid) {
        const PassLayout& layout = layouts[pass];
        std::size_t lo = bid * layout.block_size;
        std::size_t hi = std::min(lo + layout.block_size, work.size());
        std::size_t emitted = 0;
        while (hi - lo > 1) {
            const std::size_t mid = lo + (hi - lo + 1) / 2;
            const int pa = parity_a(layout, lo, mid);
            const int pb = parity_b(layout, lo, mid);
            transcript.push_back({static_cast<int>(pass), bid, pa, pb, 0});
            ++emitted;
            if (pa != pb)
                hi = mid;
            else
                lo = mid;
        }
        if (emitted > 0) transcript.back().flips = 1;
        flip(layout.order[lo]);
    }

    void drain() {
        while (!pending.empty()) {
            auto [pass, bid] = pending.front();
            pending.pop_front();
            if (layouts[pass].odd[bid]) hunt(pass, bid);
        }
    }

    void run_pass(std::size_t pass, Rng& rng) {
        build_pass(pass, rng);
        PassLayout& layout = layouts.back();
        for (std::uint32_t bid = 0; bid < layout.block_count; ++bid) {
            const std::size_t lo = bid * layout.block_size;
            const std::size_t hi = std::min(lo + layout.block_size, work.size());
            const int pa = parity_a(layout, lo, hi);
            const int pb = parity_b(layout, lo, hi);
            transcript.push_back({static_cast<int>(pass), bid, pa, pb, 0});
            if (pa != pb) {
                layout.odd[bid] = 1;
                pending.emplace_back(pass, bid);
            }
        }
        drain();
    }
};

} // namespace

ReconciliationReport reconcile(std::span<const std::uint8_t> a,
                               std::span<const std::uint8_t> b,
                               double qber_estimate,
                               const CascadeParams& params, Rng& rng) {
    if (a.size() != b.size())
        throw std::invalid_argument("keys disagree in length");
    if (a.size() < 16)
        throw std::invalid_argument("key too short to reconcile");
    if (!(qber_estimate > 0.0 && qber_estimate < 0.5))
        throw std::invalid_argument("error-rate estimate must lie in (0, 0.5)");
    if (params.passes < 1)
        throw std::invalid_argument("at least one pass required");
    if (!(params.block_rule_constant > 0.0))
        throw std::invalid_argument("block rule constant must be positive");

    Session session;
    session.a = a;
    session.work.assign(b.begin(), b.end());
    session.pass1_block = std::clamp<std::size_t>(
        static_cast<std::size_t>(
            std::ceil(params.block_rule_constant / qber_estimate)),
        1, a.size());

    for (std::size_t pass = 0; pass < static_cast<std::size_t>(params.passes);
         ++pass)
        session.run_pass(pass, rng);

    ReconciliationReport report;
    report.residual_mismatches = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != session.work[i]) ++report.residual_mismatches;
    report.corrected = report.residual_mismatches == 0;
    report.leaked_bits = session.transcript.size();
    report.final_key_a.assign(a.begin(), a.end());
    report.final_key_b = std::move(session.work);
    report.transcript = std::move(session.transcript);
    return report;
}

EfficiencySample cascade_efficiency_sample(std::size_t n, double qber,
                                           const CascadeParams& params,
                                           int trials, Rng& rng) {
    if (trials < 1) throw std::invalid_argument("at least one trial required");
    EfficiencySample sample;
    sample.n = n;
    sample.qber = qber;
    sample.trials = trials;

    double leaked_corrected = 0.0, eff_corrected = 0.0;
    double leaked_all = 0.0, eff_all = 0.0;
    for (int t = 0; t < trials; ++t) {
        std::vector<std::uint8_t> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) a[i] = rng.coin() ? 1 : 0;
        b = a;
        for (std::size_t i = 0; i < n; ++i)
            if (rng.uniform01() < qber) b[i] ^= 1;

        const ReconciliationReport rep = reconcile(a, b, qber, params, rng);
        const double leaked = static_cast<double>(rep.leaked_bits);
        const double eff = 1.0 - leaked / static_cast<double>(n);
        leaked_all += leaked;
        eff_all += eff;
        if (rep.corrected) {
            ++sample.corrected_runs;
            leaked_corrected += leaked;
            eff_corrected += eff;
        }
    }

    sample.mean_leaked_all = leaked_all / trials;
    sample.efficiency_all = eff_all / trials;
    if (sample.corrected_runs > 0) {
        sample.mean_leaked = leaked_corrected / sample.corrected_runs;
        sample.efficiency = eff_corrected / sample.corrected_runs;
    }
    return sample;
}

double cascade_efficiency(std::size_t n, double qber,
                          const CascadeParams& params, int trials, Rng& rng) {
    const EfficiencySample sample =
        cascade_efficiency_sample(n, qber, params, trials, rng);
    if (sample.corrected_runs == 0)
        throw std::runtime_error(
            "no run corrected; efficiency over corrected runs is undefined");
    return sample.efficiency;
}

void write_transcript_csv(std::ostream& out, const ReconciliationReport& report) {
    out << "pass,block,parity_a,parity_b,flips\n";
    for (const ParityMessage& m : report.transcript)
        out << m.pass << ',' << m.block << ',' << m.parity_a << ',' << m.parity_b
            << ',' << m.flips << '\n';
}

void write_efficiency_csv(std::ostream& out,
                          std::span<const EfficiencySample> samples) {
    out << "n,qber,trials,mean_leaked,efficiency\n";
    for (const EfficiencySample& s : samples)
        out << s.n << ',' << csv::format_double(s.qber) << ',' << s.trials << ','
            << csv::format_double(s.mean_leaked) << ','
            << csv::format_double(s.efficiency) << '\n';
}

} // namespace satqkd
