#include "satqkd/link_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace satqkd {
namespace {

TrialRecord run_trial(const LinkParams& link, int xi, std::size_t n_data,
                      std::uint64_t master_seed, int trial_index) {
    Rng rng = Rng::child(master_seed, "trial",
                         static_cast<std::uint64_t>(trial_index));

    const ChannelInstance channel =
        sample_channel(link.orbit, rng, link.window_s);
    const RawKey raw = generate_raw(n_data, rng);
    std::vector<StateVector> qubits = encode(raw);

    const Gate2x2 noise = gate_u_theta(channel.theta);
    for (StateVector& q : qubits) q = apply_gate(q, noise, 0);

    const std::vector<double> thetas(n_data, channel.theta);
    const ChainTranscript chain = correct_qubit_batch(qubits, thetas, xi, rng);

    const MeasuredKey bob = measure_with_random_bases(qubits, rng);
    const auto [sifted_a, sifted_b] = sift(raw, bob.bases, bob.bits);

    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < sifted_a.size(); ++i)
        if (sifted_a.bits[i] != sifted_b.bits[i]) ++mismatches;

    TrialRecord record;
    record.trial = trial_index;
    record.theta = channel.theta;
    record.attempts = chain.attempts_used;
    record.success = chain.success;
    record.sifted_len = sifted_a.size();
    record.qber = sifted_a.size() == 0
                      ? 0.0
                      : static_cast<double>(mismatches) /
                            static_cast<double>(sifted_a.size());
    return record;
}

} // namespace

std::uint64_t raw_qubit_count(double rep_rate_hz, double window_s) {
    if (!(rep_rate_hz > 0.0) || !std::isfinite(rep_rate_hz))
        throw std::invalid_argument("repetition rate must be positive");
    if (!(window_s > 0.0) || !std::isfinite(window_s))
        throw std::invalid_argument("window duration must be positive");
    const double count = rep_rate_hz * window_s;
    if (count >= 9.2e18)
        throw std::overflow_error("raw qubit count overflows");
    return static_cast<std::uint64_t>(std::llround(count));
}

BudgetRow budget_row(double rep_rate_hz, double window_s, double delta, int xi) {
    if (!(delta >= 0.0 && delta <= 1.0))
        throw std::invalid_argument("attenuation must lie in [0, 1]");
    BudgetRow row;
    row.rep_rate_hz = rep_rate_hz;
    row.raw_qubits = raw_qubit_count(rep_rate_hz, window_s);
    row.transmittable = static_cast<std::uint64_t>(
        std::llround(static_cast<double>(row.raw_qubits) * delta));
    const std::uint64_t required = pilot_requirement(xi);
    if (row.transmittable < required) {
        std::ostringstream msg;
        msg << "infeasible budget: transmittable=" << row.transmittable
            << " pilot_requirement=" << required << " xi=" << xi;
        throw std::domain_error(msg.str());
    }
    row.corrected_data = row.transmittable - required;
    row.redundancy = redundancy(required, row.transmittable);
    return row;
}

double redundancy(std::uint64_t r, std::uint64_t n_total) {
    if (n_total == 0)
        throw std::invalid_argument("budget must be positive");
    return static_cast<double>(r) / static_cast<double>(n_total);
}

double throughput_overhead(double p, int xi, std::uint64_t n_total) {
    if (!(p >= 0.0 && p < 1.0))
        throw std::invalid_argument("failure probability must lie in [0, 1)");
    if (xi < 1) throw std::invalid_argument("pilot string length must be >= 1");
    if (n_total == 0)
        throw std::invalid_argument("budget must be positive");
    return ((1.0 / (1.0 - p)) * static_cast<double>(xi)) /
           static_cast<double>(n_total);
}

double throughput_efficiency(double p, int xi, std::uint64_t n_total) {
    return 1.0 - throughput_overhead(p, xi, n_total);
}

std::vector<ThroughputPoint> efficiency_sweep(std::span<const int> xi_list,
                                              std::uint64_t n_total,
                                              std::span<const double> p_grid) {
    std::vector<ThroughputPoint> points;
    points.reserve(xi_list.size() * p_grid.size());
    for (int xi : xi_list)
        for (double p : p_grid)
            points.push_back({p, xi, n_total, throughput_efficiency(p, xi, n_total)});
    return points;
}

std::vector<std::pair<int, double>> success_curve(int xi_min, int xi_max) {
    if (xi_min < 1 || xi_min > xi_max)
        throw std::invalid_argument("bad success-curve range");
    std::vector<std::pair<int, double>> curve;
    curve.reserve(static_cast<std::size_t>(xi_max - xi_min + 1));
    for (int xi = xi_min; xi <= xi_max; ++xi)
        curve.emplace_back(xi, success_probability(xi));
    return curve;
}

ExperimentSummary end_to_end_experiment(const LinkParams& link, int xi,
                                        std::size_t n_data, int trials,
                                        std::uint64_t master_seed, int threads) {
    if (trials < 1) throw std::invalid_argument("at least one trial required");
    if (n_data < 1) throw std::invalid_argument("data block must be nonempty");
    if (threads < 1) throw std::invalid_argument("thread count must be >= 1");

    // The pilot string and the data block both have to fit the attenuated
    // window budget; budget_row performs the pilot-side check.
    const BudgetRow budget =
        budget_row(link.rep_rate_hz, link.window_s, link.attenuation, xi);
    if (n_data > budget.corrected_data) {
        std::ostringstream msg;
        msg << "infeasible budget: n_data=" << n_data
            << " corrected_data=" << budget.corrected_data
            << " transmittable=" << budget.transmittable;
        throw std::domain_error(msg.str());
    }

    ExperimentSummary summary;
    summary.trials = trials;
    summary.n_data = n_data;
    summary.xi = xi;
    summary.records.resize(static_cast<std::size_t>(trials));

    // Trials are embarrassingly parallel: every record depends only on its
    // own child stream, so any partition yields identical output.
    const int workers = std::min(threads, trials);
    auto body = [&](int begin, int end) {
        for (int t = begin; t < end; ++t)
            summary.records[static_cast<std::size_t>(t)] =
                run_trial(link, xi, n_data, master_seed, t);
    };
    if (workers == 1) {
        body(0, trials);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        const int chunk = (trials + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const int begin = w * chunk;
            const int end = std::min(trials, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(body, begin, end);
        }
        for (std::thread& th : pool) th.join();
    }

    double qber_success = 0.0, qber_failure = 0.0, yield = 0.0;
    for (const TrialRecord& r : summary.records) {
        if (r.success) {
            ++summary.success_runs;
            qber_success += r.qber;
            yield += static_cast<double>(r.sifted_len);
        } else {
            ++summary.failure_runs;
            qber_failure += r.qber;
        }
    }
    summary.success_rate =
        static_cast<double>(summary.success_runs) / static_cast<double>(trials);
    summary.mean_qber_success =
        summary.success_runs > 0 ? qber_success / summary.success_runs : 0.0;
    summary.mean_qber_failure =
        summary.failure_runs > 0 ? qber_failure / summary.failure_runs : 0.0;
    summary.mean_yield = yield / static_cast<double>(trials);
    return summary;
}

} // namespace satqkd
