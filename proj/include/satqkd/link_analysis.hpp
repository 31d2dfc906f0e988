#pragma once

#include "satqkd/bb84.hpp"
#include "satqkd/cascade.hpp"
#include "satqkd/channel.hpp"
#include "satqkd/pilot_qec.hpp"
#include "satqkd/rng.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace satqkd {

/// One downlink budget line: what the source emits, what survives the loss,
/// and what is left for key material after paying for pilots.
struct BudgetRow {
    double rep_rate_hz = 0.0;
    std::uint64_t raw_qubits = 0;
    std::uint64_t transmittable = 0;
    std::uint64_t corrected_data = 0;
    /// Pilot cost as a fraction of the transmittable budget.
    double redundancy = 0.0;
};

std::uint64_t raw_qubit_count(double rep_rate_hz, double window_s);

/// Throws std::domain_error naming transmittable, required pilots and xi when
/// the pilot string does not fit the attenuated budget.
BudgetRow budget_row(double rep_rate_hz, double window_s, double delta, int xi);

double redundancy(std::uint64_t r, std::uint64_t n_total);

/// Fraction of an N-qubit budget left for data once every window pays the
/// expected pilot cost: 1 - ((1/(1-p)) * xi) / N.
double throughput_efficiency(double p, int xi, std::uint64_t n_total);

/// The subtracted overhead term alone; halves exactly when n_total doubles.
double throughput_overhead(double p, int xi, std::uint64_t n_total);

struct ThroughputPoint {
    double p = 0.0;
    int xi = 0;
    std::uint64_t n_total = 0;
    double eta = 0.0;
};

std::vector<ThroughputPoint> efficiency_sweep(std::span<const int> xi_list,
                                              std::uint64_t n_total,
                                              std::span<const double> p_grid);

/// (xi, 1 - 2^-xi) pairs over an inclusive range.
std::vector<std::pair<int, double>> success_curve(int xi_min, int xi_max);

struct TrialRecord {
    int trial = 0;
    double theta = 0.0;
    int attempts = 0;
    bool success = false;
    std::size_t sifted_len = 0;
    double qber = 0.0;
};

struct ExperimentSummary {
    int trials = 0;
    std::size_t n_data = 0;
    int xi = 0;
    double success_rate = 0.0;
    int success_runs = 0;
    int failure_runs = 0;
    double mean_qber_success = 0.0;
    double mean_qber_failure = 0.0;
    /// Mean usable key bits per window; failed windows are discarded and
    /// contribute zero.
    double mean_yield = 0.0;
    std::vector<TrialRecord> records;
};

/// Full protocol Monte Carlo: per window draw a channel angle, send an
/// encoded raw key through it, run the pilot chain, measure, sift, score.
/// Each trial owns a child rng stream, so the records are identical for any
/// thread count.
ExperimentSummary end_to_end_experiment(const LinkParams& link, int xi,
                                        std::size_t n_data, int trials,
                                        std::uint64_t master_seed,
                                        int threads = 1);

} // namespace satqkd
