#include "satqkd/commands.hpp"

#include "satqkd/cascade.hpp"
#include "satqkd/csv.hpp"
#include "satqkd/svg_plot.hpp"

#include <filesystem>
#include <ostream>
#include <sstream>

namespace satqkd {
namespace {

std::filesystem::path prepare_out_dir(const RunConfig& config) {
    const std::filesystem::path dir(config.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw io_error("cannot create " + dir.string() + ": " + ec.message());
    return dir;
}

} // namespace

void cmd_tables(const RunConfig& config) {
    validate(config);
    const std::filesystem::path dir = prepare_out_dir(config);

    std::ostringstream t1;
    t1 << "xi,r,p_success\n";
    for (const PilotBudget& row :
         budget_table(config.table1_xi_min, config.table1_xi_max))
        t1 << row.xi << ',' << row.r << ',' << csv::format_double(row.p_success)
           << '\n';
    csv::write_text_file(dir / "table1.csv", t1.str());

    std::ostringstream t2;
    t2 << "f_hz,raw,transmittable,corrected,redundancy_percent\n";
    for (double f : config.table2_f_hz) {
        const BudgetRow row =
            budget_row(f, effective_window_s(config), config.delta, config.xi);
        t2 << csv::format_double(row.rep_rate_hz) << ',' << row.raw_qubits << ','
           << row.transmittable << ',' << row.corrected_data << ','
           << csv::format_double(100.0 * row.redundancy) << '\n';
    }
    csv::write_text_file(dir / "table2.csv", t2.str());

    std::ostringstream f4;
    f4 << "xi,p_success\n";
    for (const auto& [xi, p] : success_curve(config.fig4_xi_min, config.fig4_xi_max))
        f4 << xi << ',' << csv::format_double(p) << '\n';
    csv::write_text_file(dir / "fig4.csv", f4.str());
}

ExperimentSummary cmd_simulate(const RunConfig& config,
                               std::ostream& summary_out) {
    validate(config);
    const std::filesystem::path dir = prepare_out_dir(config);

    const ExperimentSummary summary =
        end_to_end_experiment(link_params(config), config.xi, config.n_data,
                              config.trials, config.seed, config.threads);

    std::ostringstream body;
    body << "trial,theta,attempts,success,sifted_len,qber\n";
    for (const TrialRecord& r : summary.records)
        body << r.trial << ',' << csv::format_double(r.theta) << ',' << r.attempts
             << ',' << (r.success ? 1 : 0) << ',' << r.sifted_len << ','
             << csv::format_double(r.qber) << '\n';
    csv::write_text_file(dir / "experiment.csv", body.str());

    summary_out << "trials=" << summary.trials << '\n'
                << "n_data=" << summary.n_data << '\n'
                << "xi=" << summary.xi << '\n'
                << "seed=" << config.seed << '\n'
                << "success_rate=" << csv::format_double(summary.success_rate)
                << '\n'
                << "success_runs=" << summary.success_runs << '\n'
                << "failure_runs=" << summary.failure_runs << '\n'
                << "mean_qber_success="
                << csv::format_double(summary.mean_qber_success) << '\n'
                << "mean_qber_failure="
                << csv::format_double(summary.mean_qber_failure) << '\n'
                << "mean_yield=" << csv::format_double(summary.mean_yield)
                << '\n';
    return summary;
}

void cmd_sweep(const RunConfig& config) {
    validate(config);
    const std::filesystem::path dir = prepare_out_dir(config);

    std::vector<double> grid(static_cast<std::size_t>(config.steps));
    for (int i = 0; i < config.steps; ++i)
        grid[static_cast<std::size_t>(i)] =
            config.p_min + (config.p_max - config.p_min) *
                               static_cast<double>(i) /
                               static_cast<double>(config.steps - 1);

    const std::vector<ThroughputPoint> pilots =
        efficiency_sweep(config.sweep_xi, config.sweep_n, grid);

    CascadeParams params;
    params.passes = config.cascade_passes;

    // The interactive baseline flips each bit with probability p/2, since a
    // basis-matched qubit only reads out wrong half the time.
    struct CascadePoint {
        double p;
        double eta;
    };
    std::vector<CascadePoint> baseline;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double qber = grid[i] / 2.0;
        if (!(qber > 0.0)) continue; // an error-free channel leaks nothing
        Rng rng = Rng::child(config.seed, "cascade-sweep", i);
        const EfficiencySample sample = cascade_efficiency_sample(
            config.sweep_n, qber, params, config.cascade_trials, rng);
        // Past the correctable regime no run converges; fall back to the
        // all-runs mean so the curve stays defined.
        const double eta = sample.corrected_runs > 0 ? sample.efficiency
                                                     : sample.efficiency_all;
        baseline.push_back({grid[i], eta});
    }

    std::ostringstream f5;
    f5 << "p,xi,N,eta,source\n";
    for (const ThroughputPoint& pt : pilots)
        f5 << csv::format_double(pt.p) << ',' << pt.xi << ',' << pt.n_total << ','
           << csv::format_double(pt.eta) << ",pilot\n";
    for (const CascadePoint& pt : baseline)
        f5 << csv::format_double(pt.p) << ",0," << config.sweep_n << ','
           << csv::format_double(pt.eta) << ",cascade\n";
    csv::write_text_file(dir / "fig5.csv", f5.str());

    if (config.emit_plot) {
        std::vector<PlotSeries> series;
        for (int xi : config.sweep_xi) {
            PlotSeries s;
            s.label = "pilot xi=" + std::to_string(xi);
            for (const ThroughputPoint& pt : pilots) {
                if (pt.xi != xi) continue;
                s.x.push_back(pt.p);
                s.y.push_back(pt.eta);
            }
            series.push_back(std::move(s));
        }
        PlotSeries cascade_series;
        cascade_series.label = "cascade";
        for (const CascadePoint& pt : baseline) {
            cascade_series.x.push_back(pt.p);
            cascade_series.y.push_back(pt.eta);
        }
        series.push_back(std::move(cascade_series));

        std::ostringstream svg;
        write_line_chart_svg(svg, "throughput efficiency",
                             "failure probability p", "efficiency", series,
                             /*clamp_negative_y=*/true);
        csv::write_text_file(dir / "fig5.svg", svg.str());
    }
}

int cmd_verify(const RunConfig& config, std::ostream& out,
               bool inject_rotation_fault) {
    validate(config);
    const VerifyOptions options{config.seed, inject_rotation_fault};
    const std::vector<CheckResult> results = run_verify_suite(options);
    int failures = 0;
    for (const CheckResult& r : results) {
        out << (r.passed ? "ok   " : "FAIL ") << r.name << ": " << r.detail
            << '\n';
        if (!r.passed) ++failures;
    }
    out << (results.size() - static_cast<std::size_t>(failures)) << '/'
        << results.size() << " checks passed\n";
    return failures;
}

} // namespace satqkd
