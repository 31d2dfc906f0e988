#pragma once

#include "satqkd/config.hpp"
#include "satqkd/link_analysis.hpp"
#include "satqkd/verify.hpp"

#include <iosfwd>

namespace satqkd {

/// Writes table1.csv (pilot budgets), table2.csv (downlink budgets) and
/// fig4.csv (chain success curve) under config.out_dir.
void cmd_tables(const RunConfig& config);

/// Runs the end-to-end Monte Carlo, writes experiment.csv under
/// config.out_dir and prints the summary as key=value lines.
ExperimentSummary cmd_simulate(const RunConfig& config, std::ostream& summary_out);

/// Writes fig5.csv (pilot efficiency curves next to the interactive
/// reconciliation baseline) and optionally fig5.svg.
void cmd_sweep(const RunConfig& config);

/// Prints one line per invariant check; returns the number of failures.
int cmd_verify(const RunConfig& config, std::ostream& out,
               bool inject_rotation_fault = false);

} // namespace satqkd
