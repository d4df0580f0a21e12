// ============================================================================
// nsch/commands.hpp - the run / check-potential / compare-forms / twin-run
// subcommands; each writes its files below config.output.dir
// ============================================================================
#pragma once

#include "nsch/config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace nsch {

struct RunSummary {
    RunResult result;
    PrepareReport prepare;
    std::string csv_path;
    std::vector<std::string> snapshots;
};

/// Integrates the configured problem, writing diagnostics.csv, periodic
/// snapshot_<step>.bin files and final.bin.
RunSummary cmd_run(const RunConfig& cfg, std::ostream& log);

struct PotentialCheckRow {
    double eps = 0.0, chi = 0.0;
    double psi_m2 = 0.0, psi_lo = 0.0, psi_hi = 0.0, psi_p2 = 0.0; ///< Ψ0,ε at the four knots
    double jump_value = 0.0, jump_derivative = 0.0;
    double min_second = 0.0;   ///< min Ψ''0,ε on [-10, 10]
    double min_r_prime = 0.0;  ///< min r Ψ'0,ε(r) on [-10, 10]
    double max_excess = 0.0;   ///< max (Ψ0,ε - Ψ0) inside (-1, 1)
    double r_star_upper = 0.0, r_star_lower = 0.0;
    double min_deficit = 0.0;  ///< coercivity deficit on [r*, r*+10] ∪ [r_*-10, r_*]
    double young_gap_min = 0.0;
};

/// Tabulates the regularized potential over check.eps × check.chi into
/// check_potential.csv.
std::vector<PotentialCheckRow> cmd_check_potential(const RunConfig& cfg, std::ostream& log);

struct FormComparison {
    std::vector<double> t;
    std::vector<double> sigma_min_cross;
    std::vector<double> sigma_min_linear;
};

/// Runs the configuration once per σ-equation form (outputs in the
/// cross_diffusion/ and linear_transport/ subdirectories) and writes the
/// joint compare_forms.csv.
FormComparison cmd_compare_forms(const RunConfig& cfg, std::ostream& log);

/// Twin runs over the δ ladder (deltas overrides twin.delta_ladder when
/// non-empty); writes twin_run.csv with columns delta, t, W_metric, W0_expected.
std::vector<TwinSeries> cmd_twin_run(const RunConfig& cfg, const std::vector<double>& deltas, std::ostream& log);

} // namespace nsch
