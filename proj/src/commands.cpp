#include "nsch/commands.hpp"

#include "nsch/errors.hpp"
#include "nsch/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <string>

namespace nsch {

namespace {

std::string join(const std::string& dir, const std::string& name) { return (std::filesystem::path(dir) / name).string(); }

constexpr std::size_t kSigmaMin = 16;

std::string snapshot_name(long step)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "snapshot_%06ld.bin", step);
    return buf;
}

struct Prepared {
    GridPtr grid;
    InitialData data;
    Model model;
    PrepareReport report;
};

Prepared prepare_problem(const RunConfig& cfg)
{
    Prepared p;
    p.grid = cfg.make_grid();
    p.data = prepare(cfg.make_initial_data(p.grid), cfg.requested_K(*p.grid), &p.report);
    p.model = cfg.make_model();
    p.model.K = p.report.K_used;
    return p;
}

} // namespace

// ============================================================================
// run
// ============================================================================
RunSummary cmd_run(const RunConfig& cfg, std::ostream& log)
{
    ensure_directory(cfg.output.dir);
    const Prepared p = prepare_problem(cfg);
    if (p.report.K_used > p.report.K_requested)
        log << "note: Galerkin cutoff raised from " << p.report.K_requested << " to " << p.report.K_used << '\n';
    if (!p.report.max_principle_ok)
        log << "warning: smoothed phase field exceeds 1 - gamma (" << p.report.phi_max_after_smoothing << ")\n";

    RunSummary s;
    s.prepare = p.report;
    s.csv_path = join(cfg.output.dir, "diagnostics.csv");
    CsvWriter csv(s.csv_path, cfg.fingerprint(), diagnostics_header());

    RunHooks hooks;
    hooks.diag_interval = cfg.output.diag_interval;
    hooks.snapshot_interval = cfg.output.snapshot_interval;
    hooks.keep_records = false;
    hooks.on_record = [&](const DiagnosticsRecord& r) { csv.row(r); };
    hooks.on_snapshot = [&](const State& st, long step) {
        const std::string path = join(cfg.output.dir, snapshot_name(step));
        write_snapshot(path, st);
        s.snapshots.push_back(path);
    };
    try {
        s.result = run(p.data, cfg.scheme, p.model, hooks);
    } catch (...) {
        csv.flush();
        throw;
    }
    csv.flush();
    const std::string fin = join(cfg.output.dir, "final.bin");
    write_snapshot(fin, s.result.final_state);
    s.snapshots.push_back(fin);

    log << "run: " << s.result.steps << " steps of dt = " << format_real(s.result.dt)
        << ", stabilization S = " << format_real(s.result.stabilization)
        << ", max |energy-law residual| = " << format_real(s.result.max_abs_residual) << '\n'
        << "diagnostics: " << s.csv_path << '\n';
    return s;
}

// ============================================================================
// check-potential
// ============================================================================
std::vector<PotentialCheckRow> cmd_check_potential(const RunConfig& cfg, std::ostream& log)
{
    ensure_directory(cfg.output.dir);
    const PotentialParams base = PotentialParams::flory_huggins(cfg.potential.theta, cfg.potential.theta_c);
    std::vector<PotentialCheckRow> rows;
    for (double eps : cfg.check.eps)
        for (double chi : cfg.check.chi) {
            const RegPotential rp(base, eps, chi);
            PotentialCheckRow r;
            r.eps = eps;
            r.chi = chi;
            const auto k = rp.knots();
            r.psi_m2 = rp.value0(k[0]);
            r.psi_lo = rp.value0(k[1]);
            r.psi_hi = rp.value0(k[2]);
            r.psi_p2 = rp.value0(k[3]);
            const KnotJumps j = knot_jumps(rp);
            r.jump_value = j.value;
            r.jump_derivative = j.derivative;

            r.min_second = r.min_r_prime = std::numeric_limits<double>::infinity();
            const int n = 10000;
            for (int i = 0; i < n; ++i) {
                const double x = -10.0 + 20.0 * i / (n - 1);
                r.min_second = std::min(r.min_second, rp.second0(x));
                r.min_r_prime = std::min(r.min_r_prime, x * rp.prime0(x));
            }
            r.max_excess = -std::numeric_limits<double>::infinity();
            const double edge = 1.0 - 1e-6;
            for (int i = 0; i < n; ++i) {
                const double x = -edge + 2.0 * edge * i / (n - 1);
                r.max_excess = std::max(r.max_excess, rp.value0(x) - psi0(x, base));
            }
            r.r_star_upper = find_r_star(rp, RStarSide::upper);
            r.r_star_lower = find_r_star(rp, RStarSide::lower);
            r.min_deficit = std::numeric_limits<double>::infinity();
            for (int i = 0; i <= 2000; ++i) {
                const double d = 10.0 * i / 2000;
                r.min_deficit = std::min({r.min_deficit, coercivity_deficit(r.r_star_upper + d, rp),
                                          coercivity_deficit(r.r_star_lower - d, rp)});
            }
            rows.push_back(r);
        }

    double young = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 100; ++i)
        for (int j = 0; j < 100; ++j)
            young = std::min(young, young_gap(50.0 * i / 99, 50.0 * j / 99));
    for (auto& r : rows)
        r.young_gap_min = young;

    const std::string path = join(cfg.output.dir, "check_potential.csv");
    CsvWriter csv(path, cfg.fingerprint(),
                  {"eps", "chi", "psi_at_m2", "psi_at_m1_plus_eps", "psi_at_1_minus_eps", "psi_at_2", "knot_jump_value",
                   "knot_jump_derivative", "min_psi_second", "min_r_psi_prime", "max_psi_excess", "r_star_upper",
                   "r_star_lower", "min_coercivity_deficit", "young_gap_min"});
    for (const auto& r : rows) {
        const double v[] = {r.eps, r.chi, r.psi_m2, r.psi_lo, r.psi_hi, r.psi_p2, r.jump_value, r.jump_derivative,
                            r.min_second, r.min_r_prime, r.max_excess, r.r_star_upper, r.r_star_lower,
                            r.min_deficit, r.young_gap_min};
        csv.row(v);
        char line[256];
        std::snprintf(line, sizeof line,
                      "eps=%-6g chi=%-5g jump=%.2e/%.2e min Psi''=%.4g r*=[%.4g, %.4g] min deficit=%.3g\n", r.eps,
                      r.chi, r.jump_value, r.jump_derivative, r.min_second, r.r_star_lower, r.r_star_upper,
                      r.min_deficit);
        log << line;
    }
    csv.flush();
    log << "young gap minimum on [0,50]^2: " << format_real(young) << "\ntable: " << path << '\n';
    return rows;
}

// ============================================================================
// compare-forms
// ============================================================================
FormComparison cmd_compare_forms(const RunConfig& cfg, std::ostream& log)
{
    ensure_directory(cfg.output.dir);
    FormComparison out;
    std::vector<double>* mins[] = {&out.sigma_min_cross, &out.sigma_min_linear};
    const SigmaForm forms[] = {SigmaForm::cross_diffusion, SigmaForm::linear_transport};
    for (int k = 0; k < 2; ++k) {
        RunConfig c = cfg;
        c.model.sigma_form = forms[k];
        c.output.dir = join(cfg.output.dir, to_string(forms[k]));
        log << "[" << to_string(forms[k]) << "] ";
        const RunSummary s = cmd_run(c, log);
        // re-read the minima from the run's own records
        std::vector<double> t;
        std::ifstream in(s.csv_path);
        std::string line;
        std::getline(in, line);
        std::getline(in, line);
        while (std::getline(in, line)) {
            std::vector<double> v;
            std::size_t pos = 0;
            while (pos <= line.size()) {
                const auto comma = line.find(',', pos);
                v.push_back(std::stod(line.substr(pos, comma - pos)));
                if (comma == std::string::npos)
                    break;
                pos = comma + 1;
            }
            t.push_back(v[0]);
            mins[k]->push_back(v[kSigmaMin]);
        }
        if (k == 0)
            out.t = t;
    }
    const std::string path = join(cfg.output.dir, "compare_forms.csv");
    CsvWriter csv(path, cfg.fingerprint(), {"t", "sigma_min_cross_diffusion", "sigma_min_linear_transport"});
    const std::size_t n = std::min(out.sigma_min_cross.size(), out.sigma_min_linear.size());
    for (std::size_t i = 0; i < n; ++i) {
        const double v[] = {out.t[i], out.sigma_min_cross[i], out.sigma_min_linear[i]};
        csv.row(v);
    }
    csv.flush();
    const auto lo = [](const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); };
    log << "min sigma: cross_diffusion " << format_real(lo(out.sigma_min_cross)) << ", linear_transport "
        << format_real(lo(out.sigma_min_linear)) << "\nreport: " << path << '\n';
    return out;
}

// ============================================================================
// twin-run
// ============================================================================
std::vector<TwinSeries> cmd_twin_run(const RunConfig& cfg, const std::vector<double>& deltas, std::ostream& log)
{
    ensure_directory(cfg.output.dir);
    const std::vector<double>& ladder = deltas.empty() ? cfg.twin.delta_ladder : deltas;
    for (double d : ladder)
        if (!(d >= 0.0) || !std::isfinite(d))
            throw ConfigError("twin-run: deltas must be finite and >= 0");
    const GridPtr g = cfg.make_grid();
    Model m = cfg.make_model();
    m.K = 0.0;
    SchemeConfig sc = cfg.scheme;
    sc.K = cfg.requested_K(*g);
    const auto series = twin_run_ladder(cfg.make_initial_data(g), ladder, sc, m, cfg.twin.record_interval);

    const std::string path = join(cfg.output.dir, "twin_run.csv");
    CsvWriter csv(path, cfg.fingerprint(), {"delta", "t", "W_metric", "W0_expected"});
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.t.size(); ++i) {
            const double v[] = {s.delta, s.t[i], s.W[i], s.W0_expected};
            csv.row(v);
        }
    csv.flush();
    for (std::size_t i = 0; i < series.size(); ++i) {
        log << "delta=" << format_real(series[i].delta) << " sup W=" << format_real(series[i].sup_W());
        if (i > 0 && series[i].delta > 0 && series[i - 1].delta > series[i].delta && series[i].sup_W() > 0)
            log << " order=" << std::log(series[i - 1].sup_W() / series[i].sup_W())
                                    / std::log(series[i - 1].delta / series[i].delta);
        log << '\n';
    }
    log << "series: " << path << '\n';
    return series;
}

} // namespace nsch
