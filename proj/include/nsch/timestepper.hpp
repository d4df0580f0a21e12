// ============================================================================
// nsch/timestepper.hpp - linearly implicit IMEX integration of the truncated
// system, run orchestration and twin runs
// ============================================================================
#pragma once

#include "nsch/diagnostics.hpp"
#include "nsch/init.hpp"

#include <functional>
#include <vector>

namespace nsch {

struct SchemeConfig {
    double dt = 1e-3;
    double t_end = 1.0;
    double K = 0.0;              ///< Galerkin cutoff; 0 selects the dealiasing radius
    int imex_order = 2;          ///< 1: SBDF1, 2: SBDF2
    bool stabilize = true;       ///< implicit shift S|k|^2 on the phase equation
    double stab_shift = -1.0;    ///< S; negative selects the automatic value
    int max_halvings = 0;
    double residual_trigger = 0.0; ///< 0 disables emergency halving
    double entropy_floor = kDefaultEntropyFloor;

    /// Throws ParameterError for inconsistent settings on grid g.
    void validate(const Grid& g) const;
    /// Number of steps and the step actually used so that n dt = t_end.
    long steps() const;
    double effective_dt() const;
};

/// Stabilization coefficient S used for a model/config pair.
double stabilization_shift(const SchemeConfig& cfg, const Model& model);

/// Advances a state with the IMEX scheme, keeping the multistep history.
class Stepper {
public:
    /// `initial` must already be truncated to model.K (see prepare()).
    Stepper(Model model, SchemeConfig cfg, const State& initial);

    /// Advances by one step of size dt (defaults to the configured step).
    void step();
    void step(double dt);

    /// Current physical state with μ populated.
    State state() const;
    double time() const noexcept { return t_; }
    long steps_taken() const noexcept { return steps_; }
    double stabilization() const noexcept { return stab_; }
    const Model& model() const noexcept { return model_; }
    const SchemeConfig& config() const noexcept { return cfg_; }

    /// Drops the multistep history (the next step restarts the scheme).
    void reset_history() noexcept { have_history_ = false; }

private:
    struct Unknowns {
        Spectrum phi, sigma, vx, vy;
    };
    struct Explicit {
        Spectrum phi, sigma, vx, vy;
    };

    Explicit explicit_part(const Unknowns& u, const RhsSpectra& f) const;
    RhsSpectra eval(const Unknowns& u) const;
    Unknowns sbdf1(const Unknowns& u, const Explicit& n, double dt) const;
    Unknowns sbdf2(const Unknowns& u, const Unknowns& um1, const Explicit& n, const Explicit& nm1, double dt) const;
    void exact_mean(Unknowns& next, const Unknowns& u, double dt) const;
    void check_finite(const Unknowns& u) const;

    Model model_;
    SchemeConfig cfg_;
    double stab_ = 0.0;
    bool fluid_ = false;
    std::vector<double> k2_;
    Unknowns u_, um1_;
    RhsSpectra f_;       // right-hand side at u_
    Explicit n_, nm1_;
    bool have_history_ = false;
    double t_ = 0.0;
    double last_dt_ = 0.0;
    long steps_ = 0;
};

/// One scheme step from a bare state (order 2 uses the extrapolated start).
State step(const State& s, const SchemeConfig& cfg, const Model& model);

struct RunHooks {
    std::function<void(const DiagnosticsRecord&)> on_record;
    std::function<void(const State&, long step)> on_snapshot;
    long diag_interval = 1;     ///< steps between records (the final step is always recorded)
    long snapshot_interval = 0; ///< 0 disables snapshots
    bool keep_records = true;
};

struct RunResult {
    State final_state;
    std::vector<DiagnosticsRecord> records;
    long steps = 0;
    double dt = 0.0;
    double stabilization = 0.0;
    double max_abs_residual = 0.0;
    int halvings_used = 0;
};

/// Integrates prepared data to t_end. Diagnostics are evaluated every step so
/// that every record carries the residual of the step that produced it.
RunResult run(const InitialData& init, const SchemeConfig& cfg, const Model& model, const RunHooks& hooks = {});

/// Mean-free smooth perturbation applied to the raw phase field by twin runs.
ScalarField twin_perturbation(const GridPtr& g);

struct TwinSeries {
    double delta = 0.0;
    std::vector<double> t;
    std::vector<double> W;
    double W0_expected = 0.0; ///< metric of the prepared perturbation at t = 0
    double sup_W() const;
};

/// Runs the base data and δ-perturbed copies (φ0 += δ b before preparation)
/// in lockstep and records W(t) every `record_interval` steps.
std::vector<TwinSeries> twin_run_ladder(const InitialData& raw, const std::vector<double>& deltas,
                                        const SchemeConfig& cfg, const Model& model, long record_interval = 1);
TwinSeries twin_run(const InitialData& raw, double delta, const SchemeConfig& cfg, const Model& model,
                    long record_interval = 1);

} // namespace nsch
