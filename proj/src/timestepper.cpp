#include "nsch/timestepper.hpp"

#include "nsch/errors.hpp"
#include "nsch/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace nsch {

// ============================================================================
// SchemeConfig
// ============================================================================
void SchemeConfig::validate(const Grid& g) const
{
    auto fail = [](const std::string& m) { throw ParameterError(m); };
    if (!(dt > 0.0) || !std::isfinite(dt))
        fail("scheme.dt must be positive");
    if (!(t_end >= 0.0) || !std::isfinite(t_end))
        fail("scheme.t_end must be nonnegative");
    if (imex_order != 1 && imex_order != 2)
        fail("scheme.imex_order must be 1 or 2");
    if (K < 0.0)
        fail("scheme.K must be nonnegative (0 selects the dealiasing radius)");
    if (K > g.dealias_radius() * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "scheme.K = " << K << " exceeds the dealiasing radius " << g.dealias_radius();
        fail(os.str());
    }
    if (max_halvings < 0)
        fail("scheme.max_halvings must be nonnegative");
    if (residual_trigger < 0.0)
        fail("scheme.residual_trigger must be nonnegative");
    if (!(entropy_floor > 0.0))
        fail("scheme.entropy_floor must be positive");
}

long SchemeConfig::steps() const
{
    if (t_end <= 0.0)
        return 0;
    return std::max(1L, static_cast<long>(std::ceil(t_end / dt - 1e-9)));
}

double SchemeConfig::effective_dt() const
{
    const long n = steps();
    return n > 0 ? t_end / static_cast<double>(n) : dt;
}

double stabilization_shift(const SchemeConfig& cfg, const Model& model)
{
    if (!cfg.stabilize)
        return 0.0;
    if (cfg.stab_shift >= 0.0)
        return cfg.stab_shift;
    // SBDF2 keeps the explicitly treated curvature Ψ''/ε - S inside (-(εk²+S), (εk²+S)/3)
    const double theta0 = model.potential.theta0();
    const double curv = model.potential.curvature_bound();
    return std::max(0.5 * theta0, 0.75 * curv) / model.params.eps_interface;
}

// ============================================================================
// Stepper
// ============================================================================
namespace {

double resolve_K(const Model& model, const SchemeConfig& cfg, const Grid& g)
{
    if (model.K > 0.0)
        return model.K;
    if (cfg.K > 0.0)
        return cfg.K;
    return g.dealias_radius();
}

} // namespace

Stepper::Stepper(Model model, SchemeConfig cfg, const State& initial) : model_(std::move(model)), cfg_(cfg)
{
    if (initial.phi.empty() || initial.sigma.empty())
        throw PreconditionError("Stepper: initial state needs phi and sigma");
    const Grid& g = initial.phi.grid();
    cfg_.validate(g);
    model_.params.validate();
    model_.K = resolve_K(model_, cfg_, g);
    if (model_.K > g.dealias_radius() * (1.0 + 1e-12))
        throw ParameterError("Stepper: Galerkin cutoff exceeds the dealiasing radius");
    stab_ = stabilization_shift(cfg_, model_);
    fluid_ = initial.has_velocity();
    if (fluid_ && !g.periodic())
        throw UnsupportedModeError("Stepper: the Neumann rectangle is fluid-free");

    k2_.resize(g.spec_size());
    for (std::size_t i = 0; i < k2_.size(); ++i)
        k2_[i] = g.k2(i);

    u_.phi = forward(initial.phi);
    u_.sigma = forward(initial.sigma);
    project(u_.phi, model_);
    project(u_.sigma, model_);
    if (fluid_) {
        u_.vx = forward(initial.v.x);
        u_.vy = forward(initial.v.y);
        project(u_.vx, model_);
        project(u_.vy, model_);
        leray_project(u_.vx, u_.vy);
    }
    t_ = initial.t;
    check_finite(u_);
    f_ = eval(u_);
    n_ = explicit_part(u_, f_);
}

RhsSpectra Stepper::eval(const Unknowns& u) const
{
    if (fluid_)
        return evaluate_rhs(u.phi, u.sigma, &u.vx, &u.vy, model_);
    return evaluate_rhs(u.phi, u.sigma, nullptr, nullptr, model_);
}

Stepper::Explicit Stepper::explicit_part(const Unknowns& u, const RhsSpectra& f) const
{
    const ModelParams& p = model_.params;
    const double mbar = p.mean_mobility(), ebar = p.mean_viscosity(), eps = p.eps_interface;
    Explicit n{f.phi, f.sigma, f.vx, f.vy};
    for (std::size_t i = 0; i < k2_.size(); ++i) {
        const double k2 = k2_[i];
        n.phi[i] -= (-mbar * k2 * (eps * k2 + stab_) - p.alpha) * u.phi[i];
        n.sigma[i] -= -k2 * u.sigma[i];
        if (fluid_) {
            n.vx[i] -= -ebar * k2 * u.vx[i];
            n.vy[i] -= -ebar * k2 * u.vy[i];
        }
    }
    return n;
}

Stepper::Unknowns Stepper::sbdf1(const Unknowns& u, const Explicit& n, double dt) const
{
    const ModelParams& p = model_.params;
    const double mbar = p.mean_mobility(), ebar = p.mean_viscosity(), eps = p.eps_interface;
    Unknowns next = u;
    for (std::size_t i = 0; i < k2_.size(); ++i) {
        const double k2 = k2_[i];
        next.phi[i] = (u.phi[i] + dt * n.phi[i]) / (1.0 + dt * (mbar * k2 * (eps * k2 + stab_) + p.alpha));
        next.sigma[i] = (u.sigma[i] + dt * n.sigma[i]) / (1.0 + dt * k2);
        if (fluid_) {
            const double d = 1.0 + dt * ebar * k2;
            next.vx[i] = (u.vx[i] + dt * n.vx[i]) / d;
            next.vy[i] = (u.vy[i] + dt * n.vy[i]) / d;
        }
    }
    exact_mean(next, u, dt);
    return next;
}

Stepper::Unknowns Stepper::sbdf2(const Unknowns& u, const Unknowns& um1, const Explicit& n, const Explicit& nm1,
                                 double dt) const
{
    const ModelParams& p = model_.params;
    const double mbar = p.mean_mobility(), ebar = p.mean_viscosity(), eps = p.eps_interface;
    Unknowns next = u;
    for (std::size_t i = 0; i < k2_.size(); ++i) {
        const double k2 = k2_[i];
        next.phi[i] = (4.0 * u.phi[i] - um1.phi[i] + 2.0 * dt * (2.0 * n.phi[i] - nm1.phi[i]))
                      / (3.0 + 2.0 * dt * (mbar * k2 * (eps * k2 + stab_) + p.alpha));
        next.sigma[i] = (4.0 * u.sigma[i] - um1.sigma[i] + 2.0 * dt * (2.0 * n.sigma[i] - nm1.sigma[i]))
                        / (3.0 + 2.0 * dt * k2);
        if (fluid_) {
            const double d = 3.0 + 2.0 * dt * ebar * k2;
            next.vx[i] = (4.0 * u.vx[i] - um1.vx[i] + 2.0 * dt * (2.0 * n.vx[i] - nm1.vx[i])) / d;
            next.vy[i] = (4.0 * u.vy[i] - um1.vy[i] + 2.0 * dt * (2.0 * n.vy[i] - nm1.vy[i])) / d;
        }
    }
    exact_mean(next, u, dt);
    return next;
}

// The zero mode of every flux vanishes, so the mean obeys dφ̄/dt = -αφ̄ + ĥ,
// which is integrated in closed form.
void Stepper::exact_mean(Unknowns& next, const Unknowns& u, double dt) const
{
    const ModelParams& p = model_.params;
    const double m = u.phi[0].real();
    if (p.alpha > 0.0) {
        const double decay = std::exp(-p.alpha * dt);
        next.phi[0] = m * decay - (p.h_const / p.alpha) * std::expm1(-p.alpha * dt);
    } else {
        next.phi[0] = m + p.h_const * dt;
    }
}

void Stepper::check_finite(const Unknowns& u) const
{
    auto bad = [](const Spectrum& s) {
        for (const cplx& c : s.values())
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                return true;
        return false;
    };
    const char* which = nullptr;
    if (bad(u.phi))
        which = "phi";
    else if (bad(u.sigma))
        which = "sigma";
    else if (fluid_ && (bad(u.vx) || bad(u.vy)))
        which = "velocity";
    if (which) {
        std::ostringstream os;
        os << "non-finite " << which << " at step " << steps_ + 1 << " (t = " << t_ << ")";
        throw DivergenceError(os.str(), steps_ + 1);
    }
}

void Stepper::step() { step(cfg_.effective_dt()); }

void Stepper::step(double dt)
{
    if (!(dt > 0.0))
        throw ParameterError("Stepper::step: dt must be positive");
    if (have_history_ && std::abs(dt - last_dt_) > 1e-14 * dt)
        have_history_ = false;

    Unknowns next;
    if (cfg_.imex_order == 1) {
        next = sbdf1(u_, n_, dt);
    } else if (!have_history_) {
        // Richardson-extrapolated SBDF1 start keeps the local error at O(dt^3)
        const Unknowns half = sbdf1(u_, n_, 0.5 * dt);
        const Explicit n_half = explicit_part(half, eval(half));
        Unknowns two_halves = sbdf1(half, n_half, 0.5 * dt);
        const Unknowns full = sbdf1(u_, n_, dt);
        next = two_halves;
        auto combine = [](Spectrum& a, const Spectrum& b) {
            for (std::size_t i = 0; i < a.size(); ++i)
                a[i] = 2.0 * a[i] - b[i];
        };
        combine(next.phi, full.phi);
        combine(next.sigma, full.sigma);
        if (fluid_) {
            combine(next.vx, full.vx);
            combine(next.vy, full.vy);
        }
        exact_mean(next, u_, dt);
    } else {
        next = sbdf2(u_, um1_, n_, nm1_, dt);
    }
    check_finite(next);

    RhsSpectra f = eval(next);
    Explicit n = explicit_part(next, f);
    um1_ = std::move(u_);
    nm1_ = std::move(n_);
    u_ = std::move(next);
    f_ = std::move(f);
    n_ = std::move(n);
    have_history_ = cfg_.imex_order == 2;
    t_ += dt;
    last_dt_ = dt;
    ++steps_;
}

State Stepper::state() const
{
    State s;
    s.t = t_;
    s.phi = inverse(u_.phi);
    s.sigma = inverse(u_.sigma);
    s.mu = inverse(f_.mu);
    if (fluid_)
        s.v = VectorField(inverse(u_.vx), inverse(u_.vy));
    return s;
}

State step(const State& s, const SchemeConfig& cfg, const Model& model)
{
    Stepper st(model, cfg, s);
    st.step(cfg.dt);
    return st.state();
}

// ============================================================================
// run
// ============================================================================
namespace {

State initial_state(const InitialData& init)
{
    State s;
    s.t = 0.0;
    s.phi = init.phi0;
    s.sigma = init.sigma0;
    if (!init.v0.x.empty() && init.phi0.grid().periodic())
        s.v = init.v0;
    return s;
}

} // namespace

RunResult run(const InitialData& init, const SchemeConfig& cfg, const Model& model, const RunHooks& hooks)
{
    if (init.phi0.empty())
        throw PreconditionError("run: initial data not prepared");
    cfg.validate(init.phi0.grid());
    Stepper st(model, cfg, initial_state(init));
    const Model& m = st.model();
    const double floor = cfg.entropy_floor;
    const double phi0_mean = forward(init.phi0).mean();

    RunResult res;
    res.dt = cfg.effective_dt();
    res.stabilization = st.stabilization();
    const long n_steps = cfg.steps();
    const long diag_every = std::max(1L, hooks.diag_interval);

    auto emit = [&](const DiagnosticsRecord& r) {
        if (hooks.on_record)
            hooks.on_record(r);
        if (hooks.keep_records)
            res.records.push_back(r);
    };

    State current = st.state();
    DiagnosticsRecord prev = full_record(current, m, phi0_mean, floor);
    emit(prev);
    if (hooks.on_snapshot && hooks.snapshot_interval > 0)
        hooks.on_snapshot(current, 0);

    for (long n = 1; n <= n_steps; ++n) {
        const Stepper backup = cfg.residual_trigger > 0.0 ? st : Stepper(st);
        st.step(res.dt);
        current = st.state();
        DiagnosticsRecord rec = full_record(current, m, phi0_mean, floor);
        rec.residual_energy = energy_law_residual(prev, rec, res.dt);

        if (cfg.residual_trigger > 0.0 && !(std::abs(rec.residual_energy) <= cfg.residual_trigger)) {
            bool ok = false;
            for (int h = 1; h <= cfg.max_halvings && !ok; ++h) {
                st = backup;
                st.reset_history();
                const long sub = 1L << h;
                const double sdt = res.dt / static_cast<double>(sub);
                DiagnosticsRecord sp = prev;
                double worst = 0.0;
                for (long k = 0; k < sub; ++k) {
                    st.step(sdt);
                    DiagnosticsRecord sr = full_record(st.state(), m, phi0_mean, floor);
                    sr.residual_energy = energy_law_residual(sp, sr, sdt);
                    worst = std::max(worst, std::abs(sr.residual_energy));
                    sp = sr;
                }
                res.halvings_used = std::max(res.halvings_used, h);
                current = st.state();
                rec = sp;
                rec.residual_energy = worst;
                ok = worst <= cfg.residual_trigger;
            }
            if (!ok) {
                std::ostringstream os;
                os << "energy-law residual " << rec.residual_energy << " exceeds trigger " << cfg.residual_trigger
                   << " after " << cfg.max_halvings << " halvings at step " << n;
                throw StabilityError(os.str(), n);
            }
            st.reset_history();
        }

        res.max_abs_residual = std::max(res.max_abs_residual, std::abs(rec.residual_energy));
        if (n % diag_every == 0 || n == n_steps)
            emit(rec);
        if (hooks.on_snapshot && hooks.snapshot_interval > 0 && n % hooks.snapshot_interval == 0)
            hooks.on_snapshot(current, n);
        prev = rec;
    }
    res.steps = n_steps;
    res.final_state = std::move(current);
    return res;
}

// ============================================================================
// Twin runs
// ============================================================================
ScalarField twin_perturbation(const GridPtr& g)
{
    using std::numbers::pi;
    const double k = (g->periodic() ? 2.0 * pi : pi) / g->lx();
    return ScalarField::from_function(g, [k](double x, double) { return std::cos(k * x); });
}

double TwinSeries::sup_W() const
{
    double m = 0.0;
    for (double w : W)
        m = std::max(m, w);
    return m;
}

std::vector<TwinSeries> twin_run_ladder(const InitialData& raw, const std::vector<double>& deltas,
                                        const SchemeConfig& cfg, const Model& model, long record_interval)
{
    const GridPtr& g = raw.phi0.grid_ptr();
    if (!g->periodic())
        throw UnsupportedModeError("twin runs need the periodic torus");
    cfg.validate(*g);
    const double K_req = model.K > 0.0 ? model.K : (cfg.K > 0.0 ? cfg.K : g->dealias_radius());
    PrepareReport rep;
    const InitialData base = prepare(raw, K_req, &rep);
    Model m = model;
    m.K = rep.K_used;

    const ScalarField bump = twin_perturbation(g);
    const double kb = 2.0 * std::numbers::pi / g->lx();
    const double c = raw.gamma > 0.0 ? (1.0 - raw.gamma) / (1.0 + raw.gamma * kb * kb) : 1.0;
    const double bump_norm2 = inner(bump, bump);

    std::vector<Stepper> runs;
    runs.emplace_back(m, cfg, initial_state(base));
    std::vector<TwinSeries> out(deltas.size());
    for (std::size_t d = 0; d < deltas.size(); ++d) {
        InitialData pert = raw;
        pert.phi0 = raw.phi0 + deltas[d] * bump;
        runs.emplace_back(m, cfg, initial_state(prepare(pert, rep.K_used)));
        out[d].delta = deltas[d];
        out[d].W0_expected = deltas[d] * deltas[d] * c * c * bump_norm2 / (1.0 + kb * kb);
    }

    auto record = [&] {
        const State s0 = runs[0].state();
        for (std::size_t d = 0; d < deltas.size(); ++d) {
            out[d].t.push_back(s0.t);
            out[d].W.push_back(uniqueness_metric(s0, runs[d + 1].state()));
        }
    };
    record();
    const long n_steps = cfg.steps();
    const double dt = cfg.effective_dt();
    const long every = std::max(1L, record_interval);
    for (long n = 1; n <= n_steps; ++n) {
        for (auto& r : runs)
            r.step(dt);
        if (n % every == 0 || n == n_steps)
            record();
    }
    return out;
}

TwinSeries twin_run(const InitialData& raw, double delta, const SchemeConfig& cfg, const Model& model,
                    long record_interval)
{
    return twin_run_ladder(raw, {delta}, cfg, model, record_interval).front();
}

} // namespace nsch
