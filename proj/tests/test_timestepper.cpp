#include "nsch/errors.hpp"
#include "nsch/spectral.hpp"
#include "nsch/timestepper.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace nsch;
using std::numbers::pi;

namespace {

GridPtr torus(int n = 32) { return Grid::create(DomainMode::periodic_torus, 2 * pi, 2 * pi, n, n); }

State quiescent(const GridPtr& g)
{
    State s;
    s.phi = ScalarField(g, 0.0);
    s.sigma = ScalarField(g, 1.0);
    return s;
}

// Error of σ_t = Δσ for σ0 = 1 + a cos 2x against the exact e^{-4t} decay.
double diffusion_error(int order, double dt)
{
    const auto g = torus(16);
    State s = quiescent(g);
    s.sigma = ScalarField::from_function(g, [](double x, double) { return 1 + 0.5 * std::cos(2 * x); });
    SchemeConfig c;
    c.dt = dt;
    c.t_end = 0.5;
    c.imex_order = order;
    Stepper st(Model{}, c, s);
    for (long n = 0; n < c.steps(); ++n)
        st.step();
    const ScalarField out = st.state().sigma;
    double e = 0.0;
    for (int i = 0; i < g->nx(); ++i)
        e = std::max(e, std::abs(out(i, 0) - (1 + 0.5 * std::exp(-4 * 0.5) * std::cos(2 * g->x(i)))));
    return e;
}

InitialData coupled_data(const GridPtr& g)
{
    Rng rng(9);
    InitialData raw;
    raw.phi0 = random_phase(g, 0.1, 0.6, 2, rng);
    raw.sigma0 = gaussian_blob(g, 0.5, 1.0, 0.9);
    raw.v0 = random_velocity(g, 0.4, 2, rng);
    raw.gamma = 0.2;
    return prepare(raw, g->dealias_radius());
}

Model coupled_model()
{
    Model m;
    m.params.chi = 1.0;
    m.params.alpha = 0.5;
    m.params.h_const = 0.05;
    m.params.kappa = 0.1;
    m.params.b_star = 0.3;
    m.params.m_lo = 0.9;
    m.params.m_hi = 1.1;
    m.potential = PhasePotential::regularized(RegPotential(PotentialParams{}, 0.05, 1.0));
    return m;
}

} // namespace

TEST_CASE("scheme configuration")
{
    SchemeConfig c;
    c.dt = 0.3;
    c.t_end = 1.0;
    CHECK(c.steps() == 4);
    CHECK(c.effective_dt() == doctest::Approx(0.25));
    c.dt = 0.25;
    CHECK(c.steps() == 4);
    c.t_end = 0;
    CHECK(c.steps() == 0);

    const auto g = torus();
    SchemeConfig bad;
    bad.imex_order = 3;
    CHECK_THROWS_AS(bad.validate(*g), ParameterError);
    bad = {};
    bad.dt = -1;
    CHECK_THROWS_AS(bad.validate(*g), ParameterError);
    bad = {};
    bad.K = 100;
    CHECK_THROWS_AS(bad.validate(*g), ParameterError);

    Model m;
    SchemeConfig s;
    CHECK(stabilization_shift(s, m) == doctest::Approx(1.5)); // 0.75 max Ψ'' for the quartic
    s.stab_shift = 0.25;
    CHECK(stabilization_shift(s, m) == 0.25);
    s.stabilize = false;
    CHECK(stabilization_shift(s, m) == 0.0);
}

TEST_CASE("temporal order on linear diffusion")
{
    const double e1 = diffusion_error(1, 0.02), e1h = diffusion_error(1, 0.01);
    const double e2 = diffusion_error(2, 0.02), e2h = diffusion_error(2, 0.01);
    CHECK(e1 / e1h == doctest::Approx(2.0).epsilon(0.1));
    CHECK(e2 / e2h == doctest::Approx(4.0).epsilon(0.1));
    CHECK(e2 < e1);
}

TEST_CASE("Taylor-Green decay")
{
    const auto g = torus(16);
    State s = quiescent(g);
    s.v = taylor_green(g, 1.0);
    Model m;
    m.params.eta1 = m.params.eta2 = 0.5;
    auto err = [&](double dt) {
        SchemeConfig c;
        c.dt = dt;
        c.t_end = 0.4;
        Stepper st(m, c, s);
        for (long n = 0; n < c.steps(); ++n)
            st.step();
        const State out = st.state();
        return (out.v.x - std::exp(-2 * 0.5 * 0.4) * s.v.x).max_abs();
    };
    const double a = err(0.02), b = err(0.01);
    CHECK(a / b == doctest::Approx(4.0).epsilon(0.1));
    CHECK(b < 1e-5);
}

TEST_CASE("self-convergence of the coupled scheme")
{
    const auto g = torus(32);
    const InitialData d = coupled_data(g);
    const Model m = coupled_model();
    auto final_phi = [&](double dt) {
        SchemeConfig c;
        c.dt = dt;
        c.t_end = 0.1;
        return run(d, c, m, {nullptr, nullptr, 1000, 0, false}).final_state.phi;
    };
    const ScalarField a = final_phi(4e-3), b = final_phi(2e-3), c = final_phi(1e-3);
    const double r = (a - b).max_abs() / (b - c).max_abs();
    CAPTURE(r);
    CHECK(r > 3.3);
    CHECK(r < 4.8);
}

TEST_CASE("the mean is integrated exactly")
{
    const auto g = torus(32);
    const InitialData d = coupled_data(g);
    const Model m = coupled_model();
    SchemeConfig c;
    c.dt = 5e-3;
    c.t_end = 0.5;
    const RunResult r = run(d, c, m);
    const double p0 = forward(d.phi0).mean();
    double worst = 0.0;
    for (const auto& rec : r.records) {
        const double e = std::exp(-0.5 * rec.t);
        worst = std::max(worst, std::abs(rec.mean_phi - (p0 * e + 0.1 * (1 - e))));
        CHECK(rec.mean_envelope_violation <= 1e-14); // h > 0 rides the upper envelope
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("run bookkeeping")
{
    const auto g = torus(16);
    const InitialData d = coupled_data(g);
    const Model m = coupled_model();
    SchemeConfig c;
    c.dt = 0.01;
    c.t_end = 0.105; // 11 steps of 0.0095...
    long seen = 0, snaps = 0;
    RunHooks hooks;
    hooks.diag_interval = 4;
    hooks.snapshot_interval = 5;
    hooks.on_record = [&](const DiagnosticsRecord&) { ++seen; };
    hooks.on_snapshot = [&](const State&, long) { ++snaps; };
    const RunResult r = run(d, c, m, hooks);
    CHECK(r.steps == 11);
    CHECK(r.dt == doctest::Approx(0.105 / 11));
    CHECK(seen == 4); // steps 0, 4, 8 and the final 11
    CHECK(r.records.size() == 4);
    CHECK(snaps == 3); // steps 0, 5, 10
    CHECK(r.records.back().t == doctest::Approx(0.105).epsilon(1e-14));
    CHECK(r.final_state.t == doctest::Approx(0.105).epsilon(1e-14));
    CHECK(r.records.front().residual_energy == 0.0);
    CHECK(r.max_abs_residual > 0.0);

    SchemeConfig z = c;
    z.t_end = 0;
    CHECK(run(d, z, m).records.size() == 1);

    // single free step agrees with the stepper
    State s0;
    s0.phi = d.phi0;
    s0.sigma = d.sigma0;
    s0.v = d.v0;
    Model mk = m;
    mk.K = g->dealias_radius();
    Stepper st(mk, c, s0);
    st.step(c.dt);
    CHECK((step(s0, c, mk).phi - st.state().phi).max_abs() == 0.0);
}

TEST_CASE("failures")
{
    const auto g = torus(16);
    State s = quiescent(g);
    s.sigma.values()[3] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(Stepper(Model{}, SchemeConfig{}, s), DivergenceError);

    const InitialData d = coupled_data(g);
    SchemeConfig c;
    c.dt = 0.01;
    c.t_end = 0.05;
    c.residual_trigger = 1e-300;
    c.max_halvings = 1;
    try {
        run(d, c, coupled_model());
        FAIL("expected StabilityError");
    } catch (const StabilityError& e) {
        CHECK(e.step() == 1);
    }

    // a trigger below the plain maximum forces successful halvings
    c.residual_trigger = 0;
    const double plain = run(d, c, coupled_model()).max_abs_residual;
    c.residual_trigger = 0.6 * plain;
    c.max_halvings = 4;
    const RunResult h = run(d, c, coupled_model());
    CHECK(h.halvings_used >= 1);
    CHECK(h.max_abs_residual <= c.residual_trigger);
    CHECK(h.final_state.t == doctest::Approx(c.t_end).epsilon(1e-14));
}

TEST_CASE("twin runs")
{
    const auto g = torus(32);
    Rng rng(2);
    InitialData raw;
    raw.phi0 = random_phase(g, 0.0, 0.5, 3, rng);
    raw.sigma0 = ScalarField(g, 1.0);
    raw.gamma = 0.25;
    Model m;
    m.params.alpha = 0.5;
    m.params.h_const = 0.1;
    SchemeConfig c;
    c.dt = 0.01;
    c.t_end = 0.1;
    const auto ladder = twin_run_ladder(raw, {1e-2, 1e-3}, c, m, 5);
    REQUIRE(ladder.size() == 2);
    for (const auto& s : ladder) {
        CHECK(s.t.size() == 3);
        CHECK(s.W.front() == doctest::Approx(s.W0_expected).epsilon(1e-9));
    }
    // W is quadratic in δ for the (mean-free) perturbation
    CHECK(ladder[0].sup_W() / ladder[1].sup_W() == doctest::Approx(100).epsilon(0.02));
    const double c0 = (1 - 0.25) / (1 + 0.25);
    CHECK(ladder[1].W0_expected == doctest::Approx(1e-6 * c0 * c0 * 2 * pi * pi / 2).epsilon(1e-14));
    const TwinSeries one = twin_run(raw, 1e-3, c, m, 5);
    CHECK(one.W == ladder[1].W);
}

TEST_CASE("rectangle runs are fluid-free and conserve concentration mass")
{
    const auto g = Grid::create(DomainMode::neumann_rectangle, 2.0, 1.0, 32, 16);
    InitialData raw;
    raw.phi0 = cosine_mode(g, 0.0, 0.5, 1);
    raw.sigma0 = ScalarField::from_function(g, [](double x, double y) { return 1 + 0.3 * std::cos(pi * x) * std::cos(pi * y); });
    const InitialData d = prepare(raw, g->dealias_radius());
    CHECK(d.v0.x.empty());
    Model m;
    m.params.chi = 0.5;
    m.params.eps_interface = 0.3;
    SchemeConfig c;
    c.dt = 1e-3;
    c.t_end = 0.05;
    const RunResult r = run(d, c, m);
    for (const auto& rec : r.records)
        CHECK(rec.sigma_mass == doctest::Approx(r.records.front().sigma_mass).epsilon(1e-12));
    CHECK(!r.final_state.has_velocity());
}

TEST_CASE("constant equilibria are fixed points")
{
    const auto g = torus(16);
    State s;
    s.phi = ScalarField(g, 0.3);
    s.sigma = ScalarField(g, 1.2);
    s.v = VectorField(g);
    Model m = coupled_model();
    m.params.alpha = m.params.h_const = m.params.kappa = m.params.b_star = 0.0;
    SchemeConfig c;
    c.dt = 0.01;
    Stepper st(m, c, s);
    for (int n = 0; n < 5; ++n) {
        st.step();
        const State o = st.state();
        CHECK((o.phi - s.phi).max_abs() <= 1e-13);
        CHECK((o.sigma - s.sigma).max_abs() <= 1e-13);
        CHECK(norm(o.v, NormKind::Linf) <= 1e-13);
    }
}
