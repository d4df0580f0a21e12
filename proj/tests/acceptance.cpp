// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include "nsch/diagnostics.hpp"
#include "nsch/errors.hpp"
#include "nsch/init.hpp"
#include "nsch/potential.hpp"
#include "nsch/spectral.hpp"
#include "nsch/timestepper.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

using namespace nsch;
using std::numbers::pi;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

void note(Outcome& o, bool ok, const char* fmt, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, fmt, a, b, c);
    if (!o.detail.empty())
        o.detail += "; ";
    o.detail += buf;
    o.pass = o.pass && ok;
}

GridPtr torus(int n) { return Grid::create(DomainMode::periodic_torus, 2 * pi, 2 * pi, n, n); }

const PotentialParams fh = PotentialParams::flory_huggins(1.0, 2.0);

double h2_norm(const ScalarField& f)
{
    return std::sqrt(weighted_energy(forward(f), [](double k2) { return (1 + k2) * (1 + k2); }));
}

double grad_norm(const ScalarField& f)
{
    const VectorField g = grad(f);
    return std::sqrt(inner(g.x, g.x) + inner(g.y, g.y));
}

// ---------------------------------------------------------------------------
// 1-2: potential
// ---------------------------------------------------------------------------
Outcome potential_suite()
{
    Outcome o;
    double jump = 0, min_second = 1e300, min_sign = 1e300, excess = -1e300, deficit = 1e300;
    for (double eps : {0.01, 0.05, 0.1})
        for (double chi : {0.0, 0.5, -0.5, 2.0, -2.0}) {
            const RegPotential rp(fh, eps, chi);
            const KnotJumps j = knot_jumps(rp);
            jump = std::max({jump, j.value, j.derivative});
            for (int i = 0; i < 10000; ++i) {
                const double r = -10.0 + 20.0 * i / 9999.0;
                min_second = std::min(min_second, rp.second0(r));
                min_sign = std::min(min_sign, r * rp.prime0(r));
            }
            for (int i = 0; i < 10000; ++i) {
                const double r = (-1 + 1e-6) + (2 - 2e-6) * i / 9999.0;
                excess = std::max(excess, rp.value0(r) - psi0(r, fh));
            }
            const double rs = find_r_star(rp, RStarSide::upper);
            for (int i = 0; i <= 2000; ++i)
                deficit = std::min(deficit, coercivity_deficit(rs + 10.0 * i / 2000.0, rp));
        }
    note(o, jump <= 1e-10, "max knot jump %.2e", jump);
    note(o, min_second >= fh.theta, "min Psi'' %.6g (theta %g)", min_second, fh.theta);
    note(o, min_sign >= 0.0, "min r Psi' %.2e", min_sign);
    note(o, excess <= 0.0, "max(Psi_eps - Psi) %.2e", excess);
    note(o, deficit >= 0.0, "min deficit on [r*, r*+10] %.3g", deficit);
    return o;
}

Outcome young_suite()
{
    Outcome o;
    double gap = 1e300;
    for (int i = 0; i < 100; ++i)
        for (int k = 0; k < 100; ++k)
            gap = std::min(gap, young_gap(50.0 * i / 99.0, 50.0 * k / 99.0));
    double eq = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double a = 5.0 * i / 49.0;
        eq = std::max(eq, std::abs(young_gap(a, std::expm1(a))) / std::max(1.0, a * std::expm1(a)));
    }
    note(o, gap >= -1e-12, "min gap %.2e", gap);
    note(o, eq <= 1e-10, "max relative gap on b = e^a - 1: %.2e", eq);
    return o;
}

// ---------------------------------------------------------------------------
// 3-5: initial data and spectral operators
// ---------------------------------------------------------------------------
Outcome smoothing_suite()
{
    Outcome o;
    const auto g = torus(128);
    const double gamma = 0.3;
    Rng rng(31);
    double mean_err = 0, mode_err = 0, sup_excess = -1e300, trio = -1e300;
    const auto mode = ScalarField::from_function(g, [](double x, double y) { return std::cos(3 * x) * std::cos(2 * y); });
    const ScalarField sm = elliptic_smooth_phi0(mode, gamma);
    const double factor = (1 - gamma) / (1 + gamma * 13);
    for (std::size_t i = 0; i < sm.values().size(); ++i)
        mode_err = std::max(mode_err, std::abs(sm.values()[i] - factor * mode.values()[i]));
    for (int trial = 0; trial < 100; ++trial) {
        Spectrum c = forward(random_phase(g, 0.0, 1.0, 16, rng));
        dealias(c);
        ScalarField p = inverse(c);
        p *= 1.0 / p.max_abs();
        const double m = 0.5 * (2 * uniform01(rng) - 1);
        p *= 1.0 - std::abs(m);
        p += ScalarField(g, m);
        const ScalarField q = elliptic_smooth_phi0(p, gamma);
        mean_err = std::max(mean_err, std::abs(q.mean() - (1 - gamma) * p.mean()));
        sup_excess = std::max(sup_excess, q.max_abs() - (1 - gamma));
        const double n0 = norm(p, NormKind::L2);
        trio = std::max({trio, norm(q, NormKind::L2) / n0 - 1, grad_norm(q) / grad_norm(p) - 1,
                         gamma * norm(laplacian(q), NormKind::L2) / (2 * n0) - 1});
    }
    note(o, mean_err <= 1e-14, "mean relation error %.2e", mean_err);
    note(o, mode_err <= 1e-12, "single-mode factor error %.2e", mode_err);
    note(o, sup_excess <= 1e-8, "max(|phi_gamma|) - (1-gamma) %.2e", sup_excess);
    note(o, trio <= 1e-14, "norm trio worst relative excess %.2e", trio);
    return o;
}

Outcome spectral_suite()
{
    Outcome o;
    const auto g = torus(128);
    Rng rng(41);
    double parseval = 0, roundtrip = 0, leray_idem = 0, leray_grad = 0, inv_lap = 0;
    for (int trial = 0; trial < 10; ++trial) {
        const ScalarField f = random_phase(g, 0.3, 1.0, 40, rng);
        const Spectrum s = forward(f);
        const double e = weighted_energy(s, [](double) { return 1.0; });
        parseval = std::max(parseval, std::abs(e - inner(f, f)) / inner(f, f));
        roundtrip = std::max(roundtrip, (inverse(s) - f).max_abs() / f.max_abs());

        const VectorField u(random_phase(g, 0.0, 1.0, 30, rng), random_phase(g, 0.0, 1.0, 30, rng));
        const VectorField p1 = leray_project(u);
        const VectorField p2 = leray_project(p1);
        leray_idem = std::max({leray_idem, (p2.x - p1.x).max_abs(), (p2.y - p1.y).max_abs()});
        Spectrum sg = forward(random_phase(g, 0.0, 1.0, 40, rng));
        dealias(sg);
        const VectorField gr = grad(inverse(sg));
        const VectorField pg = leray_project(gr);
        const double scale = std::max(gr.x.max_abs(), gr.y.max_abs());
        leray_grad = std::max(leray_grad, std::max(pg.x.max_abs(), pg.y.max_abs()) / scale);
    }
    for (int kx = 1; kx <= 5; ++kx)
        for (int ky = 0; ky <= 5; ++ky) {
            const auto ef = ScalarField::from_function(
                g, [&](double x, double y) { return std::cos(kx * x + 0.3) * std::sin(ky * y + 0.7); });
            const ScalarField u = inv_laplacian_zero_mean(ef);
            const double lambda = kx * kx + ky * ky;
            inv_lap = std::max(inv_lap, (lambda * u - ef).max_abs());
        }
    note(o, parseval <= 1e-11, "Parseval %.2e", parseval);
    note(o, roundtrip <= 1e-11, "round trip %.2e", roundtrip);
    note(o, leray_idem <= 1e-11, "Leray idempotence %.2e", leray_idem);
    note(o, leray_grad <= 1e-11, "Leray on gradients %.2e", leray_grad);
    note(o, inv_lap <= 1e-11, "inverse Laplacian eigenfunctions %.2e", inv_lap);
    return o;
}

Outcome plap_suite()
{
    Outcome o;
    const auto g = torus(128);
    Rng rng(51);
    double worst = 1e300;
    for (int trial = 0; trial < 100; ++trial) {
        const ScalarField phi = random_phase(g, 0.0, 1.0, 10, rng);
        const VectorField gp = grad(phi);
        ScalarField s2 = gp.x;
        auto sv = s2.values();
        const auto gx = gp.x.values(), gy = gp.y.values();
        for (std::size_t i = 0; i < sv.size(); ++i)
            sv[i] = gx[i] * gx[i] + gy[i] * gy[i];
        VectorField flux = gp;
        auto fx = flux.x.values(), fy = flux.y.values();
        for (std::size_t i = 0; i < sv.size(); ++i) {
            fx[i] *= sv[i];
            fy[i] *= sv[i];
        }
        const double lhs = inner(div(flux), laplacian(phi));
        const double n = h2_norm(phi);
        worst = std::min(worst, lhs / std::pow(n, 4));
    }
    note(o, worst >= -1e-10, "min <div(|grad phi|^2 grad phi), lap phi>/||phi||_H2^4 = %.3e", worst);
    return o;
}

// ---------------------------------------------------------------------------
// 6: energy law
// ---------------------------------------------------------------------------
Model coupled_model(bool sources)
{
    Model m;
    m.params.chi = 1.0;
    m.params.m_lo = 0.8;
    m.params.m_hi = 1.2;
    m.params.eta1 = 0.9;
    m.params.eta2 = 1.1;
    if (sources) {
        m.params.alpha = 0.5;
        m.params.h_const = 0.05;
        m.params.kappa = 0.1;
        m.params.b_star = 0.5;
    }
    m.potential = PhasePotential::regularized(RegPotential(fh, 0.05, 1.0));
    return m;
}

InitialData coupled_data(const GridPtr& g, double K, double& K_used)
{
    Rng rng(7);
    InitialData raw;
    raw.phi0 = random_phase(g, 0.1, 0.7, 3, rng);
    raw.sigma0 = gaussian_blob(g, 0.5, 1.0, 0.8);
    raw.v0 = taylor_green(g, 0.5);
    raw.gamma = 0.3;
    PrepareReport rep;
    InitialData d = prepare(raw, K, &rep);
    K_used = rep.K_used;
    return d;
}

Outcome energy_law()
{
    Outcome o;
    const int n = 128;
    const auto g = torus(n);
    double K = 0;
    const InitialData init = coupled_data(g, n / 3.0 - 1, K);

    Model m = coupled_model(true);
    m.K = K;
    std::vector<double> res;
    for (double dt : {1e-3, 5e-4, 2.5e-4}) {
        SchemeConfig c;
        c.dt = dt;
        c.t_end = 0.5;
        RunHooks h;
        h.diag_interval = 1000000;
        h.keep_records = false;
        res.push_back(run(init, c, m, h).max_abs_residual);
    }
    const double r1 = res[0] / res[1], r2 = res[1] / res[2];
    note(o, r1 >= 3 && r1 <= 6, "sources on: max|residual| ratio dt/(dt/2) = %.3f", r1);
    note(o, r2 >= 3 && r2 <= 6, "%.3f", r2);

    Model q = coupled_model(false);
    q.K = K;
    SchemeConfig c;
    c.dt = 2.5e-4;
    c.t_end = 0.5;
    double prev_E = std::numeric_limits<double>::quiet_NaN(), worst = -1e300;
    long steps = -1;
    RunHooks h;
    h.keep_records = false;
    h.on_record = [&](const DiagnosticsRecord& r) {
        if (std::isfinite(prev_E))
            worst = std::max(worst, (r.E_total - prev_E) - 10 * std::abs(r.residual_energy) * c.dt);
        prev_E = r.E_total;
        ++steps;
    };
    run(init, c, q, h);
    note(o, worst <= 0.0 && steps == 2000, "sources off: max[E(n+1)-E(n) - 10|res|dt] = %.2e over %g steps", worst,
         static_cast<double>(steps));
    return o;
}

// ---------------------------------------------------------------------------
// 7: mean of phi
// ---------------------------------------------------------------------------
Outcome mass_dynamics()
{
    Outcome o;
    const auto g = torus(64);
    Rng rng(3);
    InitialData raw;
    raw.phi0 = random_phase(g, 0.6, 0.3, 4, rng);
    raw.sigma0 = gaussian_blob(g, 0.5, 1.0, 0.8);
    raw.v0 = random_velocity(g, 0.3, 3, rng);
    const InitialData init = prepare(raw, g->dealias_radius());
    Model m = coupled_model(true);
    m.params.alpha = 0.5;
    m.params.h_const = 0.05;
    const double a = m.params.alpha, h = m.params.h_const, p0 = init.phi0.mean();
    SchemeConfig c;
    c.dt = 1e-3;
    c.t_end = 2.0;
    double err = 0, viol = 0;
    RunHooks hk;
    hk.keep_records = false;
    hk.on_record = [&](const DiagnosticsRecord& r) {
        const double exact = p0 * std::exp(-a * r.t) + h / a * -std::expm1(-a * r.t);
        err = std::max(err, std::abs(r.mean_phi - exact));
        viol = std::max(viol, r.mean_envelope_violation);
    };
    run(init, c, m, hk);
    note(o, std::abs(p0 - 0.6) <= 1e-14, "mean phi0 %.15g", p0);
    note(o, err <= 1e-8, "max |mean phi - exact| = %.2e", err);
    note(o, viol <= 1e-14, "max envelope violation %.2e", viol);
    return o;
}

// ---------------------------------------------------------------------------
// 8 + 11: sign benchmark and coercivity along it
// ---------------------------------------------------------------------------
struct Benchmark {
    double sigma_min_cross = 0, sigma_min_linear = 0;
    double margin_min = 0, c_star = 0, area = 0;
    Model model;
};

Benchmark sign_benchmark()
{
    const auto g = torus(128);
    InitialData raw;
    raw.phi0 = stripe(g, 0.0, 0.9, 0.1);
    raw.sigma0 = gaussian_blob(g, 0.0, 1.0, 0.5);
    raw.v0 = VectorField(g);
    raw.gamma = 0.2;
    PrepareReport rep;
    const InitialData init = prepare(raw, 128 / 3.0 - 1, &rep);
    Benchmark b;
    b.area = g->area();
    for (SigmaForm form : {SigmaForm::cross_diffusion, SigmaForm::linear_transport}) {
        Model m;
        m.params.chi = 2.0;
        m.params.kappa = 0.1;
        m.params.sigma_form = form;
        m.potential = PhasePotential::regularized(RegPotential(fh, 0.05, 2.0));
        m.K = rep.K_used;
        SchemeConfig c;
        c.dt = 1e-3;
        c.t_end = 0.5;
        double smin = 1e300, margin = 1e300;
        RunHooks h;
        h.keep_records = false;
        h.on_record = [&](const DiagnosticsRecord& r) {
            smin = std::min(smin, r.sigma_min);
            margin = std::min(margin, r.coercivity_margin);
        };
        run(init, c, m, h);
        if (form == SigmaForm::cross_diffusion) {
            b.sigma_min_cross = smin;
            b.margin_min = margin;
            b.model = m;
        } else {
            b.sigma_min_linear = smin;
        }
    }
    return b;
}

const Benchmark& benchmark()
{
    static const Benchmark b = sign_benchmark();
    return b;
}

Outcome sign_preservation()
{
    Outcome o;
    const Benchmark& b = benchmark();
    note(o, b.sigma_min_cross >= -1e-8, "cross_diffusion min sigma %.3e", b.sigma_min_cross);
    note(o, b.sigma_min_linear < -1e-3, "linear_transport min sigma %.3e", b.sigma_min_linear);
    return o;
}

Outcome coercivity()
{
    Outcome o;
    const Benchmark& b = benchmark();
    const RegPotential& rp = *b.model.potential.reg();
    const double c_star = coercivity_constant(rp, b.area);
    note(o, b.margin_min >= -c_star, "min margin %.4g >= -C* = %.4g", b.margin_min, -c_star);
    const PointwiseCoercivity pc = pointwise_coercivity(rp);
    note(o, pc.min_value >= -1e-10, "pointwise mixed bound min %.3e (r* = %.4g)", pc.min_value, pc.r_upper);
    return o;
}

// ---------------------------------------------------------------------------
// 9: sigma mass
// ---------------------------------------------------------------------------
double sigma_rate(const State& s, const ModelParams& p)
{
    const auto ph = s.phi.values(), sg = s.sigma.values();
    double acc = 0;
    for (std::size_t i = 0; i < sg.size(); ++i)
        acc += beta_cutoff(ph[i], p) * sg[i] - p.kappa * sg[i] * sg[i];
    return acc * s.phi.grid().area() / static_cast<double>(sg.size());
}

Outcome sigma_mass()
{
    Outcome o;
    const auto g = torus(64);
    double K = 0;
    const InitialData init = coupled_data(g, g->dealias_radius(), K);
    State s0;
    s0.phi = init.phi0;
    s0.sigma = init.sigma0;
    s0.v = init.v0;

    std::vector<double> defect;
    for (double dt : {2e-3, 1e-3}) {
        Model m = coupled_model(true);
        m.K = K;
        SchemeConfig c;
        c.dt = dt;
        c.t_end = 0.25;
        Stepper st(m, c, s0);
        double worst = 0, M = st.state().sigma.integral(), R = sigma_rate(st.state(), m.params);
        for (long n = 0; n < c.steps(); ++n) {
            st.step();
            const double M1 = st.state().sigma.integral(), R1 = sigma_rate(st.state(), m.params);
            worst = std::max(worst, std::abs((M1 - M) / dt - 0.5 * (R + R1)));
            M = M1;
            R = R1;
        }
        defect.push_back(worst);
    }
    const double ratio = defect[0] / defect[1];
    note(o, ratio >= 3.0, "mass-rate defect %.3e -> %.3e (ratio %.3f)", defect[0], defect[1], ratio);

    Model m = coupled_model(true);
    m.params.b_star = 0.0;
    m.K = K;
    SchemeConfig c;
    c.dt = 1e-3;
    c.t_end = 0.25;
    Stepper st(m, c, s0);
    double M = st.state().sigma.integral(), rise = -1e300;
    for (long n = 0; n < c.steps(); ++n) {
        st.step();
        const double M1 = st.state().sigma.integral();
        rise = std::max(rise, (M1 - M) / std::abs(M));
        M = M1;
    }
    note(o, rise <= 1e-14, "beta = 0: max relative step increase of mass %.2e", rise);
    return o;
}

// ---------------------------------------------------------------------------
// 10: continuous dependence
// ---------------------------------------------------------------------------
Outcome continuous_dependence()
{
    Outcome o;
    const auto g = torus(128);
    Rng rng(17);
    InitialData raw;
    raw.phi0 = random_phase(g, 0.1, 0.6, 3, rng);
    raw.sigma0 = gaussian_blob(g, 0.5, 1.0, 0.8);
    raw.v0 = random_velocity(g, 0.4, 3, rng);
    raw.gamma = 0.3;
    Model m = coupled_model(true);
    m.params.m_lo = m.params.m_hi = 1.0;
    SchemeConfig c;
    c.dt = 1e-3;
    c.t_end = 0.25;
    c.K = 128 / 3.0 - 1;
    const auto series = twin_run_ladder(raw, {1e-3, 1e-4, 1e-5}, c, m, 5);
    for (std::size_t i = 0; i + 1 < series.size(); ++i) {
        const double a = series[i].sup_W(), b = series[i + 1].sup_W();
        const double order = std::log(a / b) / std::log(series[i].delta / series[i + 1].delta);
        note(o, b < a && order >= 1.0, "sup W %.3e -> %.3e, order %.3f", a, b, order);
    }
    return o;
}

} // namespace

int main()
{
    struct Criterion {
        int id;
        const char* name;
        double budget;
        std::function<Outcome()> check;
    };
    const std::vector<Criterion> criteria{
        {1, "potential regularization suite", 1, potential_suite},
        {2, "generalized Young inequality", 1, young_suite},
        {3, "initial-data smoothing", 5, smoothing_suite},
        {4, "spectral operator suite", 5, spectral_suite},
        {5, "p-Laplace torus identity", 10, plap_suite},
        {6, "energy law", 300, energy_law},
        {7, "mass dynamics", 60, mass_dynamics},
        {8, "sigma sign preservation vs failure", 180, sign_preservation},
        {9, "sigma mass identity", 60, sigma_mass},
        {10, "continuous dependence", 300, continuous_dependence},
        {11, "coercivity", 60, coercivity},
    };
    bool all = true;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        char t[96];
        std::snprintf(t, sizeof t, "; %.2f s (budget %g s)", secs, c.budget);
        o.detail += t;
        if (secs > c.budget)
            o.pass = false;
        all = all && o.pass;
        std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
