#include "nsch/diagnostics.hpp"

#include "nsch/errors.hpp"
#include "nsch/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace nsch {

const std::array<std::string_view, DiagnosticsRecord::kColumns>& DiagnosticsRecord::column_names()
{
    static const std::array<std::string_view, kColumns> names = {
        "t",          "E_total",   "E_kinetic",  "E_gradient",      "E_plap",         "E_potential",
        "E_entropy",  "E_cross",   "D_visc",     "D_mu",            "D_fisher",       "D_logistic",
        "R_source",   "residual_energy", "mean_phi", "rho_star_margin", "sigma_min",  "sigma_mass",
        "sigma_L2",   "W_metric",  "floor_fraction", "mean_envelope_violation", "coercivity_margin"};
    return names;
}

std::array<double, DiagnosticsRecord::kColumns> DiagnosticsRecord::columns() const
{
    return {t,          E_total,   E_kinetic,  E_gradient,      E_plap,         E_potential,
            E_entropy,  E_cross,   D_visc,     D_mu,            D_fisher,       D_logistic,
            R_source,   residual_energy, mean_phi, rho_star_margin, sigma_min,  sigma_mass,
            sigma_L2,   W_metric,  floor_fraction, mean_envelope_violation, coercivity_margin};
}

namespace {

double quad(const Grid& g, double sum) { return sum * g.area() / static_cast<double>(g.size()); }

double log_floor(double s, double floor) { return std::log(std::max(s, floor)); }

bool finite_state(const State& s)
{
    bool ok = s.phi.all_finite() && s.sigma.all_finite();
    if (s.has_velocity())
        ok = ok && s.v.x.all_finite() && s.v.y.all_finite();
    if (!s.mu.empty())
        ok = ok && s.mu.all_finite();
    return ok;
}

} // namespace

DiagnosticsRecord energy(const State& s, const Model& model, double floor)
{
    DiagnosticsRecord r;
    r.t = s.t;
    if (!finite_state(s)) {
        r.nonfinite = true;
        const double nan = std::numeric_limits<double>::quiet_NaN();
        r.E_total = r.E_kinetic = r.E_gradient = r.E_plap = r.E_potential = r.E_entropy = r.E_cross = nan;
        return r;
    }
    const Grid& g = s.phi.grid();
    const ModelParams& p = model.params;
    const double eps = p.eps_interface;
    const VectorField gphi = flux_gradient(forward(s.phi));

    double kin = 0.0, grad2 = 0.0, grad4 = 0.0, pot = 0.0, ent = 0.0, cross = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (s.has_velocity()) {
            const double u = s.v.x.values()[i], w = s.v.y.values()[i];
            kin += u * u + w * w;
        }
        const double gx = gphi.x.values()[i], gy = gphi.y.values()[i];
        const double q = gx * gx + gy * gy;
        grad2 += q;
        grad4 += q * q;
        const double phi = s.phi.values()[i], sig = s.sigma.values()[i];
        pot += model.potential.value(phi);
        ent += sig * (log_floor(sig, floor) - 1.0);
        cross += sig * phi;
    }
    r.E_kinetic = 0.5 * quad(g, kin);
    r.E_gradient = 0.5 * eps * quad(g, grad2);
    r.E_plap = 0.25 * p.plap_coefficient() * quad(g, grad4);
    r.E_potential = quad(g, pot) / eps;
    r.E_entropy = quad(g, ent);
    r.E_cross = -p.chi * quad(g, cross);
    r.E_total = r.E_kinetic + r.E_gradient + r.E_plap + r.E_potential + r.E_entropy + r.E_cross;
    return r;
}

DiagnosticsRecord dissipation_and_remainder(const State& s, const Model& model, double floor)
{
    DiagnosticsRecord r;
    r.t = s.t;
    if (!finite_state(s)) {
        r.nonfinite = true;
        const double nan = std::numeric_limits<double>::quiet_NaN();
        r.D_visc = r.D_mu = r.D_fisher = r.D_logistic = r.R_source = nan;
        return r;
    }
    const Grid& g = s.phi.grid();
    const ModelParams& p = model.params;
    const ScalarField mu = s.mu.empty() ? compute_mu(s.phi, s.sigma, model) : s.mu;
    const VectorField gphi = flux_gradient(forward(s.phi));
    const VectorField gmu = flux_gradient(forward(mu));
    const VectorField gsig = flux_gradient(forward(s.sigma));

    VectorField gvx, gvy;
    if (s.has_velocity()) {
        gvx = flux_gradient(forward(s.v.x));
        gvy = flux_gradient(forward(s.v.y));
    }

    double dv = 0.0, dm = 0.0, df = 0.0, dl = 0.0, rs = 0.0;
    std::size_t floored = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double phi = s.phi.values()[i], sig = s.sigma.values()[i];
        if (s.has_velocity()) {
            const double a = gvx.x.values()[i], b = gvx.y.values()[i];
            const double c = gvy.x.values()[i], d = gvy.y.values()[i];
            const double off = 0.5 * (b + c);
            dv += 2.0 * viscosity(phi, p) * (a * a + d * d + 2.0 * off * off);
        }
        const double mx = gmu.x.values()[i], my = gmu.y.values()[i];
        dm += mobility(phi, p) * (mx * mx + my * my);

        const double px = gphi.x.values()[i], py = gphi.y.values()[i];
        if (sig > floor) {
            const double fx = gsig.x.values()[i] - p.chi * sig * px;
            const double fy = gsig.y.values()[i] - p.chi * sig * py;
            df += (fx * fx + fy * fy) / sig;
        } else {
            ++floored;
            df += std::max(sig, 0.0) * p.chi * p.chi * (px * px + py * py);
        }
        const double ls = log_floor(sig, floor);
        const double beta = beta_cutoff(phi, p);
        dl += p.kappa * sig * sig * ls;
        rs += (-p.alpha * phi + p.h_const) * mu.values()[i] + beta * sig * ls
              - p.chi * (beta * sig - p.kappa * sig * sig) * phi;
    }
    r.D_visc = quad(g, dv);
    r.D_mu = quad(g, dm);
    r.D_fisher = quad(g, df);
    r.D_logistic = quad(g, dl);
    r.R_source = quad(g, rs);
    r.floor_fraction = static_cast<double>(floored) / static_cast<double>(g.size());
    return r;
}

double energy_law_residual(const DiagnosticsRecord& before, const DiagnosticsRecord& after, double dt)
{
    if (!(dt > 0.0))
        throw ParameterError("energy_law_residual: dt must be positive");
    return (after.E_total - before.E_total) / dt + 0.5 * (before.balance() + after.balance());
}

double energy_law_residual(const State& before, const State& after, double dt, const Model& model, double floor)
{
    auto rec = [&](const State& s) {
        DiagnosticsRecord e = energy(s, model, floor);
        const DiagnosticsRecord d = dissipation_and_remainder(s, model, floor);
        e.D_visc = d.D_visc;
        e.D_mu = d.D_mu;
        e.D_fisher = d.D_fisher;
        e.D_logistic = d.D_logistic;
        e.R_source = d.R_source;
        return e;
    };
    return energy_law_residual(rec(before), rec(after), dt);
}

MassReport mass_bounds(double t, double mean_phi, const ModelParams& p, double phi0_mean)
{
    MassReport m;
    m.mean_phi = mean_phi;
    const double hs = std::abs(p.h_const);
    if (p.alpha > 0.0) {
        const double e = std::exp(-p.alpha * t);
        const double spread = -std::expm1(-p.alpha * t) * hs / p.alpha;
        m.envelope_lower = phi0_mean * e - spread;
        m.envelope_upper = phi0_mean * e + spread;
        const double ha = hs / p.alpha;
        if (phi0_mean >= ha) {
            m.case_lower = -ha;
            m.case_upper = phi0_mean;
        } else if (phi0_mean > -ha) {
            m.case_lower = -ha;
            m.case_upper = ha;
        } else {
            m.case_lower = phi0_mean;
            m.case_upper = ha;
        }
        m.rho_star_margin = std::max(std::abs(phi0_mean), ha);
    } else {
        m.envelope_lower = m.envelope_upper = m.case_lower = m.case_upper = phi0_mean;
        m.rho_star_margin = std::abs(phi0_mean);
    }
    m.violation = std::max({0.0, m.envelope_lower - mean_phi, mean_phi - m.envelope_upper});
    return m;
}

MassReport mass_monitor(const State& s, const ModelParams& p, double phi0_mean)
{
    return mass_bounds(s.t, s.phi.mean(), p, phi0_mean);
}

SigmaReport sigma_monitor(const State& s, double floor)
{
    SigmaReport r;
    const Grid& g = s.sigma.grid();
    r.min = s.sigma.min();
    r.mass = s.sigma.integral();
    r.l2 = norm(s.sigma, NormKind::L2);
    double ent = 0.0;
    for (double v : s.sigma.values())
        ent += v * (log_floor(v, floor) - 1.0);
    r.entropy = quad(g, ent);
    return r;
}

double coercivity_margin(const State& s, const RegPotential& rp, double floor)
{
    const Grid& g = s.phi.grid();
    double acc = 0.0;
    const double chi = std::abs(rp.chi());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double phi = s.phi.values()[i], sig = s.sigma.values()[i];
        acc += 0.5 * (rp.value(phi) + sig * (log_floor(sig, floor) - 1.0)) - chi * std::abs(sig * phi);
    }
    return quad(g, acc);
}

double coercivity_constant(const RegPotential& rp, double area)
{
    const double ru = find_r_star(rp, RStarSide::upper);
    const double rl = find_r_star(rp, RStarSide::lower);
    const double R = std::max(-rl, ru);
    const double c = 1.0 + std::abs(rp.chi());
    double psi_min = 0.0;
    const int n = 4000;
    for (int i = 0; i <= n; ++i)
        psi_min = std::min(psi_min, rp.value(rl + (ru - rl) * i / n));
    return area * (c * R + 0.5 * std::exp(2.0 * c * R) - 0.5 * psi_min);
}

PointwiseCoercivity pointwise_coercivity(const RegPotential& rp, double span, double sigma_max, int samples)
{
    PointwiseCoercivity out;
    out.r_upper = find_r_star(rp, RStarSide::upper);
    out.r_lower = find_r_star(rp, RStarSide::lower);
    double worst = std::numeric_limits<double>::infinity();
    const int n = std::max(samples, 2) - 1;
    for (int i = 0; i <= n; ++i)
        for (int k = 0; k <= n; ++k) {
            const double d = span * i / n;
            const double sig = sigma_max * k / n;
            worst = std::min(worst, mixed_lower_bound(out.r_upper + d, sig, rp));
            worst = std::min(worst, mixed_lower_bound(out.r_lower - d, sig, rp));
        }
    out.min_value = worst;
    return out;
}

double uniqueness_metric(const State& s1, const State& s2)
{
    require_same_grid(s1.phi.grid(), s2.phi.grid(), "uniqueness_metric");
    if (!s1.phi.grid().periodic())
        throw UnsupportedModeError("uniqueness_metric is defined on the periodic torus");
    const ScalarField dphi = s1.phi - s2.phi;
    const ScalarField dsig = s1.sigma - s2.sigma;
    const double a = norm(dphi, NormKind::dual_H1);
    const double b = norm(dsig, NormKind::dual_H1);
    double w = a * a + b * b + std::abs(dphi.mean());
    if (s1.has_velocity() != s2.has_velocity())
        throw ShapeError("uniqueness_metric: only one state carries a velocity");
    if (s1.has_velocity()) {
        // each velocity must be solenoidal; projecting the difference strips
        // the roundoff divergence that dominates a near-zero difference
        norm(s1.v, NormKind::dual_stokes);
        norm(s2.v, NormKind::dual_stokes);
        const VectorField dv = leray_project(VectorField(s1.v.x - s2.v.x, s1.v.y - s2.v.y));
        const double c = norm(dv, NormKind::dual_stokes);
        w += c * c;
    }
    return w;
}

DiagnosticsRecord full_record(const State& s, const Model& model, double phi0_mean, double floor)
{
    DiagnosticsRecord r = energy(s, model, floor);
    const DiagnosticsRecord d = dissipation_and_remainder(s, model, floor);
    r.D_visc = d.D_visc;
    r.D_mu = d.D_mu;
    r.D_fisher = d.D_fisher;
    r.D_logistic = d.D_logistic;
    r.R_source = d.R_source;
    r.floor_fraction = d.floor_fraction;
    r.nonfinite = r.nonfinite || d.nonfinite;

    const MassReport m = mass_monitor(s, model.params, phi0_mean);
    r.mean_phi = m.mean_phi;
    r.rho_star_margin = m.rho_star_margin;
    r.mean_envelope_violation = m.violation;

    const SigmaReport sr = sigma_monitor(s, floor);
    r.sigma_min = sr.min;
    r.sigma_mass = sr.mass;
    r.sigma_L2 = sr.l2;
    if (const RegPotential* rp = model.potential.reg())
        r.coercivity_margin = coercivity_margin(s, *rp, floor);
    return r;
}

} // namespace nsch
