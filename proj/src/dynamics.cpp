#include "nsch/dynamics.hpp"

#include "nsch/errors.hpp"
#include "nsch/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nsch {

std::string to_string(SigmaForm f)
{
    return f == SigmaForm::cross_diffusion ? "cross_diffusion" : "linear_transport";
}

SigmaForm sigma_form_from_string(const std::string& s)
{
    if (s == "cross_diffusion")
        return SigmaForm::cross_diffusion;
    if (s == "linear_transport")
        return SigmaForm::linear_transport;
    throw ParameterError("unknown sigma form '" + s + "' (expected cross_diffusion or linear_transport)");
}

void ModelParams::validate() const
{
    auto fail = [](const std::string& msg) { throw ParameterError(msg); };
    auto finite = [](double v) { return std::isfinite(v); };
    for (double v : {eta1, eta2, m_lo, m_hi, chi, kappa, alpha, h_const, b_star, eps_interface, gamma_plap})
        if (!finite(v))
            fail("model parameters must be finite");
    if (!(eta1 > 0.0) || !(eta2 > 0.0))
        fail("(H2): viscosities eta1, eta2 must be positive");
    if (!(m_lo > 0.0) || !(m_hi > 0.0))
        fail("(H3): mobility bounds m_lo, m_hi must be positive");
    if (m_lo > m_hi)
        fail("(H3): mobility bounds must satisfy m_lo <= m_hi");
    if (alpha < 0.0)
        fail("(H4): alpha must be nonnegative");
    if (alpha > 0.0 && !(std::abs(h_const) < alpha))
        fail("(H4): |h| must be < alpha (compatibility condition)");
    if (alpha == 0.0 && h_const != 0.0)
        fail("(H4): a nonzero h requires alpha > |h|");
    if (kappa < 0.0)
        fail("(H5): kappa must be nonnegative");
    if (b_star < 0.0)
        fail("(H5): b_star must be nonnegative");
    if (!(eps_interface > 0.0))
        fail("(H6): eps_interface must be positive");
    if (gamma_plap < 0.0)
        fail("gamma_plap must be nonnegative");
}

double ModelParams::plap_coefficient() const noexcept
{
    const double g2 = gamma_plap * gamma_plap;
    const double g4 = g2 * g2;
    return g4 * g4;
}

double viscosity(double r, const ModelParams& p)
{
    const double c = std::clamp(r, -1.0, 1.0);
    return p.eta1 * 0.5 * (1.0 + c) + p.eta2 * 0.5 * (1.0 - c);
}

double mobility(double r, const ModelParams& p)
{
    const double c = std::clamp(r, -1.0, 1.0);
    return p.m_hi * 0.5 * (1.0 + c) + p.m_lo * 0.5 * (1.0 - c);
}

double beta_cutoff(double r, const ModelParams& p)
{
    const double a = std::abs(r);
    if (a <= 1.0)
        return p.b_star;
    if (a >= 2.0)
        return 0.0;
    const double s = a - 1.0;
    return p.b_star * (1.0 - 3.0 * s * s + 2.0 * s * s * s);
}

double beta_cutoff_prime(double r, const ModelParams& p)
{
    const double a = std::abs(r);
    if (a <= 1.0 || a >= 2.0)
        return 0.0;
    const double s = a - 1.0;
    return (r > 0 ? 1.0 : -1.0) * p.b_star * (-6.0 * s + 6.0 * s * s);
}

void project(Spectrum& s, const Model& model)
{
    dealias(s);
    if (model.K > 0.0)
        truncate_radial(s, model.K);
}

namespace {

ScalarField potential_prime(const ScalarField& phi, const PhasePotential& pot)
{
    ScalarField out(phi.grid_ptr());
    const auto in = phi.values();
    auto o = out.values();
    for (std::size_t i = 0; i < in.size(); ++i) {
        try {
            o[i] = pot.prime(in[i]);
        } catch (const SingularityError&) {
            const int nx = phi.grid().nx();
            std::ostringstream os;
            os << "singular potential evaluated at phi = " << in[i] << " (grid point i = " << i % nx
               << ", j = " << i / nx << ")";
            throw SingularityError(os.str());
        }
    }
    return out;
}

ScalarField pointwise(const ScalarField& a, const ScalarField& b)
{
    ScalarField out(a.grid_ptr());
    const auto va = a.values(), vb = b.values();
    auto o = out.values();
    for (std::size_t i = 0; i < va.size(); ++i)
        o[i] = va[i] * vb[i];
    return out;
}

VectorField scaled(const ScalarField& c, const VectorField& u) { return VectorField(pointwise(c, u.x), pointwise(c, u.y)); }

void require_velocity_pair(const Spectrum* vx, const Spectrum* vy, const Grid& g)
{
    if ((vx == nullptr) != (vy == nullptr))
        throw ShapeError("velocity needs both components");
    if (vx && !g.periodic())
        throw UnsupportedModeError("the Neumann rectangle is fluid-free; velocity is only available on the torus");
}

} // namespace

RhsSpectra evaluate_rhs(const Spectrum& phi_hat, const Spectrum& sigma_hat, const Spectrum* vx_hat,
                        const Spectrum* vy_hat, const Model& model)
{
    const Grid& g = phi_hat.grid();
    const GridPtr& gp = phi_hat.grid_ptr();
    require_same_grid(g, sigma_hat.grid(), "evaluate_rhs");
    require_velocity_pair(vx_hat, vy_hat, g);
    const ModelParams& p = model.params;
    const double eps = p.eps_interface;
    const double g8 = p.plap_coefficient();

    const ScalarField phi = inverse(phi_hat);
    const ScalarField sigma = inverse(sigma_hat);
    const VectorField gphi = flux_gradient(phi_hat);

    RhsSpectra out;

    // --- chemical potential ------------------------------------------------
    out.mu = forward(potential_prime(phi, model.potential));
    out.mu *= 1.0 / eps;
    for (std::size_t idx = 0; idx < out.mu.size(); ++idx)
        out.mu[idx] += eps * g.k2(idx) * phi_hat[idx] - p.chi * sigma_hat[idx];
    if (g8 > 0.0) {
        ScalarField grad2(gp);
        for (std::size_t i = 0; i < grad2.values().size(); ++i)
            grad2.values()[i] = gphi.x.values()[i] * gphi.x.values()[i] + gphi.y.values()[i] * gphi.y.values()[i];
        const Spectrum d = flux_divergence(scaled(grad2, gphi));
        for (std::size_t idx = 0; idx < out.mu.size(); ++idx)
            out.mu[idx] -= g8 * d[idx];
    }
    project(out.mu, model);
    const ScalarField mu = inverse(out.mu);
    const VectorField gmu = flux_gradient(out.mu);

    ScalarField vx, vy;
    if (vx_hat) {
        vx = inverse(*vx_hat);
        vy = inverse(*vy_hat);
    }

    // --- phase field -------------------------------------------------------
    ScalarField mob(gp);
    for (std::size_t i = 0; i < mob.values().size(); ++i)
        mob.values()[i] = mobility(phi.values()[i], p);
    out.phi = flux_divergence(scaled(mob, gmu));
    if (vx_hat)
        out.phi -= flux_divergence(VectorField(pointwise(vx, phi), pointwise(vy, phi)));
    for (std::size_t idx = 0; idx < out.phi.size(); ++idx)
        out.phi[idx] -= p.alpha * phi_hat[idx];
    out.phi[0] += p.h_const;
    project(out.phi, model);

    // --- concentration -----------------------------------------------------
    ScalarField reaction(gp);
    for (std::size_t i = 0; i < reaction.values().size(); ++i) {
        const double s = sigma.values()[i];
        reaction.values()[i] = beta_cutoff(phi.values()[i], p) * s - p.kappa * s * s;
    }
    out.sigma = forward(reaction);
    for (std::size_t idx = 0; idx < out.sigma.size(); ++idx)
        out.sigma[idx] -= g.k2(idx) * sigma_hat[idx];
    if (p.chi != 0.0) {
        if (p.sigma_form == SigmaForm::cross_diffusion) {
            const Spectrum d = flux_divergence(scaled(sigma, gphi));
            for (std::size_t idx = 0; idx < out.sigma.size(); ++idx)
                out.sigma[idx] -= p.chi * d[idx];
        } else {
            for (std::size_t idx = 0; idx < out.sigma.size(); ++idx)
                out.sigma[idx] += p.chi * g.k2(idx) * phi_hat[idx];
        }
    }
    if (vx_hat)
        out.sigma -= flux_divergence(VectorField(pointwise(vx, sigma), pointwise(vy, sigma)));
    project(out.sigma, model);

    // --- velocity ----------------------------------------------------------
    if (vx_hat) {
        const VectorField gvx = flux_gradient(*vx_hat);
        const VectorField gvy = flux_gradient(*vy_hat);
        const std::size_t n = g.size();
        ScalarField fx(gp), fy(gp), txx(gp), txy(gp), tyy(gp);
        for (std::size_t i = 0; i < n; ++i) {
            const double a = gvx.x.values()[i], b = gvx.y.values()[i];
            const double c = gvy.x.values()[i], d = gvy.y.values()[i];
            const double u = vx.values()[i], w = vy.values()[i];
            const double eta = viscosity(phi.values()[i], p);
            const double cap = mu.values()[i] + p.chi * sigma.values()[i];
            fx.values()[i] = -(u * a + w * b) + cap * gphi.x.values()[i];
            fy.values()[i] = -(u * c + w * d) + cap * gphi.y.values()[i];
            txx.values()[i] = 2.0 * eta * a;
            txy.values()[i] = eta * (b + c);
            tyy.values()[i] = 2.0 * eta * d;
        }
        out.vx = forward(fx) + flux_divergence(VectorField(txx, txy));
        out.vy = forward(fy) + flux_divergence(VectorField(txy, tyy));
        project(out.vx, model);
        project(out.vy, model);
        leray_project(out.vx, out.vy);
        out.vx[0] = 0.0;
        out.vy[0] = 0.0;
    }
    return out;
}

namespace {

RhsSpectra evaluate_state(const State& s, const Model& model)
{
    const Spectrum phi = forward(s.phi), sigma = forward(s.sigma);
    if (s.has_velocity()) {
        const Spectrum vx = forward(s.v.x), vy = forward(s.v.y);
        return evaluate_rhs(phi, sigma, &vx, &vy, model);
    }
    return evaluate_rhs(phi, sigma, nullptr, nullptr, model);
}

} // namespace

ScalarField compute_mu(const ScalarField& phi, const ScalarField& sigma, const Model& model)
{
    return inverse(evaluate_rhs(forward(phi), forward(sigma), nullptr, nullptr, model).mu);
}

ScalarField rhs_phi(const State& s, const Model& model) { return inverse(evaluate_state(s, model).phi); }

ScalarField rhs_sigma(const State& s, const Model& model) { return inverse(evaluate_state(s, model).sigma); }

VectorField rhs_v(const State& s, const Model& model)
{
    if (!s.grid_ptr()->periodic())
        throw UnsupportedModeError("rhs_v: the Neumann rectangle is fluid-free");
    if (!s.has_velocity())
        throw PreconditionError("rhs_v: state carries no velocity");
    const RhsSpectra r = evaluate_state(s, model);
    return VectorField(inverse(r.vx), inverse(r.vy));
}

State with_mu(State s, const Model& model)
{
    s.mu = compute_mu(s.phi, s.sigma, model);
    return s;
}

} // namespace nsch
