#include "nsch/init.hpp"

#include "nsch/errors.hpp"
#include "nsch/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace nsch {

namespace {

constexpr double kNegTol = 1e-12;

double entropy_integral(const ScalarField& s)
{
    double acc = 0.0;
    for (double v : s.values())
        acc += v > kNegTol ? v * std::log(v) : 0.0;
    return acc * s.grid().area() / static_cast<double>(s.values().size());
}

// Smallest nonzero wavenumber along either axis.
double fundamental(const Grid& g)
{
    using std::numbers::pi;
    const double f = g.periodic() ? 2.0 * pi : pi;
    return std::min(f / g.lx(), f / g.ly());
}

} // namespace

ScalarField elliptic_smooth_phi0(const ScalarField& phi0, double gamma)
{
    if (!(gamma > 0.0 && gamma <= 0.5)) {
        std::ostringstream os;
        os << "elliptic_smooth_phi0: gamma must lie in (0, 1/2], got " << gamma;
        throw ParameterError(os.str());
    }
    Spectrum s = forward(phi0);
    const Grid& g = phi0.grid();
    for (std::size_t idx = 0; idx < s.size(); ++idx)
        s[idx] *= (1.0 - gamma) / (1.0 + gamma * g.k2(idx));
    return inverse(s);
}

ScalarField mollify_sigma0(const ScalarField& sigma0, int n, MollifyReport* report)
{
    if (n < 1)
        throw ParameterError("mollify_sigma0: n must be a positive integer");
    const double m = sigma0.min();
    if (m < -kNegTol) {
        std::ostringstream os;
        os << "mollify_sigma0: sigma0 must be nonnegative, minimum is " << m;
        throw DataError(os.str());
    }
    Spectrum s = forward(sigma0);
    const Grid& g = sigma0.grid();
    for (std::size_t idx = 0; idx < s.size(); ++idx)
        s[idx] *= std::exp(-g.k2(idx) / n);
    ScalarField out = inverse(s);

    MollifyReport rep;
    rep.min_before_projection = out.min();
    for (double& v : out.values())
        if (v < 0.0) {
            v = 0.0;
            ++rep.projected;
        }
    rep.entropy_before = entropy_integral(sigma0);
    rep.entropy_after = entropy_integral(out);
    rep.entropy_bound_ok = rep.entropy_after <= rep.entropy_before + 1.0;
    if (report)
        *report = rep;
    return out;
}

ScalarField galerkin_truncate(const ScalarField& f, double K)
{
    Spectrum s = forward(f);
    truncate_radial(s, K);
    return inverse(s);
}

VectorField galerkin_truncate(const VectorField& u, double K)
{
    return VectorField(galerkin_truncate(u.x, K), galerkin_truncate(u.y, K));
}

// ============================================================================
// Generators
// ============================================================================
double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

ScalarField random_phase(const GridPtr& g, double mean, double amp, double k_cut, Rng& rng)
{
    ScalarField noise(g);
    for (double& v : noise.values())
        v = 2.0 * uniform01(rng) - 1.0;
    Spectrum s = forward(noise);
    truncate_radial(s, k_cut);
    s[0] = 0.0;
    ScalarField f = inverse(s);
    const double peak = f.max_abs();
    const double scale = peak > 0.0 ? amp / peak : 0.0;
    for (double& v : f.values())
        v = mean + scale * v;
    return f;
}

ScalarField stripe(const GridPtr& g, double mean, double amp, double width)
{
    if (!(width > 0.0))
        throw ParameterError("stripe: width must be positive");
    const double ly = g->ly();
    return ScalarField::from_function(g, [&](double, double y) {
        return mean + amp * std::tanh((0.25 * ly - std::abs(y - 0.5 * ly)) / (std::sqrt(2.0) * width));
    });
}

ScalarField droplet(const GridPtr& g, double mean, double amp, double width, double radius)
{
    if (!(width > 0.0) || !(radius > 0.0))
        throw ParameterError("droplet: width and radius must be positive");
    const double cx = 0.5 * g->lx(), cy = 0.5 * g->ly();
    return ScalarField::from_function(g, [&](double x, double y) {
        const double r = std::hypot(x - cx, y - cy);
        return mean + amp * std::tanh((radius - r) / (std::sqrt(2.0) * width));
    });
}

ScalarField cosine_mode(const GridPtr& g, double mean, double amp, int m)
{
    using std::numbers::pi;
    const double k = (g->periodic() ? 2.0 * pi : pi) * m / g->lx();
    return ScalarField::from_function(g, [&](double x, double) { return mean + amp * std::cos(k * x); });
}

ScalarField gaussian_blob(const GridPtr& g, double base, double amp, double width)
{
    if (!(width > 0.0))
        throw ParameterError("gaussian_blob: width must be positive");
    const double cx = 0.5 * g->lx(), cy = 0.5 * g->ly();
    const bool per = g->periodic();
    const double lx = g->lx(), ly = g->ly();
    auto dist = [per](double d, double L) {
        d = std::abs(d);
        return per ? std::min(d, L - d) : d;
    };
    return ScalarField::from_function(g, [&](double x, double y) {
        const double dx = dist(x - cx, lx), dy = dist(y - cy, ly);
        return base + amp * std::exp(-(dx * dx + dy * dy) / (2.0 * width * width));
    });
}

VectorField taylor_green(const GridPtr& g, double U)
{
    if (!g->periodic())
        throw UnsupportedModeError("taylor_green: velocity fields need the periodic torus");
    using std::numbers::pi;
    const double kx = 2.0 * pi / g->lx(), ky = 2.0 * pi / g->ly();
    return VectorField(
        ScalarField::from_function(g, [&](double x, double y) { return U * std::sin(kx * x) * std::cos(ky * y); }),
        ScalarField::from_function(
            g, [&](double x, double y) { return -U * (kx / ky) * std::cos(kx * x) * std::sin(ky * y); }));
}

VectorField random_velocity(const GridPtr& g, double amp, double k_cut, Rng& rng)
{
    if (!g->periodic())
        throw UnsupportedModeError("random_velocity: velocity fields need the periodic torus");
    const ScalarField psi = random_phase(g, 0.0, 1.0, k_cut, rng);
    const VectorField gp = grad(psi);
    VectorField v(gp.y, -1.0 * gp.x);
    const double peak = norm(v, NormKind::Linf);
    const double scale = peak > 0.0 ? amp / peak : 0.0;
    v.x *= scale;
    v.y *= scale;
    return v;
}

// ============================================================================
// Preparation
// ============================================================================
InitialData prepare(const InitialData& raw, double K, PrepareReport* report)
{
    if (raw.phi0.empty() || raw.sigma0.empty())
        throw DataError("prepare: phi0 and sigma0 are required");
    require_same_grid(raw.phi0.grid(), raw.sigma0.grid(), "prepare");
    const GridPtr& g = raw.phi0.grid_ptr();
    if (!(K > 0.0) || K > g->dealias_radius() * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "prepare: Galerkin cutoff K = " << K << " must lie in (0, " << g->dealias_radius() << "]";
        throw ParameterError(os.str());
    }
    if (raw.phi0.max_abs() > 1.0 + 1e-12)
        throw DataError("prepare: initial phase field must satisfy |phi0| <= 1");
    if (std::abs(raw.phi0.mean()) >= 1.0)
        throw DataError("prepare: initial phase field must have |mean| < 1");
    if (raw.gamma != 0.0 && !(raw.gamma > 0.0 && raw.gamma <= 0.5))
        throw ParameterError("prepare: gamma must be 0 (off) or lie in (0, 1/2]");
    if (raw.n_mollify < 0)
        throw ParameterError("prepare: n_mollify must be >= 0");
    if (raw.sigma0.min() < -kNegTol)
        throw DataError("prepare: initial concentration must be nonnegative");

    PrepareReport rep;
    rep.K_requested = K;
    InitialData out;
    out.gamma = raw.gamma;
    out.n_mollify = raw.n_mollify;

    ScalarField phi = raw.gamma > 0.0 ? elliptic_smooth_phi0(raw.phi0, raw.gamma) : raw.phi0;
    rep.phi_max_after_smoothing = phi.max_abs();
    rep.max_principle_ok = rep.phi_max_after_smoothing <= 1.0 - raw.gamma + 1e-8;

    ScalarField sigma = raw.n_mollify > 0 ? mollify_sigma0(raw.sigma0, raw.n_mollify, &rep.mollify) : raw.sigma0;

    // raise K until the truncated phase field keeps a margin from the pure phases
    const double bound = 1.0 - 0.5 * raw.gamma;
    const double dk = fundamental(*g);
    double K_used = K;
    ScalarField phi_k = galerkin_truncate(phi, K_used);
    while (phi_k.max_abs() > bound && K_used < g->dealias_radius()) {
        K_used = std::min(K_used + dk, g->dealias_radius());
        phi_k = galerkin_truncate(phi, K_used);
    }
    rep.K_used = K_used;
    rep.truncation_bound_ok = phi_k.max_abs() <= bound;

    out.phi0 = std::move(phi_k);
    out.sigma0 = galerkin_truncate(sigma, K_used);
    rep.sigma_min = out.sigma0.min();

    if (!raw.v0.x.empty()) {
        require_same_grid(raw.v0.grid(), *g, "prepare velocity");
        if (!g->periodic()) {
            if (norm(raw.v0, NormKind::Linf) > 0.0)
                throw UnsupportedModeError("prepare: the Neumann rectangle is fluid-free; v0 must vanish");
        } else {
            out.v0 = galerkin_truncate(leray_project(raw.v0), K_used);
        }
    } else if (g->periodic()) {
        out.v0 = VectorField(g);
    }
    if (report)
        *report = rep;
    return out;
}

} // namespace nsch
