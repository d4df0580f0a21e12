#include "nsch/spectral.hpp"

#include "nsch/errors.hpp"

#include <algorithm>
#include <cmath>

namespace nsch {

namespace {

void require_torus(const Grid& g, const char* what)
{
    if (!g.periodic())
        throw UnsupportedModeError(std::string(what) + " is only available on the periodic torus");
}

// Largest |k.u| relative to the largest |k||u| over all modes.
double relative_divergence(const Spectrum& ux, const Spectrum& uy)
{
    const Grid& g = ux.grid();
    double div_max = 0.0, ref_max = 0.0;
    for (int j = 0; j < g.spec_ny(); ++j)
        for (int i = 0; i < g.spec_nx(); ++i) {
            const std::size_t idx = static_cast<std::size_t>(j) * g.spec_nx() + i;
            const double kx = g.kx(i), ky = g.ky(j);
            div_max = std::max(div_max, std::abs(kx * ux[idx] + ky * uy[idx]));
            ref_max = std::max(ref_max, std::hypot(kx, ky) * std::hypot(std::abs(ux[idx]), std::abs(uy[idx])));
        }
    return ref_max > 0.0 ? div_max / ref_max : 0.0;
}

} // namespace

// ============================================================================
// Transforms
// ============================================================================
Spectrum forward(const ScalarField& f)
{
    Spectrum s(f.grid_ptr());
    f.grid().forward(f.values(), s.values());
    return s;
}

ScalarField inverse(const Spectrum& s)
{
    ScalarField f(s.grid_ptr());
    s.grid().inverse(s.values(), f.values());
    return f;
}

// ============================================================================
// Differential operators
// ============================================================================
Spectrum laplacian(const Spectrum& s)
{
    Spectrum out = s;
    const Grid& g = s.grid();
    for (std::size_t idx = 0; idx < out.size(); ++idx)
        out[idx] *= -g.k2(idx);
    return out;
}

ScalarField laplacian(const ScalarField& f) { return inverse(laplacian(forward(f))); }

Spectrum bilaplacian(const Spectrum& s)
{
    Spectrum out = s;
    const Grid& g = s.grid();
    for (std::size_t idx = 0; idx < out.size(); ++idx)
        out[idx] *= g.k2(idx) * g.k2(idx);
    return out;
}

ScalarField bilaplacian(const ScalarField& f) { return inverse(bilaplacian(forward(f))); }

VectorField flux_gradient(const Spectrum& s)
{
    VectorField out(s.grid_ptr());
    s.grid().gradient(s.values(), out.x.values(), out.y.values());
    return out;
}

Spectrum flux_divergence(const VectorField& flux)
{
    Spectrum out(flux.grid_ptr());
    flux.grid().divergence(flux.x.values(), flux.y.values(), out.values());
    return out;
}

VectorField grad(const ScalarField& f)
{
    require_torus(f.grid(), "grad");
    return flux_gradient(forward(f));
}

ScalarField div(const VectorField& u)
{
    require_torus(u.grid(), "div");
    return inverse(flux_divergence(u));
}

Spectrum inv_laplacian_zero_mean(const Spectrum& s)
{
    Spectrum out = s;
    const Grid& g = s.grid();
    out[0] = 0.0;
    for (std::size_t idx = 1; idx < out.size(); ++idx)
        out[idx] /= g.k2(idx);
    return out;
}

ScalarField inv_laplacian_zero_mean(const ScalarField& f) { return inverse(inv_laplacian_zero_mean(forward(f))); }

void leray_project(Spectrum& ux, Spectrum& uy)
{
    require_torus(ux.grid(), "leray_project");
    require_same_grid(ux.grid(), uy.grid(), "leray_project");
    const Grid& g = ux.grid();
    // Derivative wavenumbers (Nyquist entries zero) so that the projected
    // field is divergence-free under the same operator div() applies.
    for (int j = 0; j < g.spec_ny(); ++j)
        for (int i = 0; i < g.spec_nx(); ++i) {
            const double kx = g.kx(i), ky = g.ky(j);
            const double kk = kx * kx + ky * ky;
            if (kk == 0.0)
                continue;
            const std::size_t idx = static_cast<std::size_t>(j) * g.spec_nx() + i;
            const cplx kdotu = (kx * ux[idx] + ky * uy[idx]) / kk;
            ux[idx] -= kx * kdotu;
            uy[idx] -= ky * kdotu;
        }
}

VectorField leray_project(const VectorField& u)
{
    require_torus(u.grid(), "leray_project");
    Spectrum sx = forward(u.x), sy = forward(u.y);
    leray_project(sx, sy);
    return VectorField(inverse(sx), inverse(sy));
}

// ============================================================================
// Filtering
// ============================================================================
void dealias(Spectrum& s)
{
    const Grid& g = s.grid();
    for (std::size_t idx = 0; idx < s.size(); ++idx)
        if (!g.in_mask(idx))
            s[idx] = 0.0;
}

ScalarField dealias(const ScalarField& f)
{
    Spectrum s = forward(f);
    dealias(s);
    return inverse(s);
}

void truncate_radial(Spectrum& s, double K)
{
    const Grid& g = s.grid();
    const double K2 = K * K * (1.0 + 1e-12);
    for (std::size_t idx = 0; idx < s.size(); ++idx)
        if (g.k2(idx) > K2)
            s[idx] = 0.0;
}

// ============================================================================
// Norms
// ============================================================================
std::string to_string(NormKind kind)
{
    switch (kind) {
    case NormKind::L2: return "L2";
    case NormKind::H1: return "H1";
    case NormKind::Linf: return "Linf";
    case NormKind::mean: return "mean";
    case NormKind::dual_H1: return "dual_H1";
    case NormKind::dual_stokes: return "dual_stokes";
    }
    return "?";
}

NormKind norm_kind_from_string(const std::string& s)
{
    for (NormKind k : {NormKind::L2, NormKind::H1, NormKind::Linf, NormKind::mean, NormKind::dual_H1,
                       NormKind::dual_stokes})
        if (to_string(k) == s)
            return k;
    throw ParameterError("unknown norm kind '" + s + "'");
}

double inner(const ScalarField& a, const ScalarField& b)
{
    require_same_grid(a.grid(), b.grid(), "inner");
    double acc = 0.0;
    const auto va = a.values(), vb = b.values();
    for (std::size_t i = 0; i < va.size(); ++i)
        acc += va[i] * vb[i];
    return acc * a.grid().area() / static_cast<double>(va.size());
}

double norm(const ScalarField& f, NormKind kind)
{
    switch (kind) {
    case NormKind::L2: return std::sqrt(inner(f, f));
    case NormKind::Linf: return f.max_abs();
    case NormKind::mean: return f.mean();
    case NormKind::H1: {
        const Spectrum s = forward(f);
        return std::sqrt(weighted_energy(s, [](double k2) { return 1.0 + k2; }));
    }
    case NormKind::dual_H1: {
        const Spectrum s = forward(f);
        return std::sqrt(weighted_energy(s, [](double k2) { return 1.0 / (1.0 + k2); }));
    }
    case NormKind::dual_stokes:
        throw PreconditionError("dual_stokes norm is defined for vector fields only");
    }
    return 0.0;
}

double norm(const VectorField& u, NormKind kind)
{
    switch (kind) {
    case NormKind::L2:
    case NormKind::H1:
    case NormKind::dual_H1: {
        const double a = norm(u.x, kind), b = norm(u.y, kind);
        return std::sqrt(a * a + b * b);
    }
    case NormKind::Linf: {
        double m = 0.0;
        const auto vx = u.x.values(), vy = u.y.values();
        for (std::size_t i = 0; i < vx.size(); ++i)
            m = std::max(m, std::hypot(vx[i], vy[i]));
        return m;
    }
    case NormKind::mean: return std::hypot(u.x.mean(), u.y.mean());
    case NormKind::dual_stokes: {
        require_torus(u.grid(), "dual_stokes norm");
        const Spectrum sx = forward(u.x), sy = forward(u.y);
        if (relative_divergence(sx, sy) > 1e-10)
            throw PreconditionError("dual_stokes norm requires a divergence-free field");
        auto inv_k2 = [](double k2) { return k2 > 0.0 ? 1.0 / k2 : 0.0; };
        return std::sqrt(weighted_energy(sx, inv_k2) + weighted_energy(sy, inv_k2));
    }
    }
    return 0.0;
}

} // namespace nsch
