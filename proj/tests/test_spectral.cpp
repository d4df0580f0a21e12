#include "nsch/errors.hpp"
#include "nsch/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace nsch;
using std::numbers::pi;

namespace {

GridPtr torus(int n = 32, double L = 2 * pi) { return Grid::create(DomainMode::periodic_torus, L, L, n, n); }
GridPtr rect(int nx = 32, int ny = 24, double lx = 2.0, double ly = 1.5)
{
    return Grid::create(DomainMode::neumann_rectangle, lx, ly, nx, ny);
}

ScalarField random_field(const GridPtr& g, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N(0.0, 1.0);
    ScalarField f(g);
    for (double& v : f.values())
        v = N(rng);
    return f;
}

// Band-limited random field: random coefficients inside the dealias mask.
ScalarField smooth_random(const GridPtr& g, std::uint64_t seed)
{
    Spectrum s = forward(random_field(g, seed));
    dealias(s);
    return inverse(s);
}

double max_diff(const ScalarField& a, const ScalarField& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i)
        m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

} // namespace

TEST_CASE("grid construction and validation")
{
    CHECK_THROWS_AS(Grid::create(DomainMode::periodic_torus, 1.0, 1.0, 7, 8), ParameterError);
    CHECK_THROWS_AS(Grid::create(DomainMode::periodic_torus, 1.0, 1.0, 6, 8), ParameterError);
    CHECK_THROWS_AS(Grid::create(DomainMode::periodic_torus, -1.0, 1.0, 8, 8), ParameterError);
    const auto g = torus(16, 2.0);
    CHECK(g->nyquist_radius() == doctest::Approx(pi * 16 / 2.0));
    const auto r = rect(16, 16, 2.0, 2.0);
    CHECK(r->nyquist_radius() == doctest::Approx(pi * 15 / 2.0));
    CHECK(r->kx(3) == doctest::Approx(3 * pi / 2.0));
}

TEST_CASE("transforms: DC mode, single mode, round trip, Parseval")
{
    for (const auto& g : {torus(), rect()}) {
        CAPTURE(to_string(g->mode()));
        const ScalarField c(g, 3.5);
        const Spectrum sc = forward(c);
        CHECK(sc[0].real() == doctest::Approx(3.5).epsilon(1e-15));
        double rest = 0.0;
        for (std::size_t i = 1; i < sc.size(); ++i)
            rest = std::max(rest, std::abs(sc[i]));
        CHECK(rest <= 1e-14);

        const double k = g->periodic() ? 2 * pi * 3 / g->lx() : pi * 3 / g->lx();
        const auto mode = ScalarField::from_function(g, [&](double x, double) { return std::cos(k * x); });
        const Spectrum sm = forward(mode);
        int nonzero = 0;
        for (std::size_t i = 0; i < sm.size(); ++i)
            if (std::abs(sm[i]) > 1e-12)
                ++nonzero;
        CHECK(nonzero == 1);

        const auto f = random_field(g, 11);
        const auto back = inverse(forward(f));
        CHECK(max_diff(f, back) <= 1e-12 * f.max_abs());

        const double phys = inner(f, f);
        const double spec = weighted_energy(forward(f), [](double) { return 1.0; });
        CHECK(std::abs(phys - spec) <= 1e-12 * phys);
    }
}

TEST_CASE("rectangle fields are even across the boundary")
{
    const auto g = rect();
    const auto f = smooth_random(g, 5);
    const Spectrum s = forward(f);
    // evaluate the cosine series at mirrored ghost points x = -x_i and x = 2Lx - x_i
    auto eval = [&](double x, double y) {
        double acc = 0.0;
        for (int j = 0; j < g->ny(); ++j)
            for (int i = 0; i < g->nx(); ++i)
                acc += s.at(i, j).real() * std::cos(g->kx(i) * x) * std::cos(g->ky(j) * y);
        return acc;
    };
    for (int i : {0, 3})
        for (int j : {0, 5}) {
            const double x = g->x(i), y = g->y(j);
            CHECK(eval(-x, y) == doctest::Approx(f(i, j)).epsilon(1e-10));
            CHECK(eval(2 * g->lx() - x, y) == doctest::Approx(f(i, j)).epsilon(1e-10));
            CHECK(eval(x, -y) == doctest::Approx(f(i, j)).epsilon(1e-10));
        }
}

TEST_CASE("differential operators")
{
    for (const auto& g : {torus(), rect()}) {
        CAPTURE(to_string(g->mode()));
        const double k = g->periodic() ? 2.0 : pi * 2 / g->lx();
        const auto c = ScalarField::from_function(g, [&](double x, double) { return std::cos(k * x); });
        const auto lap = laplacian(c);
        const auto bil = bilaplacian(c);
        // roundoff in the unused modes is amplified by k_max^4, hence the looser
        // analytic tolerance; the repeated-application oracle is tight
        const double k4 = k * k * k * k;
        for (int i = 0; i < g->nx(); ++i) {
            CHECK(std::abs(lap(i, 1) + k * k * c(i, 1)) <= 1e-12 * k * k);
            CHECK(std::abs(bil(i, 1) - k4 * c(i, 1)) <= 1e-10 * k4);
        }
        CHECK(max_diff(bil, laplacian(laplacian(c))) <= 1e-12 * k4);
        CHECK(laplacian(ScalarField(g, 2.0)).max_abs() <= 1e-13);

        // div(grad f) through the composite path equals the Laplacian
        const auto f = smooth_random(g, 3);
        const Spectrum sf = forward(f);
        const auto dg = inverse(flux_divergence(flux_gradient(sf)));
        CHECK(max_diff(dg, laplacian(f)) <= 1e-12 * laplacian(f).max_abs());

        // gradient samples against the analytic derivative
        const auto fxy = ScalarField::from_function(
            g, [&](double x, double y) { return std::cos(k * x) * std::cos(2 * pi * y / g->ly()); });
        const auto gr = flux_gradient(forward(fxy));
        const double ky = 2 * pi / g->ly();
        double err = 0.0;
        for (int j = 0; j < g->ny(); ++j)
            for (int i = 0; i < g->nx(); ++i) {
                const double x = g->x(i), y = g->y(j);
                err = std::max(err, std::abs(gr.x(i, j) + k * std::sin(k * x) * std::cos(ky * y)));
                err = std::max(err, std::abs(gr.y(i, j) + ky * std::cos(k * x) * std::sin(ky * y)));
            }
        CHECK(err <= 1e-12);
    }
    const auto r = rect();
    CHECK_THROWS_AS(grad(ScalarField(r)), UnsupportedModeError);
    CHECK_THROWS_AS(div(VectorField(r)), UnsupportedModeError);
}

TEST_CASE("inverse Laplacian")
{
    const auto g = torus();
    const auto c = ScalarField::from_function(g, [](double x, double y) { return std::cos(3 * x) + 0.5; });
    const auto u = inv_laplacian_zero_mean(c);
    for (int i = 0; i < g->nx(); ++i)
        CHECK(u(i, 0) == doctest::Approx(std::cos(3 * g->x(i)) / 9.0).epsilon(1e-12).scale(1.0));
    CHECK(inv_laplacian_zero_mean(ScalarField(g, 4.0)).max_abs() == 0.0);

    const auto f = smooth_random(g, 9);
    const auto lu = laplacian(inv_laplacian_zero_mean(f));
    ScalarField centred = f;
    for (double& v : centred.values())
        v -= f.mean();
    CHECK(max_diff(lu, -1.0 * centred) <= 1e-11 * f.max_abs());

    // interpolation inequality is an equality on one mode
    const auto m = ScalarField::from_function(g, [](double x, double y) { return std::cos(2 * x + y); });
    const auto nm = inv_laplacian_zero_mean(m);
    const auto gn = grad(nm);
    const double dual = std::sqrt(inner(gn.x, gn.x) + inner(gn.y, gn.y));
    const auto gm = grad(m);
    const double gradm = std::sqrt(inner(gm.x, gm.x) + inner(gm.y, gm.y));
    CHECK(inner(m, m) == doctest::Approx(dual * gradm).epsilon(1e-12));
}

TEST_CASE("Leray projection")
{
    const auto g = torus();
    const auto psi = smooth_random(g, 21);
    const auto gp = grad(psi);
    const auto pg = leray_project(gp);
    CHECK(pg.x.max_abs() <= 1e-12 * gp.x.max_abs());
    CHECK(pg.y.max_abs() <= 1e-12 * gp.y.max_abs());

    const VectorField sol(ScalarField::from_function(g, [](double, double y) { return std::sin(y); }), ScalarField(g));
    const auto ps = leray_project(sol);
    CHECK(max_diff(ps.x, sol.x) <= 1e-14);
    CHECK(ps.y.max_abs() <= 1e-14);

    const VectorField u(smooth_random(g, 1), smooth_random(g, 2));
    const auto p1 = leray_project(u);
    const auto p2 = leray_project(p1);
    CHECK(max_diff(p1.x, p2.x) <= 1e-12);
    CHECK(max_diff(p1.y, p2.y) <= 1e-12);
    CHECK(div(p1).max_abs() <= 1e-12 * norm(u, NormKind::L2));
    const double unorm2 = inner(u.x, u.x) + inner(u.y, u.y);
    const double orth = inner(u.x - p1.x, p1.x) + inner(u.y - p1.y, p1.y);
    CHECK(std::abs(orth) <= 1e-12 * unorm2);
    CHECK(norm(p1, NormKind::L2) <= norm(u, NormKind::L2));
    // zero mode untouched
    VectorField shifted = u;
    for (double& v : shifted.x.values())
        v += 1.0;
    CHECK(leray_project(shifted).x.mean() == doctest::Approx(u.x.mean() + 1.0));
    CHECK_THROWS_AS(leray_project(VectorField(rect())), UnsupportedModeError);
}

TEST_CASE("norms")
{
    const auto g = torus(32, 2.0);
    const double area = g->area();
    const double k = 2 * pi * 2 / 2.0;
    const auto c = ScalarField::from_function(g, [&](double x, double) { return std::cos(k * x); });
    CHECK(norm(c, NormKind::mean) == doctest::Approx(0.0).scale(1.0));
    CHECK(norm(ScalarField(g, 1.0), NormKind::L2) == doctest::Approx(std::sqrt(area)));
    CHECK(norm(c, NormKind::Linf) == doctest::Approx(1.0));
    const double l2 = norm(c, NormKind::L2);
    CHECK(l2 == doctest::Approx(std::sqrt(area / 2)));
    CHECK(norm(c, NormKind::H1) == doctest::Approx(l2 * std::sqrt(1 + k * k)));
    CHECK(norm(c, NormKind::dual_H1) == doctest::Approx(l2 / std::sqrt(1 + k * k)));
    CHECK_THROWS_AS(norm(c, NormKind::dual_stokes), PreconditionError);

    // solenoidal single mode (sin(k y), 0): contribution a^2 ||mode||^2 / k^2
    const double a = 0.3;
    const VectorField v(ScalarField::from_function(g, [&](double, double y) { return a * std::sin(k * y); }),
                        ScalarField(g));
    const double ds = norm(v, NormKind::dual_stokes);
    CHECK(ds * ds == doctest::Approx(a * a * (area / 2) / (k * k)).epsilon(1e-12));
    const VectorField gradient = grad(c);
    CHECK_THROWS_AS(norm(gradient, NormKind::dual_stokes), PreconditionError);

    const auto r = rect();
    const auto cr = ScalarField::from_function(r, [&](double x, double) { return std::cos(pi * x / r->lx()); });
    CHECK(norm(cr, NormKind::L2) == doctest::Approx(std::sqrt(r->area() / 2)));
    CHECK(norm(ScalarField(r, 2.0), NormKind::mean) == doctest::Approx(2.0));
    CHECK(norm_kind_from_string("dual_H1") == NormKind::dual_H1);
}

TEST_CASE("dealias and radial truncation")
{
    const auto g = torus();
    const auto low = smooth_random(g, 4);
    CHECK(max_diff(dealias(low), low) <= 1e-14);
    const auto hi = ScalarField::from_function(g, [&](double x, double) { return std::cos(15.0 * x); });
    CHECK(dealias(hi).max_abs() <= 1e-14);
    const auto f = random_field(g, 8);
    const auto d1 = dealias(f);
    CHECK(max_diff(dealias(d1), d1) <= 1e-14);

    Spectrum s = forward(f);
    truncate_radial(s, 5.0);
    for (std::size_t i = 0; i < s.size(); ++i)
        if (g->k2(i) > 25.0 + 1e-9)
            CHECK(s[i] == cplx(0.0, 0.0));
}
