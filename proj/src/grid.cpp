#include "nsch/grid.hpp"

#include "nsch/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numbers>
#include <sstream>

namespace nsch {

namespace {

// FFTW's planner is not thread-safe; plan execution is.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

int env_threads()
{
    if (const char* s = std::getenv("NSCH_THREADS")) {
        const int n = std::atoi(s);
        if (n > 0)
            return n;
    }
    return 1;
}

int g_threads = 0;

void ensure_threads_initialized()
{
    static const bool done = [] {
        fftw_init_threads();
        g_threads = env_threads();
        return true;
    }();
    (void)done;
}

constexpr unsigned kPlanFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;

} // namespace

void set_transform_threads(int n)
{
    std::lock_guard lock(planner_mutex());
    ensure_threads_initialized();
    g_threads = std::max(1, n);
}

int transform_threads()
{
    std::lock_guard lock(planner_mutex());
    ensure_threads_initialized();
    return g_threads;
}

std::string to_string(DomainMode mode)
{
    return mode == DomainMode::periodic_torus ? "periodic_torus" : "neumann_rectangle";
}

DomainMode domain_mode_from_string(const std::string& s)
{
    if (s == "periodic_torus" || s == "torus" || s == "periodic")
        return DomainMode::periodic_torus;
    if (s == "neumann_rectangle" || s == "rectangle" || s == "neumann")
        return DomainMode::neumann_rectangle;
    throw ParameterError("unknown domain mode '" + s + "'");
}

// ============================================================================
// Plans
// ============================================================================
struct Grid::Plans {
    // torus
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
    // rectangle: (y kind, x kind)
    fftw_plan fwd_cc = nullptr; // REDFT10, REDFT10
    fftw_plan inv_cc = nullptr; // REDFT01, REDFT01
    fftw_plan inv_cs = nullptr; // REDFT01, RODFT01  (d/dx samples)
    fftw_plan inv_sc = nullptr; // RODFT01, REDFT01  (d/dy samples)
    fftw_plan fwd_cs = nullptr; // REDFT10, RODFT10  (x-flux)
    fftw_plan fwd_sc = nullptr; // RODFT10, REDFT10  (y-flux)

    ~Plans()
    {
        std::lock_guard lock(planner_mutex());
        for (fftw_plan p : {r2c, c2r, fwd_cc, inv_cc, inv_cs, inv_sc, fwd_cs, fwd_sc})
            if (p)
                fftw_destroy_plan(p);
    }
};

std::shared_ptr<const Grid> Grid::create(DomainMode mode, double lx, double ly, int nx, int ny)
{
    return std::shared_ptr<const Grid>(new Grid(mode, lx, ly, nx, ny));
}

Grid::Grid(DomainMode mode, double lx, double ly, int nx, int ny)
    : mode_(mode), lx_(lx), ly_(ly), nx_(nx), ny_(ny)
{
    if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly))
        throw ParameterError("grid: extents must be positive and finite");
    if (nx < 8 || ny < 8 || nx % 2 != 0 || ny % 2 != 0) {
        std::ostringstream os;
        os << "grid: resolution must be even and >= 8, got " << nx << " x " << ny;
        throw ParameterError(os.str());
    }
    using std::numbers::pi;

    spec_nx_ = periodic() ? nx / 2 + 1 : nx;
    kx_.assign(spec_nx_, 0.0);
    ky_.assign(ny_, 0.0);
    std::vector<double> kx_full(spec_nx_), ky_full(ny_);
    std::vector<double> ix_norm(spec_nx_), iy_norm(ny_);
    if (periodic()) {
        for (int i = 0; i < spec_nx_; ++i) {
            kx_full[i] = 2.0 * pi * i / lx;
            kx_[i] = (i == nx / 2) ? 0.0 : kx_full[i];
            ix_norm[i] = i / (0.5 * nx);
        }
        for (int j = 0; j < ny_; ++j) {
            const int jj = (j <= ny / 2) ? j : j - ny;
            ky_full[j] = 2.0 * pi * jj / ly;
            ky_[j] = (j == ny / 2) ? 0.0 : ky_full[j];
            iy_norm[j] = jj / (0.5 * ny);
        }
    } else {
        for (int i = 0; i < spec_nx_; ++i) {
            kx_[i] = kx_full[i] = pi * i / lx;
            ix_norm[i] = static_cast<double>(i) / nx;
        }
        for (int j = 0; j < ny_; ++j) {
            ky_[j] = ky_full[j] = pi * j / ly;
            iy_norm[j] = static_cast<double>(j) / ny;
        }
    }

    const std::size_t n = spec_size();
    k2_.resize(n);
    weight_.resize(n);
    mask_.resize(n);
    constexpr double two_thirds_sq = 4.0 / 9.0;
    for (int j = 0; j < ny_; ++j) {
        for (int i = 0; i < spec_nx_; ++i) {
            const std::size_t idx = static_cast<std::size_t>(j) * spec_nx_ + i;
            k2_[idx] = kx_full[i] * kx_full[i] + ky_full[j] * ky_full[j];
            if (periodic())
                weight_[idx] = (i == 0 || i == nx / 2) ? 1.0 : 2.0;
            else
                weight_[idx] = (i == 0 ? 1.0 : 0.5) * (j == 0 ? 1.0 : 0.5);
            const double r2 = ix_norm[i] * ix_norm[i] + iy_norm[j] * iy_norm[j];
            mask_[idx] = r2 <= two_thirds_sq + 1e-14 ? 1 : 0;
        }
    }

    plans_ = std::make_unique<Plans>();
    std::lock_guard lock(planner_mutex());
    ensure_threads_initialized();
    fftw_plan_with_nthreads(g_threads);

    double* rin = fftw_alloc_real(size());
    double* rout = fftw_alloc_real(size());
    fftw_complex* cbuf = fftw_alloc_complex(spec_size());
    if (periodic()) {
        plans_->r2c = fftw_plan_dft_r2c_2d(ny, nx, rin, cbuf, kPlanFlags);
        plans_->c2r = fftw_plan_dft_c2r_2d(ny, nx, cbuf, rout, kPlanFlags);
    } else {
        plans_->fwd_cc = fftw_plan_r2r_2d(ny, nx, rin, rout, FFTW_REDFT10, FFTW_REDFT10, kPlanFlags);
        plans_->inv_cc = fftw_plan_r2r_2d(ny, nx, rin, rout, FFTW_REDFT01, FFTW_REDFT01, kPlanFlags);
        plans_->inv_cs = fftw_plan_r2r_2d(ny, nx, rin, rout, FFTW_REDFT01, FFTW_RODFT01, kPlanFlags);
        plans_->inv_sc = fftw_plan_r2r_2d(ny, nx, rin, rout, FFTW_RODFT01, FFTW_REDFT01, kPlanFlags);
        plans_->fwd_cs = fftw_plan_r2r_2d(ny, nx, rin, rout, FFTW_REDFT10, FFTW_RODFT10, kPlanFlags);
        plans_->fwd_sc = fftw_plan_r2r_2d(ny, nx, rin, rout, FFTW_RODFT10, FFTW_REDFT10, kPlanFlags);
    }
    fftw_free(rin);
    fftw_free(rout);
    fftw_free(cbuf);
}

Grid::~Grid() = default;

double Grid::x(int i) const noexcept { return periodic() ? i * dx() : (i + 0.5) * dx(); }
double Grid::y(int j) const noexcept { return periodic() ? j * dy() : (j + 0.5) * dy(); }

double Grid::nyquist_radius() const noexcept
{
    using std::numbers::pi;
    if (periodic())
        return std::min(pi * nx_ / lx_, pi * ny_ / ly_);
    return std::min(pi * (nx_ - 1) / lx_, pi * (ny_ - 1) / ly_);
}

double Grid::dealias_radius() const noexcept
{
    using std::numbers::pi;
    return (2.0 / 3.0) * std::min(pi * nx_ / lx_, pi * ny_ / ly_);
}

// ============================================================================
// Transforms
// ============================================================================
namespace {

void check_sizes(std::size_t got, std::size_t want, const char* what)
{
    if (got != want) {
        std::ostringstream os;
        os << what << ": size " << got << " does not match grid size " << want;
        throw ShapeError(os.str());
    }
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

} // namespace

void Grid::forward(std::span<const double> in, std::span<cplx> out) const
{
    check_sizes(in.size(), size(), "forward transform input");
    check_sizes(out.size(), spec_size(), "forward transform output");
    const double scale = 1.0 / static_cast<double>(size());
    if (periodic()) {
        // out-of-place r2c preserves its input
        fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(in.data()), as_fftw(out.data()));
        for (auto& c : out)
            c *= scale;
        return;
    }
    std::vector<double> y(size());
    fftw_execute_r2r(plans_->fwd_cc, const_cast<double*>(in.data()), y.data());
    for (int j = 0; j < ny_; ++j)
        for (int i = 0; i < nx_; ++i) {
            const std::size_t idx = static_cast<std::size_t>(j) * nx_ + i;
            const double f = 0.25 * scale * (i ? 2.0 : 1.0) * (j ? 2.0 : 1.0);
            out[idx] = cplx(f * y[idx], 0.0);
        }
}

void Grid::inverse(std::span<const cplx> in, std::span<double> out) const
{
    check_sizes(in.size(), spec_size(), "inverse transform input");
    check_sizes(out.size(), size(), "inverse transform output");
    if (periodic()) {
        std::vector<cplx> scratch(in.begin(), in.end()); // c2r destroys its input
        fftw_execute_dft_c2r(plans_->c2r, as_fftw(scratch.data()), out.data());
        return;
    }
    std::vector<double> x(size());
    for (int j = 0; j < ny_; ++j)
        for (int i = 0; i < nx_; ++i) {
            const std::size_t idx = static_cast<std::size_t>(j) * nx_ + i;
            x[idx] = in[idx].real() * (i ? 0.5 : 1.0) * (j ? 0.5 : 1.0);
        }
    fftw_execute_r2r(plans_->inv_cc, x.data(), out.data());
}

void Grid::gradient(std::span<const cplx> in, std::span<double> gx, std::span<double> gy) const
{
    check_sizes(in.size(), spec_size(), "gradient input");
    check_sizes(gx.size(), size(), "gradient x output");
    check_sizes(gy.size(), size(), "gradient y output");
    if (periodic()) {
        std::vector<cplx> cx(spec_size()), cy(spec_size());
        for (int j = 0; j < ny_; ++j)
            for (int i = 0; i < spec_nx_; ++i) {
                const std::size_t idx = static_cast<std::size_t>(j) * spec_nx_ + i;
                cx[idx] = cplx(0.0, kx_[i]) * in[idx];
                cy[idx] = cplx(0.0, ky_[j]) * in[idx];
            }
        fftw_execute_dft_c2r(plans_->c2r, as_fftw(cx.data()), gx.data());
        fftw_execute_dft_c2r(plans_->c2r, as_fftw(cy.data()), gy.data());
        return;
    }
    // d/dx of a_{j,i} cos(kx_i x) cos(ky_j y) = -kx_i a sin(kx_i x) cos(ky_j y);
    // sine index i sits in slot i-1 of the RODFT01 input, whose last slot
    // (index N) carries full weight and the others half weight.
    std::vector<double> bx(size(), 0.0), by(size(), 0.0);
    for (int j = 0; j < ny_; ++j)
        for (int i = 0; i < nx_; ++i) {
            const std::size_t idx = static_cast<std::size_t>(j) * nx_ + i;
            const double a = in[idx].real();
            if (i >= 1)
                bx[static_cast<std::size_t>(j) * nx_ + (i - 1)] = -kx_[i] * a * 0.5 * (j ? 0.5 : 1.0);
            if (j >= 1)
                by[static_cast<std::size_t>(j - 1) * nx_ + i] = -ky_[j] * a * 0.5 * (i ? 0.5 : 1.0);
        }
    fftw_execute_r2r(plans_->inv_cs, bx.data(), gx.data());
    fftw_execute_r2r(plans_->inv_sc, by.data(), gy.data());
}

void Grid::divergence(std::span<const double> fx, std::span<const double> fy, std::span<cplx> out) const
{
    check_sizes(fx.size(), size(), "divergence x input");
    check_sizes(fy.size(), size(), "divergence y input");
    check_sizes(out.size(), spec_size(), "divergence output");
    const double scale = 1.0 / static_cast<double>(size());
    if (periodic()) {
        std::vector<cplx> cx(spec_size()), cy(spec_size());
        fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(fx.data()), as_fftw(cx.data()));
        fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(fy.data()), as_fftw(cy.data()));
        for (int j = 0; j < ny_; ++j)
            for (int i = 0; i < spec_nx_; ++i) {
                const std::size_t idx = static_cast<std::size_t>(j) * spec_nx_ + i;
                out[idx] = scale * (cplx(0.0, kx_[i]) * cx[idx] + cplx(0.0, ky_[j]) * cy[idx]);
            }
        return;
    }
    std::vector<double> sx(size()), sy(size());
    fftw_execute_r2r(plans_->fwd_cs, const_cast<double*>(fx.data()), sx.data());
    fftw_execute_r2r(plans_->fwd_sc, const_cast<double*>(fy.data()), sy.data());
    std::fill(out.begin(), out.end(), cplx(0.0, 0.0));
    // sine amplitude in slot s (index s+1) differentiates into cosine index s+1;
    // slot N-1 (index N) vanishes on the cell-centred grid and is dropped.
    for (int j = 0; j < ny_; ++j)
        for (int s = 0; s + 1 < nx_; ++s) {
            const std::size_t idx = static_cast<std::size_t>(j) * nx_ + s;
            const double b = 0.25 * scale * 2.0 * (j ? 2.0 : 1.0) * sx[idx];
            out[static_cast<std::size_t>(j) * nx_ + s + 1] += kx_[s + 1] * b;
        }
    for (int s = 0; s + 1 < ny_; ++s)
        for (int i = 0; i < nx_; ++i) {
            const std::size_t idx = static_cast<std::size_t>(s) * nx_ + i;
            const double b = 0.25 * scale * 2.0 * (i ? 2.0 : 1.0) * sy[idx];
            out[static_cast<std::size_t>(s + 1) * nx_ + i] += ky_[s + 1] * b;
        }
}

} // namespace nsch
