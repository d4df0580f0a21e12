// ============================================================================
// nsch/init.hpp - admissible initial data: elliptic smoothing of phi0, heat
// mollification of sigma0, Leray projection of v0 and Galerkin truncation
// ============================================================================
#pragma once

#include "nsch/field.hpp"

#include <cstdint>
#include <optional>
#include <random>

namespace nsch {

/// Solves (I - gamma Δ) u = (1 - gamma) phi0 spectrally. gamma in (0, 1/2].
ScalarField elliptic_smooth_phi0(const ScalarField& phi0, double gamma);

struct MollifyReport {
    double entropy_before = 0.0;   ///< ∫ σ0 ln σ0 (floored)
    double entropy_after = 0.0;    ///< ∫ σ0,n ln σ0,n (floored)
    bool entropy_bound_ok = true;  ///< entropy_after <= entropy_before + 1
    std::size_t projected = 0;     ///< negative samples raised to 0
    double min_before_projection = 0.0;
};

/// Heat-semigroup smoothing σ̂(k) e^{-|k|^2/n}. Throws DataError for inputs
/// below -1e-12 and ParameterError for n < 1.
ScalarField mollify_sigma0(const ScalarField& sigma0, int n, MollifyReport* report = nullptr);

/// Orthogonal projection onto |k| <= K.
ScalarField galerkin_truncate(const ScalarField& f, double K);
VectorField galerkin_truncate(const VectorField& u, double K);

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------
using Rng = std::mt19937_64;

/// Uniform draw in [0, 1) with 53 random bits (stable across standard libraries).
double uniform01(Rng& rng);

/// Random low-mode field: coefficients on |k| <= k_cut, rescaled so that
/// max|f - mean| = amp, plus `mean`.
ScalarField random_phase(const GridPtr& g, double mean, double amp, double k_cut, Rng& rng);

/// Horizontal band of phase +1 of half-height Ly/4 centred in y, with tanh
/// profile of width `width`, scaled by amp and shifted by mean.
ScalarField stripe(const GridPtr& g, double mean, double amp, double width);

/// Circular droplet of radius `radius` centred in the domain.
ScalarField droplet(const GridPtr& g, double mean, double amp, double width, double radius);

/// mean + amp cos(2π m x / Lx) on the torus, mean + amp cos(π m x / Lx) on the rectangle.
ScalarField cosine_mode(const GridPtr& g, double mean, double amp, int m);

/// base + amp exp(-|x - c|^2 / (2 width^2)) with c the domain centre
/// (distances measured periodically on the torus).
ScalarField gaussian_blob(const GridPtr& g, double base, double amp, double width);

/// Taylor-Green vortex U (sin kx cos ky, -cos kx sin ky) with k = 2π/L.
VectorField taylor_green(const GridPtr& g, double U);

/// Random solenoidal low-mode velocity with max speed `amp` (torus only).
VectorField random_velocity(const GridPtr& g, double amp, double k_cut, Rng& rng);

// ---------------------------------------------------------------------------
// Preparation
// ---------------------------------------------------------------------------
struct InitialData {
    VectorField v0;       ///< empty on the rectangle (fluid-free)
    ScalarField phi0;
    ScalarField sigma0;
    double gamma = 0.0;   ///< 0 disables the elliptic smoothing
    int n_mollify = 0;    ///< 0 disables the mollification
};

struct PrepareReport {
    double K_requested = 0.0;
    double K_used = 0.0;
    double phi_max_after_smoothing = 0.0;
    bool max_principle_ok = true;     ///< ||φ0,γ||∞ <= 1 - γ + 1e-8
    bool truncation_bound_ok = true;  ///< ||P_K φ0,γ||∞ <= 1 - γ/2
    double sigma_min = 0.0;           ///< after truncation
    MollifyReport mollify;
};

/// Validates the raw data, applies smoothing/mollification/projection and
/// truncates everything to K. K is raised (up to the dealiasing radius) until
/// the truncated phase field satisfies ||P_K φ||∞ <= 1 - γ/2.
InitialData prepare(const InitialData& raw, double K, PrepareReport* report = nullptr);

} // namespace nsch
