// ============================================================================
// nsch/dynamics.hpp - spatial right-hand sides of the regularized
// Navier-Stokes-Cahn-Hilliard-Keller-Segel system
// ============================================================================
#pragma once

#include "nsch/field.hpp"
#include "nsch/potential.hpp"

#include <string>

namespace nsch {

enum class SigmaForm { cross_diffusion, linear_transport };

std::string to_string(SigmaForm f);
SigmaForm sigma_form_from_string(const std::string& s);

struct ModelParams {
    double eta1 = 1.0;
    double eta2 = 1.0;
    double m_lo = 1.0;
    double m_hi = 1.0;
    double chi = 0.0;
    double kappa = 0.0;
    double alpha = 0.0;
    double h_const = 0.0;
    double b_star = 0.0;
    double eps_interface = 1.0;
    double gamma_plap = 0.0;
    SigmaForm sigma_form = SigmaForm::cross_diffusion;

    /// Throws ParameterError naming the violated hypothesis.
    void validate() const;

    double mean_mobility() const noexcept { return 0.5 * (m_lo + m_hi); }
    double mean_viscosity() const noexcept { return 0.5 * (eta1 + eta2); }
    double plap_coefficient() const noexcept;
    bool sources_off() const noexcept { return alpha == 0.0 && h_const == 0.0 && b_star == 0.0 && kappa == 0.0; }
};

/// η(r) = η1 (1+r)/2 + η2 (1-r)/2 at clamp(r, -1, 1).
double viscosity(double r, const ModelParams& p);
/// m(r) blending m_lo at r = -1 and m_hi at r = +1, clamped.
double mobility(double r, const ModelParams& p);
/// b* q(|r|) with q = 1 on [0,1], 1 - 3s^2 + 2s^3 (s = |r|-1) on [1,2], 0 beyond.
double beta_cutoff(double r, const ModelParams& p);
double beta_cutoff_prime(double r, const ModelParams& p);

/// Model = parameters + potential + the Galerkin cutoff every right-hand side
/// is projected onto.
struct Model {
    ModelParams params;
    PhasePotential potential = PhasePotential::quartic();
    double K = 0.0; ///< 0 means "no truncation beyond the dealiasing mask"
};

/// (v, φ, μ, σ) at time t. v is empty in fluid-free (rectangle) runs.
struct State {
    double t = 0.0;
    VectorField v;
    ScalarField phi;
    ScalarField sigma;
    ScalarField mu;

    bool has_velocity() const noexcept { return !v.x.empty(); }
    const GridPtr& grid_ptr() const { return phi.grid_ptr(); }
};

/// Spectral right-hand sides of one evaluation; vx/vy are empty without fluid.
struct RhsSpectra {
    Spectrum mu;
    Spectrum phi;
    Spectrum sigma;
    Spectrum vx;
    Spectrum vy;
};

/// Evaluates μ and all right-hand sides from spectral unknowns. Every output is
/// projected onto |k| <= K (which lies inside the 2/3 dealiasing mask).
RhsSpectra evaluate_rhs(const Spectrum& phi, const Spectrum& sigma, const Spectrum* vx, const Spectrum* vy,
                        const Model& model);

/// Projects s onto the model's Galerkin space (|k| <= K, dealiased).
void project(Spectrum& s, const Model& model);

/// μ = -γ⁸ div(|∇φ|²∇φ) - ε Δφ + Ψ'(φ)/ε - χσ, projected.
ScalarField compute_mu(const ScalarField& phi, const ScalarField& sigma, const Model& model);

ScalarField rhs_phi(const State& s, const Model& model);
ScalarField rhs_sigma(const State& s, const Model& model);
VectorField rhs_v(const State& s, const Model& model);

/// Returns s with μ recomputed from φ and σ.
State with_mu(State s, const Model& model);

} // namespace nsch
