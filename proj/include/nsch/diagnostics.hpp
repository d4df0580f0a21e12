// ============================================================================
// nsch/diagnostics.hpp - energy law, mass dynamics, concentration monitors,
// coercivity margins and the continuous-dependence metric
// ============================================================================
#pragma once

#include "nsch/dynamics.hpp"

#include <array>
#include <limits>
#include <string_view>

namespace nsch {

inline constexpr double kDefaultEntropyFloor = 1e-12;

struct DiagnosticsRecord {
    double t = 0.0;
    double E_total = 0.0;
    double E_kinetic = 0.0;
    double E_gradient = 0.0;
    double E_plap = 0.0;
    double E_potential = 0.0;
    double E_entropy = 0.0;
    double E_cross = 0.0;
    double D_visc = 0.0;
    double D_mu = 0.0;
    double D_fisher = 0.0;
    double D_logistic = 0.0;
    double R_source = 0.0;
    double residual_energy = 0.0;
    double mean_phi = 0.0;
    double rho_star_margin = 0.0;
    double sigma_min = 0.0;
    double sigma_mass = 0.0;
    double sigma_L2 = 0.0;
    double W_metric = std::numeric_limits<double>::quiet_NaN();
    // extras (appended after the fixed columns)
    double floor_fraction = 0.0;
    double mean_envelope_violation = 0.0;
    double coercivity_margin = std::numeric_limits<double>::quiet_NaN();
    bool nonfinite = false;

    /// D + κ∫σ² ln σ - R, the quantity balancing dE/dt.
    double balance() const noexcept { return D_visc + D_mu + D_fisher + D_logistic - R_source; }

    static constexpr std::size_t kColumns = 23;
    static const std::array<std::string_view, kColumns>& column_names();
    std::array<double, kColumns> columns() const;
};

/// Energy pieces (E_*) of the state; the other fields are left at zero.
DiagnosticsRecord energy(const State& s, const Model& model, double floor = kDefaultEntropyFloor);

/// Dissipation and source pieces (D_*, R_source, floor_fraction). Uses s.mu
/// when present, otherwise recomputes μ.
DiagnosticsRecord dissipation_and_remainder(const State& s, const Model& model, double floor = kDefaultEntropyFloor);

/// [E(after) - E(before)]/dt + ½[G(before) + G(after)] with G = D + κ∫σ² ln σ - R.
double energy_law_residual(const State& before, const State& after, double dt, const Model& model,
                           double floor = kDefaultEntropyFloor);
/// Same from two already-evaluated records.
double energy_law_residual(const DiagnosticsRecord& before, const DiagnosticsRecord& after, double dt);

struct MassReport {
    double mean_phi = 0.0;
    double envelope_lower = 0.0; ///< φ̄0 e^{-αt} - (1 - e^{-αt}) h*/α
    double envelope_upper = 0.0;
    double case_lower = 0.0;     ///< three-case bracket valid for all t
    double case_upper = 0.0;
    double violation = 0.0;      ///< distance outside the envelope (0 inside)
    double rho_star_margin = 0.0; ///< ρ* = max(|φ̄0|, |h|/α), which bounds |φ̄(t)| for all t
};
MassReport mass_monitor(const State& s, const ModelParams& p, double phi0_mean);
/// The envelope/bracket part of mass_monitor for a given mean value.
MassReport mass_bounds(double t, double mean_phi, const ModelParams& p, double phi0_mean);

struct SigmaReport {
    double min = 0.0;
    double mass = 0.0;
    double l2 = 0.0;
    double entropy = 0.0; ///< ∫σ(ln σ - 1), floored
};
SigmaReport sigma_monitor(const State& s, double floor = kDefaultEntropyFloor);

/// ½∫[Ψε(φ) + σ(ln σ - 1)] - |χ|∫|σφ|.
double coercivity_margin(const State& s, const RegPotential& rp, double floor = kDefaultEntropyFloor);

/// A-priori constant C* with margin >= -C*, assembled from the thresholds
/// r_* <= -2, r* >= 2 and the minimum of Ψε on [r_*, r*].
double coercivity_constant(const RegPotential& rp, double area);

struct PointwiseCoercivity {
    double r_upper = 0.0;
    double r_lower = 0.0;
    double min_value = 0.0; ///< smallest mixed lower bound over the sample grid
};
/// Samples the mixed lower bound on φ in [r*, r*+span] ∪ [r_*-span, r_*] and
/// σ in [0, sigma_max].
PointwiseCoercivity pointwise_coercivity(const RegPotential& rp, double span = 5.0, double sigma_max = 50.0,
                                         int samples = 101);

/// W = ||∇S⁻¹ δv||² + ||δφ||²_(H¹)' + ||δσ||²_(H¹)' + |mean δφ|.
double uniqueness_metric(const State& s1, const State& s2);

/// Energy, dissipation, monitors and (for the regularized potential) the
/// coercivity margin of one state. residual_energy is left at zero.
DiagnosticsRecord full_record(const State& s, const Model& model, double phi0_mean,
                              double floor = kDefaultEntropyFloor);

} // namespace nsch
