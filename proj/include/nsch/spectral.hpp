// ============================================================================
// nsch/spectral.hpp - transforms, differential operators, projections, norms
// ============================================================================
#pragma once

#include "nsch/field.hpp"

#include <string>

namespace nsch {

// ---------------------------------------------------------------------------
// Transforms
// ---------------------------------------------------------------------------
Spectrum forward(const ScalarField& f);
ScalarField inverse(const Spectrum& s);

// ---------------------------------------------------------------------------
// Differential operators
// ---------------------------------------------------------------------------
Spectrum laplacian(const Spectrum& s);
ScalarField laplacian(const ScalarField& f);
Spectrum bilaplacian(const Spectrum& s);
ScalarField bilaplacian(const ScalarField& f);

/// Torus only; in rectangle mode use flux_gradient/flux_divergence.
VectorField grad(const ScalarField& f);
ScalarField div(const VectorField& u);

/// Gradient samples usable as a flux factor in both modes. In rectangle mode
/// component x is sine-type in x and component y is sine-type in y, which is
/// the parity flux_divergence expects; pointwise multiplication by a
/// cosine-type (even) coefficient preserves it.
VectorField flux_gradient(const Spectrum& s);
/// Spectrum of div(F) for F with the parity produced by flux_gradient.
Spectrum flux_divergence(const VectorField& flux);

/// Solves -Δu = f - mean(f) with mean(u) = 0.
Spectrum inv_laplacian_zero_mean(const Spectrum& s);
ScalarField inv_laplacian_zero_mean(const ScalarField& f);

/// Helmholtz-Leray projection onto divergence-free fields (torus only).
/// The zero mode is left untouched.
void leray_project(Spectrum& ux, Spectrum& uy);
VectorField leray_project(const VectorField& u);

// ---------------------------------------------------------------------------
// Filtering
// ---------------------------------------------------------------------------
/// Zeroes the coefficients outside the 2/3-rule mask.
void dealias(Spectrum& s);
ScalarField dealias(const ScalarField& f);

/// Zeroes the coefficients with |k| > K.
void truncate_radial(Spectrum& s, double K);

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------
enum class NormKind { L2, H1, Linf, mean, dual_H1, dual_stokes };

std::string to_string(NormKind kind);
NormKind norm_kind_from_string(const std::string& s);

/// dual_stokes is rejected for scalars (PreconditionError).
double norm(const ScalarField& f, NormKind kind);
/// Component-wise combination; mean returns the magnitude of the mean vector.
/// dual_stokes requires torus mode and a divergence-free field.
double norm(const VectorField& u, NormKind kind);

/// L2 inner product over the domain.
double inner(const ScalarField& a, const ScalarField& b);

/// Parseval sum |Ω| Σ w_k |ŝ_k|^2 m(k) for a spectral multiplier m(|k|^2).
template <class Multiplier>
double weighted_energy(const Spectrum& s, Multiplier m)
{
    const Grid& g = s.grid();
    double acc = 0.0;
    for (std::size_t idx = 0; idx < s.size(); ++idx)
        acc += g.weight(idx) * std::norm(s[idx]) * m(g.k2(idx));
    return acc * g.area();
}

} // namespace nsch
