// ============================================================================
// nsch/potential.hpp - Flory-Huggins potential, quartic surrogate, and the
// chi-dependent regularized family used by the approximate system
// ============================================================================
#pragma once

#include <array>

namespace nsch {

/// Coefficients of the logarithmic potential
///   Psi(r) = theta/2 [(1-r)ln(1-r) + (1+r)ln(1+r)] + theta_c/2 (1 - r^2)
/// written as Psi = Psi_0 - theta0 r^2 / 2 (+ a constant), with Psi_0 the convex
/// logarithmic part normalized by Psi_0(0) = Psi_0'(0) = 0.
struct PotentialParams {
    double theta = 1.0;
    double theta_c = 2.0;
    double theta0 = 2.0;

    /// Flory-Huggins instantiation: theta0 = theta_c.
    static PotentialParams flory_huggins(double theta, double theta_c);

    /// Throws ParameterError unless theta > 0.
    void validate() const;
    /// Throws ParameterError unless 0 < theta < theta_c and theta0 == theta_c.
    void validate_flory_huggins() const;
};

/// How the convex part treats arguments that graze the pure phases.
enum class SingularGuard {
    strict,  ///< |r| >= 1 raises SingularityError
    clamped, ///< |r| is clamped to 1 - 1e-14 before the logarithm
};

/// Full logarithmic potential; the endpoint limit at r = +-1 is theta ln 2.
double psi_singular(double r, const PotentialParams& p);

/// Convex logarithmic part Psi_0(r) on [-1, 1].
double psi0(double r, const PotentialParams& p);

/// Psi_0'(r) = theta atanh(r).
double psi0_prime(double r, const PotentialParams& p, SingularGuard guard = SingularGuard::strict);

/// Psi_0''(r) = theta / (1 - r^2) >= theta.
double psi0_second(double r, const PotentialParams& p, SingularGuard guard = SingularGuard::strict);

enum class QuarticVariant { value, prime };

/// (1 - r^2)^2 / 4 or its derivative r^3 - r.
double psi_quartic(double r, QuarticVariant variant);

/// Globally C^2 approximation of the convex part: interior branch equal to
/// Psi_0 on |r| <= 1-eps, linear extensions of Psi_0' up to |r| = 2, and
/// exponential branches with rate 4(|chi|+1) beyond.
class RegPotential {
public:
    enum class Branch { lower_exp, lower_linear, interior, upper_linear, upper_exp };

    /// Validates theta > 0, 0 < eps < 1 and the threshold condition
    /// Psi_0'(1-eps) >= 1, Psi_0'(-1+eps) <= -1.
    RegPotential(PotentialParams base, double eps, double chi);

    const PotentialParams& base() const noexcept { return base_; }
    double eps() const noexcept { return eps_; }
    double chi() const noexcept { return chi_; }
    double theta0() const noexcept { return base_.theta0; }

    /// Branch boundaries {-2, -1+eps, 1-eps, 2}.
    std::array<double, 4> knots() const noexcept { return {-2.0, -inner_, inner_, 2.0}; }

    static Branch branch_of(double r, double inner) noexcept;
    Branch branch_of(double r) const noexcept { return branch_of(r, inner_); }

    // Convex regularized part Psi_{0,eps}.
    double value0(double r) const;
    double prime0(double r) const;
    double second0(double r) const;

    // Branch formulas evaluated regardless of where r lies (knot checks).
    double value0_on(Branch b, double r) const;
    double prime0_on(Branch b, double r) const;
    double second0_on(Branch b, double r) const;

    /// Extended-precision Psi_{0,eps}, used by the coercivity threshold search
    /// where the exponential branches exceed double range.
    long double value0_extended(long double r) const;

    // Full regularized potential Psi_eps = Psi_{0,eps} - theta0 r^2 / 2.
    double value(double r) const { return value0(r) - 0.5 * base_.theta0 * r * r; }
    double prime(double r) const { return prime0(r) - base_.theta0 * r; }
    double second(double r) const { return second0(r) - base_.theta0; }

private:
    template <class T>
    T value0_impl(Branch b, T r) const;

    PotentialParams base_;
    double eps_;
    double chi_;
    double inner_;           // 1 - eps
    double rate_;            // 4(|chi|+1)
    double log_factor_;      // -8(|chi|+1) - ln(4(|chi|+1))
    double offset_;          // (4|chi|+3)/(4(|chi|+1)) + eps
    double psi_hi_, psi_lo_; // Psi_0(+-(1-eps))
    double d1_hi_, d1_lo_;   // Psi_0'(+-(1-eps))
    double d2_hi_, d2_lo_;   // Psi_0''(+-(1-eps))
    double at2_hi_, at2_lo_; // Psi_{0,eps}(+-2)
};

// Free-function spellings of the regularized family.
inline double psi0_reg_prime(double r, const RegPotential& rp) { return rp.prime0(r); }
inline double psi0_reg(double r, const RegPotential& rp) { return rp.value0(r); }
inline double psi0_reg_second(double r, const RegPotential& rp) { return rp.second0(r); }
inline double psi_reg_prime(double r, const RegPotential& rp) { return rp.prime(r); }
inline double psi_reg(double r, const RegPotential& rp) { return rp.value(r); }

/// Knot continuity report: largest relative jumps of Psi'_{0,eps} and of its
/// derivative across the four branch boundaries.
struct KnotJumps {
    double value = 0.0;
    double derivative = 0.0;
};
KnotJumps knot_jumps(const RegPotential& rp);

// ----------------------------------------------------------------------------
// Generalized Young inequality  a b <= f(a) + g(b),  a, b >= 0
// ----------------------------------------------------------------------------
double young_f(double a);
double young_g(double b);
double young_gap(double a, double b);

// ----------------------------------------------------------------------------
// Coercivity thresholds r* (upper) and r_* (lower)
// ----------------------------------------------------------------------------
enum class RStarSide { upper, lower };

/// entropy:   Psi_{0,eps}(r) >= e^{(2|chi|+1)|r|} + theta0 r^2 + 2|chi||r| + 1
/// quadratic: Psi_{0,eps}(r) >= e^{(4|chi|+1)|r|} + theta0 r^2 + 4|chi||r|
enum class CoercivityTarget { entropy, quadratic };

struct RStarOptions {
    double horizon = 200.0;
    double scan_step = 0.01;
    double tolerance = 1e-9;
};

/// Psi_{0,eps}(r) minus the target envelope; |r| is used in the envelope so the
/// lower side is the mirror image of the upper one.
double coercivity_deficit(double r, const RegPotential& rp, CoercivityTarget target = CoercivityTarget::entropy);

/// Smallest r* >= 2 (upper) or largest r_* <= -2 (lower) beyond which the
/// deficit stays nonnegative up to the horizon. Throws CoercivityError if the
/// deficit is still negative at the horizon.
double find_r_star(const RegPotential& rp, RStarSide side,
                   CoercivityTarget target = CoercivityTarget::entropy, const RStarOptions& opts = {});

/// Pointwise left-hand side of the mixed lower bound
///   1/2 Psi_{0,eps}(phi) - theta0/2 phi^2 + 1/2 sigma (ln sigma - 1) - |chi| sigma |phi|
/// which is nonnegative for sigma >= 0 and phi beyond the thresholds.
double mixed_lower_bound(double phi, double sigma, const RegPotential& rp);

// ----------------------------------------------------------------------------
// Potential selector used by the dynamics
// ----------------------------------------------------------------------------
enum class PotentialKind { regularized, quartic, singular };

class PhasePotential {
public:
    static PhasePotential regularized(const RegPotential& rp);
    static PhasePotential quartic();
    static PhasePotential singular(const PotentialParams& p);

    PotentialKind kind() const noexcept { return kind_; }
    /// Regularized family, or nullptr for the other kinds.
    const RegPotential* reg() const noexcept { return kind_ == PotentialKind::regularized ? &reg_ : nullptr; }
    const PotentialParams& params() const noexcept { return params_; }

    /// Coefficient of the concave part (1 for the quartic).
    double theta0() const noexcept;

    double value(double r) const;
    double prime(double r) const;
    double second(double r) const;

    /// Upper bound of Psi'' over the states a resolved run visits; used to
    /// size the IMEX stabilization shift.
    double curvature_bound() const;

private:
    PhasePotential(PotentialKind k, PotentialParams p, RegPotential rp)
        : kind_(k), params_(p), reg_(rp) {}

    PotentialKind kind_;
    PotentialParams params_;
    RegPotential reg_;
};

} // namespace nsch
