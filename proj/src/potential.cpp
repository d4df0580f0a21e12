#include "nsch/potential.hpp"

#include "nsch/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace nsch {

namespace {

constexpr double kClampEdge = 1.0 - 1e-14;

template <class T>
T flory_huggins_convex(T r, T theta)
{
    // (1-r)ln(1-r) + (1+r)ln(1+r), with x ln x -> 0 at the endpoints
    const T one{1};
    const T a = (r >= one) ? T{0} : (one - r) * std::log1p(-r);
    const T b = (r <= -one) ? T{0} : (one + r) * std::log1p(r);
    return T{0.5} * theta * (a + b);
}

double guarded(double r, SingularGuard guard, const char* what)
{
    if (std::abs(r) < 1.0)
        return r;
    if (guard == SingularGuard::clamped)
        return std::clamp(r, -kClampEdge, kClampEdge);
    std::ostringstream os;
    os << what << ": argument " << r << " at or beyond the pure phases";
    throw SingularityError(os.str());
}

} // namespace

// ============================================================================
// PotentialParams
// ============================================================================
PotentialParams PotentialParams::flory_huggins(double theta, double theta_c)
{
    return PotentialParams{theta, theta_c, theta_c};
}

void PotentialParams::validate() const
{
    if (!(theta > 0.0) || !std::isfinite(theta))
        throw ParameterError("(H1): theta must be strictly positive");
    if (!std::isfinite(theta0) || !std::isfinite(theta_c))
        throw ParameterError("(H1): theta0 and theta_c must be finite");
}

void PotentialParams::validate_flory_huggins() const
{
    validate();
    if (!(theta < theta_c))
        throw ParameterError("(H1)/logarithmic potential: requires 0 < theta < theta_c");
    if (theta0 != theta_c)
        throw ParameterError("(H1)/logarithmic potential: concave coefficient theta0 must equal theta_c");
}

// ============================================================================
// Singular potential and its convex part
// ============================================================================
double psi_singular(double r, const PotentialParams& p)
{
    if (std::abs(r) > 1.0) {
        std::ostringstream os;
        os << "psi_singular: |r| = " << std::abs(r) << " > 1 (potential is +infinity there)";
        throw DomainError(os.str());
    }
    return flory_huggins_convex(r, p.theta) + 0.5 * p.theta_c * (1.0 - r * r);
}

double psi0(double r, const PotentialParams& p)
{
    if (std::abs(r) > 1.0)
        throw DomainError("psi0: |r| > 1");
    return flory_huggins_convex(r, p.theta);
}

double psi0_prime(double r, const PotentialParams& p, SingularGuard guard)
{
    return p.theta * std::atanh(guarded(r, guard, "psi0_prime"));
}

double psi0_second(double r, const PotentialParams& p, SingularGuard guard)
{
    const double x = guarded(r, guard, "psi0_second");
    return p.theta / ((1.0 - x) * (1.0 + x));
}

double psi_quartic(double r, QuarticVariant variant)
{
    if (variant == QuarticVariant::prime)
        return r * r * r - r;
    const double s = 1.0 - r * r;
    return 0.25 * s * s;
}

// ============================================================================
// RegPotential
// ============================================================================
RegPotential::RegPotential(PotentialParams base, double eps, double chi)
    : base_(base), eps_(eps), chi_(chi)
{
    base_.validate();
    if (!(eps > 0.0 && eps < 1.0))
        throw ParameterError("regularized potential: eps must lie in (0, 1)");
    if (!std::isfinite(chi))
        throw ParameterError("regularized potential: chi must be finite");

    inner_ = 1.0 - eps;
    d1_hi_ = psi0_prime(inner_, base_);
    d1_lo_ = psi0_prime(-inner_, base_);
    if (!(d1_hi_ >= 1.0 && d1_lo_ <= -1.0)) {
        std::ostringstream os;
        os << "regularized potential: eps = " << eps << " exceeds eps_1 (needs Psi_0'(1-eps) >= 1, got "
           << d1_hi_ << ")";
        throw ParameterError(os.str());
    }
    d2_hi_ = psi0_second(inner_, base_);
    d2_lo_ = psi0_second(-inner_, base_);
    psi_hi_ = psi0(inner_, base_);
    psi_lo_ = psi0(-inner_, base_);

    const double c = std::abs(chi) + 1.0;
    rate_ = 4.0 * c;
    log_factor_ = -8.0 * c - std::log(4.0 * c);
    offset_ = (4.0 * std::abs(chi) + 3.0) / (4.0 * c) + eps;

    const double span = 2.0 - inner_;
    at2_hi_ = psi_hi_ + d1_hi_ * span + 0.5 * d2_hi_ * span * span;
    at2_lo_ = psi_lo_ - d1_lo_ * span + 0.5 * d2_lo_ * span * span;
}

RegPotential::Branch RegPotential::branch_of(double r, double inner) noexcept
{
    if (r <= -2.0)
        return Branch::lower_exp;
    if (r < -inner)
        return Branch::lower_linear;
    if (r <= inner)
        return Branch::interior;
    if (r < 2.0)
        return Branch::upper_linear;
    return Branch::upper_exp;
}

template <class T>
T RegPotential::value0_impl(Branch b, T r) const
{
    const T lam = rate_;
    switch (b) {
    case Branch::interior:
        return flory_huggins_convex<T>(r, base_.theta);
    case Branch::upper_linear: {
        const T s = r - T(inner_);
        return T(psi_hi_) + T(d1_hi_) * s + T(0.5) * T(d2_hi_) * s * s;
    }
    case Branch::lower_linear: {
        const T s = r + T(inner_);
        return T(psi_lo_) + T(d1_lo_) * s + T(0.5) * T(d2_lo_) * s * s;
    }
    case Branch::upper_exp: {
        const T s = r - T(2);
        return T(at2_hi_) + (T(d1_hi_) + T(d2_hi_) * T(offset_)) * s + T(d2_hi_) * std::expm1(lam * s) / (lam * lam);
    }
    case Branch::lower_exp: {
        const T s = r + T(2);
        return T(at2_lo_) + (T(d1_lo_) - T(d2_lo_) * T(offset_)) * s + T(d2_lo_) * std::expm1(-lam * s) / (lam * lam);
    }
    }
    return T(0);
}

double RegPotential::value0_on(Branch b, double r) const { return value0_impl<double>(b, r); }

double RegPotential::prime0_on(Branch b, double r) const
{
    switch (b) {
    case Branch::interior:
        return base_.theta * std::atanh(r);
    case Branch::upper_linear:
        return d1_hi_ + d2_hi_ * (r - inner_);
    case Branch::lower_linear:
        return d1_lo_ + d2_lo_ * (r + inner_);
    case Branch::upper_exp:
        return d1_hi_ + d2_hi_ * offset_ + d2_hi_ * std::exp(rate_ * r + log_factor_);
    case Branch::lower_exp:
        return d1_lo_ - d2_lo_ * offset_ - d2_lo_ * std::exp(-rate_ * r + log_factor_);
    }
    return 0.0;
}

double RegPotential::second0_on(Branch b, double r) const
{
    switch (b) {
    case Branch::interior:
        return base_.theta / ((1.0 - r) * (1.0 + r));
    case Branch::upper_linear:
        return d2_hi_;
    case Branch::lower_linear:
        return d2_lo_;
    case Branch::upper_exp:
        return d2_hi_ * std::exp(rate_ * (r - 2.0));
    case Branch::lower_exp:
        return d2_lo_ * std::exp(-rate_ * (r + 2.0));
    }
    return 0.0;
}

double RegPotential::value0(double r) const { return value0_on(branch_of(r), r); }
double RegPotential::prime0(double r) const { return prime0_on(branch_of(r), r); }
double RegPotential::second0(double r) const { return second0_on(branch_of(r), r); }

long double RegPotential::value0_extended(long double r) const
{
    return value0_impl<long double>(branch_of(static_cast<double>(r)), r);
}

KnotJumps knot_jumps(const RegPotential& rp)
{
    using B = RegPotential::Branch;
    const auto k = rp.knots();
    const std::array<std::pair<B, B>, 4> sides{{{B::lower_exp, B::lower_linear},
                                                {B::lower_linear, B::interior},
                                                {B::interior, B::upper_linear},
                                                {B::upper_linear, B::upper_exp}}};
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); };

    KnotJumps out;
    for (std::size_t i = 0; i < k.size(); ++i) {
        const auto [left, right] = sides[i];
        out.value = std::max(out.value, rel(rp.prime0_on(left, k[i]), rp.prime0_on(right, k[i])));
        out.derivative = std::max(out.derivative, rel(rp.second0_on(left, k[i]), rp.second0_on(right, k[i])));
    }
    return out;
}

// ============================================================================
// Generalized Young inequality
// ============================================================================
double young_f(double a)
{
    if (a < 0.0)
        throw DomainError("young_f: a must be nonnegative");
    return std::expm1(a) - a;
}

double young_g(double b)
{
    if (b < 0.0)
        throw DomainError("young_g: b must be nonnegative");
    return (b + 1.0) * std::log1p(b) - b;
}

double young_gap(double a, double b) { return young_f(a) + young_g(b) - a * b; }

// ============================================================================
// Coercivity thresholds
// ============================================================================
namespace {

long double deficit_ld(long double r, const RegPotential& rp, CoercivityTarget target)
{
    const long double chi = std::abs(rp.chi());
    const long double R = std::abs(r);
    long double env;
    if (target == CoercivityTarget::entropy)
        env = std::exp((2 * chi + 1) * R) + rp.theta0() * r * r + 2 * chi * R + 1;
    else
        env = std::exp((4 * chi + 1) * R) + rp.theta0() * r * r + 4 * chi * R;
    const long double psi = rp.value0_extended(r);
    if (std::isinf(psi) && std::isinf(env))
        return std::numeric_limits<long double>::infinity(); // exponential branch rate dominates
    return psi - env;
}

} // namespace

double coercivity_deficit(double r, const RegPotential& rp, CoercivityTarget target)
{
    return static_cast<double>(deficit_ld(r, rp, target));
}

double find_r_star(const RegPotential& rp, RStarSide side, CoercivityTarget target, const RStarOptions& opts)
{
    if (!(opts.horizon > 2.0) || !(opts.scan_step > 0.0) || !(opts.tolerance > 0.0))
        throw ParameterError("find_r_star: invalid search options");

    const long double sign = side == RStarSide::upper ? 1.0L : -1.0L;
    auto deficit = [&](long double s) { return deficit_ld(sign * s, rp, target); };

    // distances s >= 2 from the origin on the requested side
    if (deficit(opts.horizon) < 0) {
        std::ostringstream os;
        os << "find_r_star: coercivity deficit still negative at |r| = " << opts.horizon;
        throw CoercivityError(os.str());
    }
    const long n = static_cast<long>(std::ceil((opts.horizon - 2.0) / opts.scan_step));
    long last_negative = -1;
    for (long i = 0; i <= n; ++i) {
        const long double s = std::min<long double>(2.0L + i * static_cast<long double>(opts.scan_step), opts.horizon);
        if (deficit(s) < 0)
            last_negative = i;
    }
    if (last_negative < 0)
        return static_cast<double>(sign * 2.0L);

    long double lo = 2.0L + last_negative * static_cast<long double>(opts.scan_step);
    long double hi = std::min<long double>(lo + opts.scan_step, opts.horizon);
    while (hi - lo > opts.tolerance) {
        const long double mid = 0.5L * (lo + hi);
        if (deficit(mid) < 0)
            lo = mid;
        else
            hi = mid;
    }
    return static_cast<double>(sign * hi);
}

double mixed_lower_bound(double phi, double sigma, const RegPotential& rp)
{
    const double entropy = sigma > 0.0 ? sigma * (std::log(sigma) - 1.0) : 0.0;
    return 0.5 * rp.value0(phi) - 0.5 * rp.theta0() * phi * phi + 0.5 * entropy
           - std::abs(rp.chi()) * sigma * std::abs(phi);
}

// ============================================================================
// PhasePotential
// ============================================================================
namespace {
const RegPotential& placeholder_reg()
{
    static const RegPotential rp(PotentialParams::flory_huggins(1.0, 2.0), 0.05, 0.0);
    return rp;
}
} // namespace

PhasePotential PhasePotential::regularized(const RegPotential& rp)
{
    return PhasePotential(PotentialKind::regularized, rp.base(), rp);
}

PhasePotential PhasePotential::quartic()
{
    return PhasePotential(PotentialKind::quartic, PotentialParams{1.0, 1.0, 1.0}, placeholder_reg());
}

PhasePotential PhasePotential::singular(const PotentialParams& p)
{
    p.validate();
    return PhasePotential(PotentialKind::singular, p, placeholder_reg());
}

double PhasePotential::theta0() const noexcept
{
    return kind_ == PotentialKind::quartic ? 1.0 : params_.theta0;
}

double PhasePotential::value(double r) const
{
    switch (kind_) {
    case PotentialKind::regularized:
        return reg_.value(r);
    case PotentialKind::quartic:
        return psi_quartic(r, QuarticVariant::value);
    case PotentialKind::singular:
        return psi_singular(r, params_);
    }
    return 0.0;
}

double PhasePotential::prime(double r) const
{
    switch (kind_) {
    case PotentialKind::regularized:
        return reg_.prime(r);
    case PotentialKind::quartic:
        return psi_quartic(r, QuarticVariant::prime);
    case PotentialKind::singular:
        return psi0_prime(r, params_) - params_.theta0 * r;
    }
    return 0.0;
}

double PhasePotential::second(double r) const
{
    switch (kind_) {
    case PotentialKind::regularized:
        return reg_.second(r);
    case PotentialKind::quartic:
        return 3.0 * r * r - 1.0;
    case PotentialKind::singular:
        return psi0_second(r, params_) - params_.theta0;
    }
    return 0.0;
}

double PhasePotential::curvature_bound() const
{
    switch (kind_) {
    case PotentialKind::regularized: {
        const double edge = 1.0 - reg_.eps();
        return std::max(reg_.second0(edge), reg_.second0(-edge)) - reg_.theta0();
    }
    case PotentialKind::quartic:
        return 2.0;
    case PotentialKind::singular:
        return psi0_second(0.95, params_) - params_.theta0;
    }
    return 0.0;
}

} // namespace nsch
