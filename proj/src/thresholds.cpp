#include "hardyrad/thresholds.hpp"

#include "hardyrad/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace hardyrad {

namespace {

void require_dimension(int dimension)
{
    if (dimension < 3) {
        throw DomainError("dimension N = " + std::to_string(dimension) +
                          " < 3: Hardy constant (N-2)/2 is not positive");
    }
}

// Bisection on a decreasing function g with g(lo) > 0 > g(hi); runs until
// the midpoint coincides with an endpoint.
template <class Fn>
double bisect_decreasing(Fn&& g, double lo, double hi)
{
    double g_lo = g(lo);
    double g_hi = g(hi);
    for (int it = 0; it < 2000; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double g_mid = g(mid);
        if (g_mid == 0.0) return mid;
        if (g_mid > 0.0) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
            g_hi = g_mid;
        }
    }
    return std::abs(g_lo) <= std::abs(g_hi) ? lo : hi;
}

} // namespace

void HypothesisSet::validate() const
{
    require_dimension(dimension);
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be positive");
    if (!(beta >= alpha) || !std::isfinite(beta)) throw DomainError("beta must satisfy beta >= alpha");
    if (!(drift >= 0.0) || !std::isfinite(drift)) throw DomainError("drift bound A must be nonnegative");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be nonnegative");
    if (!(q > 0.0) || !std::isfinite(q)) throw DomainError("Q must be positive");
}

Nonlinearity Nonlinearity::linear(double coefficient)
{
    return {Kind::linear, coefficient, 1.0};
}

Nonlinearity Nonlinearity::odd_power(double exponent, double coefficient)
{
    return {exponent == 1.0 ? Kind::linear : Kind::odd_power, coefficient, exponent};
}

double Nonlinearity::operator()(double s) const noexcept
{
    if (kind == Kind::linear) return coefficient * s;
    return coefficient * std::copysign(std::pow(std::abs(s), exponent), s);
}

void Nonlinearity::validate() const
{
    if (!(coefficient > 0.0) || !std::isfinite(coefficient)) {
        throw DomainError("invalid nonlinearity: coefficient must be positive");
    }
    if (kind == Kind::linear && exponent != 1.0) {
        throw DomainError("invalid nonlinearity: linear kind requires exponent 1");
    }
    if (!(exponent >= 1.0) || !std::isfinite(exponent)) {
        throw DomainError("invalid nonlinearity: exponent must be >= 1");
    }
}

double hardy_constant(int dimension)
{
    require_dimension(dimension);
    return (dimension - 2) / 2.0;
}

double sobolev_exponent(int dimension)
{
    require_dimension(dimension);
    return 2.0 * dimension / (dimension - 2.0);
}

double eval_F(double t, const HypothesisSet& hyp)
{
    const double H = hardy_constant(hyp.dimension);
    const double s2 = sobolev_exponent(hyp.dimension);
    if (!(t >= s2)) {
        throw DomainError("F is defined on [2*, inf); got t below 2*");
    }
    const double ratio = s2 / t;
    return hyp.alpha * H * (hyp.dimension / t) * (2.0 - ratio) + hyp.drift * H * (ratio - 1.0);
}

bool check_existence(const HypothesisSet& hyp)
{
    const double H = hardy_constant(hyp.dimension);
    return hyp.alpha * H * H > hyp.drift * H + hyp.lambda;
}

MThreshold solve_m_threshold(const HypothesisSet& hyp)
{
    hyp.validate();
    const double H = hardy_constant(hyp.dimension);
    const double s2 = sobolev_exponent(hyp.dimension);
    const double target = hyp.drift * H + hyp.lambda;
    const double top = hyp.alpha * H * H;
    if (!(target < top)) {
        std::ostringstream msg;
        msg << "existence hypothesis alpha*H^2 > A*H + lambda fails (" << top
            << " <= " << target << "): no threshold in (2*, inf)";
        throw HypothesisError(msg.str());
    }
    if (target == 0.0) return {true, std::numeric_limits<double>::infinity()};

    const auto g = [&](double t) { return eval_F(t, hyp) - target; };
    double hi = s2;
    bool bracketed = false;
    for (int j = 1; j <= 60; ++j) {
        hi = s2 * std::ldexp(1.0, j);
        if (g(hi) < 0.0) {
            bracketed = true;
            break;
        }
    }
    if (!bracketed) return {true, std::numeric_limits<double>::infinity()};
    const double lo = hi / 2.0;
    if (!(g(lo) > 0.0) && lo != s2) {
        throw std::logic_error("m-threshold bracketing failed");
    }
    return {false, bisect_decreasing(g, lo, hi)};
}

ExistenceCrossCheck cross_check_existence(const HypothesisSet& hyp)
{
    ExistenceCrossCheck out;
    out.direct = check_existence(hyp);
    const double H = hardy_constant(hyp.dimension);
    try {
        const MThreshold m = solve_m_threshold(hyp);
        const double f_at_root = m.is_finite() ? eval_F(m.value, hyp) : -hyp.drift * H;
        out.via_threshold = hyp.alpha * H * H > f_at_root;
    } catch (const HypothesisError&) {
        out.via_threshold = false;
    }
    out.agree = out.direct == out.via_threshold;
    return out;
}

ThresholdResult analyze_thresholds(const HypothesisSet& hyp)
{
    hyp.validate();
    ThresholdResult r;
    r.hardy = hardy_constant(hyp.dimension);
    r.sobolev_exponent = sobolev_exponent(hyp.dimension);
    r.f_at_2star = eval_F(r.sobolev_exponent, hyp);
    r.existence_ok = check_existence(hyp);
    if (r.existence_ok) r.m_threshold = solve_m_threshold(hyp);
    return r;
}

EstimateConstants lm_estimate_constant(const HypothesisSet& hyp, double m, double sobolev,
                                       const Nonlinearity& h)
{
    const double H = hardy_constant(hyp.dimension);
    const double s2 = sobolev_exponent(hyp.dimension);
    if (!(m >= s2)) throw DomainError("L^m estimate requires m >= 2*");
    if (!(sobolev > 0.0)) throw DomainError("Sobolev constant must be positive");

    EstimateConstants out;
    out.s = 2.0 * m / s2 - 2.0;
    const double cs = 4.0 / ((out.s + 2.0) * (out.s + 2.0));
    out.c_lin = cs * hyp.alpha * (out.s + 1.0) - std::sqrt(cs) * hyp.drift * (out.s + 1.0) / H -
                hyp.lambda / (H * H);
    if (out.c_lin > 0.0) {
        const double k0 = compute_k0(h, hyp.q);
        const double n = hyp.dimension;
        const double inner =
            hyp.q * std::pow(k0, m * (n - 2.0) / n - 1.0) * sobolev * sobolev / out.c_lin;
        out.c_bound = std::pow(inner, s2 / 2.0);
    }
    return out;
}

double compute_k0(const Nonlinearity& h, double q)
{
    h.validate();
    if (!(q > 0.0) || !std::isfinite(q)) throw DomainError("Q must be positive");
    double hi = 1.0;
    int doublings = 0;
    while (!(h(hi) >= q)) {
        hi *= 2.0;
        if (++doublings > 2000 || !std::isfinite(hi)) {
            throw DomainError("invalid nonlinearity: h stays below Q");
        }
    }
    return bisect_decreasing([&](double s) { return q - h(s); }, 0.0, hi);
}

Truncation truncate(double t, double k)
{
    if (!(k > 0.0)) throw DomainError("truncation level k must be positive");
    const double tk = std::clamp(t, -k, k);
    return {tk, t - tk};
}

} // namespace hardyrad
