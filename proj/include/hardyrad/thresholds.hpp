#pragma once

#include <limits>
#include <optional>

namespace hardyrad {

/// Structural constants of the problem: ellipticity bounds of the diffusion,
/// drift strength A (|V(x)| <= A/|x|), Hardy weight lambda and the data
/// domination constant Q (|f| <= Q a).
struct HypothesisSet {
    int dimension = 3;
    double alpha = 1.0;
    double beta = 1.0;
    double drift = 0.0;
    double lambda = 0.0;
    double q = 1.0;

    /// Throws DomainError naming the violated invariant.
    void validate() const;
};

/// Odd, continuous, strictly increasing h with h(s) -> +-inf:
/// h(s) = c |s|^{p-1} s, p >= 1 (p = 1 is the linear family).
struct Nonlinearity {
    enum class Kind { linear, odd_power };

    Kind kind = Kind::linear;
    double coefficient = 1.0;
    double exponent = 1.0;

    static Nonlinearity linear(double coefficient = 1.0);
    static Nonlinearity odd_power(double exponent, double coefficient = 1.0);

    double operator()(double s) const noexcept;
    void validate() const;
};

/// Root of F(m) = AH + lambda; `unbounded` when no finite root exists and
/// every m >= 2* is admissible.
struct MThreshold {
    bool unbounded = false;
    double value = std::numeric_limits<double>::infinity();

    bool is_finite() const noexcept { return !unbounded; }
};

struct ThresholdResult {
    double hardy = 0.0;
    double sobolev_exponent = 0.0;
    MThreshold m_threshold;
    double f_at_2star = 0.0;
    bool existence_ok = false;
};

struct EstimateConstants {
    double s = 0.0;        ///< test-function power, m = 2*(s/2 + 1)
    double c_lin = 0.0;    ///< coercivity constant of the L^m estimate (any sign)
    /// L^m bound prefactor; empty when c_lin <= 0 (no bound at this m).
    std::optional<double> c_bound;
};

struct Truncation {
    double t_k = 0.0; ///< max(-k, min(t, k))
    double g_k = 0.0; ///< t - T_k(t)
};

/// H = (N-2)/2.
double hardy_constant(int dimension);
/// 2* = 2N/(N-2).
double sobolev_exponent(int dimension);

/// F(t) = alpha H N/t (2 - 2*/t) + A H (2*/t - 1) on [2*, inf).
double eval_F(double t, const HypothesisSet& hyp);

/// Bisection for F(m) = AH + lambda; F is strictly decreasing so the root is
/// bracketed by doubling from 2*. Throws HypothesisError when
/// AH + lambda >= alpha H^2.
MThreshold solve_m_threshold(const HypothesisSet& hyp);

/// alpha H^2 > A H + lambda.
bool check_existence(const HypothesisSet& hyp);

/// Both forms of the existence test: the direct inequality and
/// alpha H^2 > F(m_threshold). They coincide analytically; `agree` reports
/// whether they did numerically.
struct ExistenceCrossCheck {
    bool direct = false;
    bool via_threshold = false;
    bool agree = true;
};
ExistenceCrossCheck cross_check_existence(const HypothesisSet& hyp);

ThresholdResult analyze_thresholds(const HypothesisSet& hyp);

/// Constants of the L^m a priori estimate at exponent m >= 2*.
/// `sobolev` is the Sobolev embedding constant S (default 1: only the sign of
/// c_lin drives any decision).
EstimateConstants lm_estimate_constant(const HypothesisSet& hyp, double m,
                                       double sobolev, const Nonlinearity& h);

/// k0 = h^{-1}(Q), the level above which |h(s)| > Q.
double compute_k0(const Nonlinearity& h, double q);

Truncation truncate(double t, double k);

} // namespace hardyrad
