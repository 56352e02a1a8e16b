#include "hardyrad/manufactured.hpp"

#include "hardyrad/errors.hpp"
#include "hardyrad/thresholds.hpp"

#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>

namespace hardyrad {

namespace {

__extension__ typedef __int128 i128;

// Small exact rational; any overflow of the reduced form gives up.
struct Ratio {
    i128 p = 0;
    i128 q = 1;
};

std::optional<Ratio> make_ratio(i128 p, i128 q)
{
    if (q == 0) return std::nullopt;
    if (q < 0) {
        p = -p;
        q = -q;
    }
    i128 a = p < 0 ? -p : p;
    i128 b = q;
    while (b != 0) {
        const i128 t = a % b;
        a = b;
        b = t;
    }
    if (a > 1) {
        p /= a;
        q /= a;
    }
    constexpr i128 limit = i128(1) << 62;
    if (p > limit || -p > limit || q > limit) return std::nullopt;
    return Ratio{p, q};
}

using R = std::optional<Ratio>;
R operator+(R a, R b) { return a && b ? make_ratio(a->p * b->q + b->p * a->q, a->q * b->q) : std::nullopt; }
R operator-(R a, R b) { return a && b ? make_ratio(a->p * b->q - b->p * a->q, a->q * b->q) : std::nullopt; }
R operator*(R a, R b) { return a && b ? make_ratio(a->p * b->p, a->q * b->q) : std::nullopt; }
R operator/(R a, R b) { return a && b ? make_ratio(a->p * b->q, a->q * b->p) : std::nullopt; }

R integral(double x)
{
    if (!(std::abs(x) <= 1e9) || x != std::floor(x)) return std::nullopt;
    return make_ratio(static_cast<i128>(x), 1);
}

double to_double(const Ratio& r)
{
    return static_cast<double>(static_cast<long long>(r.p)) / static_cast<double>(static_cast<long long>(r.q));
}

// Integer inputs: evaluate in exact arithmetic so every field is the
// correctly rounded value of its fraction.
void refine_exactly(ExampleCoefficients& out, double alpha, double lambda, int dimension, double m)
{
    const R al = integral(alpha);
    const R la = integral(lambda);
    const R mm = integral(m);
    const R n = make_ratio(dimension, 1);
    const R one = make_ratio(1, 1);
    const R two = make_ratio(2, 1);
    const R H = make_ratio(dimension - 2, 2);
    const R s2 = make_ratio(2 * dimension, dimension - 2);
    const R rho = n / mm;
    const R f = al * H * rho * (two - s2 / mm) + H * (s2 / mm - one);
    const R c = rho * (al + one) * (n - rho - two) + rho / two - make_ratio(3, 2) * (n - two);
    const R a = la - c + f;
    const R src = f + c - n + two;
    const R q = src / a;
    if (!(rho && f && c && a && src && q)) return;
    out.rho = to_double(*rho);
    out.f_at_m = to_double(*f);
    out.c = to_double(*c);
    out.a_coefficient = to_double(*a);
    out.f_coefficient = to_double(*src);
    out.q_bound = to_double(*q);
}

} // namespace

bool power_sum_in_h1(const PowerSum& u, int dimension)
{
    const double limit = -(dimension - 2.0) / 2.0;
    for (const PowerTerm& t : u.terms()) {
        if (t.exponent != 0.0 && !(t.exponent > limit)) return false;
    }
    return true;
}

ExactField exact_u_rho(double rho, int dimension)
{
    if (!std::isfinite(rho)) throw DomainError("rho must be finite");
    PowerSum u = PowerSum::monomial(1.0, -rho) - PowerSum::constant(1.0);
    const bool ok = rho > 0.0 && power_sum_in_h1(u, dimension);
    return {std::move(u), ok};
}

ExampleCoefficients optimality_example_coefficients(double alpha, double lambda, int dimension,
                                                    double m)
{
    HypothesisSet hyp;
    hyp.dimension = dimension;
    hyp.alpha = alpha;
    hyp.beta = alpha;
    hyp.drift = 1.0;
    hyp.lambda = lambda;
    hyp.validate();
    const double s2 = sobolev_exponent(dimension);
    if (!(m > s2)) throw DomainError("example requires m > 2*");

    const double n = dimension;
    const double H = hardy_constant(dimension);
    ExampleCoefficients out;
    out.rho = n / m;
    out.f_at_m = eval_F(m, hyp);
    const double target = hyp.drift * H + lambda;
    if (!(out.f_at_m < target)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "example inapplicable: F(m) = " << out.f_at_m << " >= A*H + lambda = " << target;
        throw HypothesisError(msg.str());
    }
    const double rho = out.rho;
    out.c = rho * (alpha + 1.0) * (n - rho - 2.0) + rho / 2.0 - 1.5 * (n - 2.0);
    out.a_coefficient = lambda - out.c + out.f_at_m;
    out.f_coefficient = out.f_at_m + out.c - n + 2.0;
    out.q_bound = out.f_coefficient / out.a_coefficient;
    refine_exactly(out, alpha, lambda, dimension, m);
    out.q_bound_positive = out.q_bound > 0.0;
    return out;
}

ProblemSpec kl_problem(double rho, int dimension)
{
    ProblemSpec spec;
    spec.hyp.dimension = dimension;
    spec.hyp.alpha = 1.0;
    spec.hyp.beta = 1.0;
    spec.hyp.drift = std::abs(rho);
    spec.hyp.lambda = 0.0;
    spec.hyp.q = 1.0;
    spec.diffusion = PowerSum::constant(1.0);
    spec.drift = -rho;
    spec.source = PowerSum::monomial(rho * (dimension - 2.0), -2.0);
    spec.zero_order = false;
    return spec;
}

ProblemSpec sz_problem(double alpha, double lambda, int dimension, double m)
{
    const ExampleCoefficients c = optimality_example_coefficients(alpha, lambda, dimension, m);
    ProblemSpec spec;
    spec.hyp.dimension = dimension;
    // The printed operator is -Delta, so the realised diffusion is 1 whatever alpha is.
    spec.hyp.alpha = 1.0;
    spec.hyp.beta = 1.0;
    spec.hyp.drift = 1.0;
    spec.hyp.lambda = lambda;
    spec.hyp.q = c.q_bound_positive ? c.q_bound : 1.0;
    spec.diffusion = PowerSum::constant(1.0);
    spec.drift = 1.0;
    spec.weight = PowerSum::monomial(c.a_coefficient, -2.0);
    spec.source = PowerSum::monomial(c.f_coefficient, -2.0);
    spec.h = Nonlinearity::linear();
    spec.zero_order = true;
    return spec;
}

std::vector<double> weak_residual(const PowerSum& u, const ProblemSpec& spec, const RadialMesh& mesh)
{
    if (mesh.dimension() != spec.hyp.dimension) throw DomainError("mesh dimension differs from N");
    const PowerSum du = u.derivative();
    const double p = mesh.dimension() - 1.0;
    const double omega = mesh.sphere_area();
    const double lambda = spec.hyp.lambda;
    const std::size_t free = mesh.node_count() - 1;
    std::vector<double> res(free, 0.0);
    mesh.for_each_point([&](std::size_t e, double r, double w, double xi) {
        const double uv = u(r);
        const double flux = spec.diffusion(r) * du(r) - spec.drift * uv / r;
        double value = -lambda * uv / (r * r) - spec.source(r);
        if (spec.zero_order) value += spec.weight(r) * spec.h(uv);
        const double vol = omega * w * std::pow(r, p);
        const double dphi = 1.0 / mesh.element_length(e);
        res[e] += vol * (value * (1.0 - xi) - flux * dphi);
        if (e + 1 < free) res[e + 1] += vol * (value * xi + flux * dphi);
    });
    return res;
}

double residual_norm(const PowerSum& u, const ProblemSpec& spec, const RadialMesh& mesh)
{
    return dual_norm(mesh, weak_residual(u, spec, mesh));
}

PowerSum mms_source(const PowerSum& u, const ProblemSpec& spec)
{
    const double k = spec.hyp.dimension - 1.0;
    const PowerSum flux = spec.diffusion * u.derivative() - spec.drift * u.times_power(-1.0);
    PowerSum f = -flux.times_power(k).derivative().times_power(-k);
    f = f - spec.hyp.lambda * u.times_power(-2.0);
    if (spec.zero_order && !spec.weight.is_zero() && !u.is_zero()) {
        const Nonlinearity& h = spec.h;
        PowerSum hu;
        if (h.kind == Nonlinearity::Kind::linear) {
            hu = h.coefficient * u;
        } else {
            const double p = h.exponent;
            const bool odd_integer = p == std::floor(p) && std::fmod(p, 2.0) == 1.0 && p <= 64.0;
            if (!odd_integer) {
                throw UnsupportedFormError("h(u) = |u|^{p-1} u with non-odd-integer p is not a power sum");
            }
            hu = h.coefficient * u.pow(static_cast<int>(p));
        }
        f = f + spec.weight * hu;
    }
    return f;
}

} // namespace hardyrad
