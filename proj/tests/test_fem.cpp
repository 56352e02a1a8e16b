#include <doctest.h>

#include "hardyrad/errors.hpp"
#include "hardyrad/fem.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace hardyrad;

namespace {

constexpr double pi = std::numbers::pi;

ProblemSpec poisson()
{
    ProblemSpec s;
    s.source = PowerSum::constant(1.0);
    return s;
}

ProblemSpec busy_spec()
{
    ProblemSpec s;
    s.hyp.alpha = 2.0;
    s.hyp.beta = 3.0;
    s.hyp.drift = 0.4;
    s.hyp.lambda = 0.05;
    s.diffusion = PowerSum::constant(2.0) + PowerSum::monomial(1.0, 2.0);
    s.drift = -0.4;
    s.source = PowerSum::monomial(1.0, -1.5) + PowerSum::constant(3.0);
    s.weight = PowerSum::monomial(2.0, -1.5) + PowerSum::constant(3.0);
    s.zero_order = true;
    return s;
}

double dot(const std::vector<double>& a, const std::vector<double>& b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

std::vector<double> free_values(const DiscreteField& f)
{
    return {f.values().begin(), f.values().end() - 1};
}

} // namespace

TEST_CASE("stiffness of a uniform two-element mesh")
{
    const RadialMesh m = RadialMesh::build(2, 1.0, 3);
    const Tridiagonal k = assemble_stiffness(m);
    REQUIRE(k.size() == 2);
    // int_0^{1/2} 4 r^2 = 1/6, int_{1/2}^1 4 r^2 = 7/6
    CHECK(k.diag[0] == doctest::Approx(4 * pi / 6));
    CHECK(k.upper[0] == doctest::Approx(-4 * pi / 6));
    CHECK(k.lower[0] == doctest::Approx(-4 * pi / 6));
    CHECK(k.diag[1] == doctest::Approx(4 * pi * 8 / 6));

    const Tridiagonal mass = assemble_mass(m, 0.0);
    // int_0^{1/2} (1 - 2r)^2 r^2 dr = 1/240
    CHECK(mass.diag[0] == doctest::Approx(4 * pi / 240));
}

TEST_CASE("regularised coefficients")
{
    ProblemSpec s = poisson();
    s.source = PowerSum::constant(10.0);
    CHECK(regularize(s, 5.0, TruncationMode::hard).source(0.3) == doctest::Approx(10.0 / 3.0));

    s.hyp.drift = 1.0;
    s.drift = 1.0;
    CHECK(regularize(s, 10.0, TruncationMode::hard).drift(0.1) == doctest::Approx(5.0));
    CHECK(unregularized(s).drift(0.1) == doctest::Approx(10.0));
    CHECK(regularize(s, 10.0, TruncationMode::hard).kernel(0.0) == doctest::Approx(10.0));

    s.zero_order = true;
    s.weight = PowerSum::constant(4.0);
    s.hyp.q = 2.0;
    CHECK(regularize(s, 8.0, TruncationMode::hard).weight(0.5) == doctest::Approx(4.0 / 2.0));
    s.zero_order = false;
    CHECK(regularize(s, 8.0, TruncationMode::hard).weight(0.5) == 0.0);

    const RegularizedProblem hard = regularize(s, 2.0, TruncationMode::hard);
    CHECK(hard.convected(5.0) == 2.0);
    CHECK(hard.convected(-5.0) == -2.0);
    CHECK(hard.convected(1.5) == 1.5);
    CHECK(hard.potential(7.0) == 2.0);
    const RegularizedProblem rat = regularize(s, 2.0, TruncationMode::rational);
    CHECK(rat.convected(5.0) == doctest::Approx(5.0 / 3.5));
    CHECK(rat.potential(7.0) == 7.0);
    CHECK(unregularized(s).convected(1e9) == 1e9);

    CHECK_THROWS_AS(regularize(s, 0.5, TruncationMode::hard), DomainError);
}

TEST_CASE("hard truncation saturates the convection load")
{
    ProblemSpec s = poisson();
    s.source = PowerSum();
    s.hyp.drift = 1.0;
    s.drift = 1.0;
    const RadialMesh m = RadialMesh::build(8, 1.0, 3);
    std::vector<double> high(m.node_count(), 50.0);
    std::vector<double> higher(m.node_count(), 80.0);
    // elements away from the boundary see only saturated values
    high.back() = higher.back() = 0.0;
    high[7] = higher[7] = 0.0;
    const Assembler a(regularize(s, 3.0, TruncationMode::hard), m);
    const auto b1 = a.load(DiscreteField(m, high));
    const auto b2 = a.load(DiscreteField(m, higher));
    for (std::size_t i = 0; i + 2 < b1.size(); ++i) CHECK(b1[i] == doctest::Approx(b2[i]));
}

TEST_CASE("zero data gives a zero right-hand side")
{
    ProblemSpec s = busy_spec();
    s.source = PowerSum();
    const RadialMesh m = RadialMesh::build(20, 0.7, 3);
    const LinearSystem sys = assemble(regularize(s, 100.0, TruncationMode::hard), m, DiscreteField::zero(m));
    for (double b : sys.rhs) CHECK(b == 0.0);
    CHECK(solve_linear(sys).max_abs() == 0.0);
}

TEST_CASE("linear solves")
{
    Tridiagonal one(1);
    one.diag[0] = 4.0;
    const std::vector<double> b{2.0};
    CHECK(solve_tridiagonal(one, b)[0] == 0.5);

    Tridiagonal sing(2);
    sing.diag = {1.0, 1.0};
    sing.upper = {1.0};
    sing.lower = {1.0};
    const std::vector<double> rhs{1.0, 1.0};
    CHECK_THROWS_AS(solve_tridiagonal(sing, rhs), SingularSystemError);

    const RadialMesh m = RadialMesh::build(300, 0.9, 3);
    const LinearSystem sys = assemble(regularize(busy_spec(), 1e3, TruncationMode::hard), m,
                                      DiscreteField::zero(m));
    const DiscreteField x = solve_linear(sys);
    const std::vector<double> ax = sys.matrix.apply(free_values(x));
    double res = 0.0;
    double bn = 0.0;
    for (std::size_t i = 0; i < ax.size(); ++i) {
        res = std::max(res, std::abs(ax[i] - sys.rhs[i]));
        bn = std::max(bn, std::abs(sys.rhs[i]));
    }
    CHECK(res <= 1e-12 * (sys.matrix.norm_inf() * x.max_abs() + bn));
}

TEST_CASE("Poisson through one linear solve")
{
    const RadialMesh m = RadialMesh::build(400, 0.99, 3);
    const DiscreteField u = solve_linear(assemble(unregularized(poisson()), m, DiscreteField::zero(m)));
    CHECK(u[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-4));
    CHECK(u.value_at(0.5) == doctest::Approx(0.75 / 6.0).epsilon(1e-4));
}

TEST_CASE("dual norm of K u is the H1 seminorm of u")
{
    const RadialMesh m = RadialMesh::build(50, 0.8, 3);
    const DiscreteField u = interpolate([](double r) { return std::cos(r * pi / 2); }, m);
    const auto ku = assemble_stiffness(m).apply(free_values(u));
    CHECK(dual_norm(m, ku) == doctest::Approx(h1_seminorm(u)).epsilon(1e-10));
}

TEST_CASE("spec validation")
{
    ProblemSpec s = busy_spec();
    CHECK_NOTHROW(s.validate());
    const RadialMesh m = RadialMesh::build(30, 0.8, 3);
    CHECK_NOTHROW(s.validate_on(m));
    CHECK(s.dominated_on(m));

    ProblemSpec fast = s;
    fast.drift = 0.5;
    CHECK_THROWS_AS(fast.validate(), DomainError);
    ProblemSpec soft = s;
    soft.diffusion = PowerSum::constant(1.0);
    CHECK_THROWS_AS(soft.validate_on(m), DomainError);
    ProblemSpec heavy = s;
    heavy.weight = PowerSum::monomial(1.0, -3.0);
    CHECK_THROWS_AS(heavy.validate(), DomainError);
    ProblemSpec negative = s;
    negative.weight = PowerSum::constant(-1.0);
    CHECK_THROWS_AS(negative.validate_on(m), DomainError);
    ProblemSpec loud = s;
    loud.source = PowerSum::constant(100.0);
    CHECK_FALSE(loud.dominated_on(m));
}

TEST_CASE("property: ellipticity of the diffusion matrix")
{
    const ProblemSpec s = busy_spec();
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        const RadialMesh m = RadialMesh::build(10 + 7 * k, 0.5 + 0.01 * k, 3);
        const Tridiagonal kk = assemble_stiffness(m, [&](double r) { return s.diffusion(r); });
        std::vector<double> x(m.node_count(), 0.0);
        for (std::size_t i = 0; i + 1 < x.size(); ++i) x[i] = u(rng);
        const DiscreteField f(m, x);
        x.pop_back();
        const double energy = dot(x, kk.apply(x));
        const double semi = h1_seminorm(f);
        CHECK(energy > 0.0);
        CHECK(energy >= s.hyp.alpha * semi * semi * (1.0 - 1e-12));
    }
}

TEST_CASE("property: regularised loads converge as n grows")
{
    const ProblemSpec s = busy_spec();
    // away from the origin every damped coefficient is within O(1/n) of its limit
    const RadialMesh m = RadialMesh::build(200, 0.9, 3, 1e-2);
    const DiscreteField lagged = interpolate([](double r) { return 3.0 * (1.0 - r * r); }, m);
    const auto limit = Assembler(unregularized(s), m).load(lagged);
    std::vector<double> prev(limit.size(), std::numeric_limits<double>::infinity());
    for (TruncationMode mode : {TruncationMode::hard, TruncationMode::rational}) {
        std::fill(prev.begin(), prev.end(), std::numeric_limits<double>::infinity());
        for (double n : {1e2, 1e4, 1e8}) {
            const auto b = Assembler(regularize(s, n, mode), m).load(lagged);
            for (std::size_t i = 0; i < b.size(); ++i) {
                const double gap = std::abs(b[i] - limit[i]);
                CHECK(gap <= prev[i]);
                prev[i] = gap;
            }
        }
        double worst = 0.0;
        for (std::size_t i = 0; i < prev.size(); ++i) {
            worst = std::max(worst, prev[i] / std::max(1e-300, std::abs(limit[i])));
        }
        CHECK(worst < 1e-3);
    }
}

TEST_CASE("property: bilinear form on interpolants is second order")
{
    // omega int u' phi' r^2 with u = 1 - r^2, phi = 1 - r: omega/2.
    double prev_err = 0.0;
    RadialMesh m = RadialMesh::build(20, 1.0, 3);
    for (int level = 0; level < 4; ++level) {
        auto u = free_values(interpolate([](double r) { return 1.0 - r * r; }, m));
        auto phi = free_values(interpolate([](double r) { return 1.0 - r; }, m));
        const double err = std::abs(dot(phi, assemble_stiffness(m).apply(u)) - 2 * pi);
        if (level > 0) CHECK(std::log2(prev_err / err) == doctest::Approx(2.0).epsilon(0.05));
        prev_err = err;
        m = m.refined();
    }
}
