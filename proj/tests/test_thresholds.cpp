#include <doctest.h>

#include "hardyrad/errors.hpp"
#include "hardyrad/thresholds.hpp"

#include <cmath>
#include <limits>
#include <random>

using namespace hardyrad;

namespace {

HypothesisSet hyp(double alpha, double drift, double lambda, int n = 3)
{
    HypothesisSet h;
    h.dimension = n;
    h.alpha = alpha;
    h.beta = alpha;
    h.drift = drift;
    h.lambda = lambda;
    return h;
}

// F expanded as a quadratic in x = 1/t.
double f_oracle(double t, const HypothesisSet& h)
{
    const double n = h.dimension;
    const double H = (n - 2.0) / 2.0;
    const double s2 = 2.0 * n / (n - 2.0);
    const double x = 1.0 / t;
    return 2.0 * h.alpha * H * n * x - h.alpha * H * n * s2 * x * x + h.drift * H * s2 * x - h.drift * H;
}

// Printed example curve for alpha = 7, A = 1, N = 3.
double figure_curve(double m)
{
    return 21.0 / m * (1.0 - 3.0 / m) + 0.5 * (6.0 / m - 1.0);
}

struct Draw {
    HypothesisSet h;
    double m;
};

Draw random_draw(std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> dim(3, 8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Draw d;
    d.h = hyp(0.1 + 9.9 * u(rng), 5.0 * u(rng), 5.0 * u(rng), dim(rng));
    d.m = sobolev_exponent(d.h.dimension) * (1.0 + 4.0 * u(rng));
    return d;
}

} // namespace

TEST_CASE("hardy constant and critical exponent")
{
    CHECK(hardy_constant(3) == 0.5);
    CHECK(hardy_constant(4) == 1.0);
    CHECK_THROWS_AS(hardy_constant(2), DomainError);
    CHECK(sobolev_exponent(3) == 6.0);
    CHECK(sobolev_exponent(4) == 4.0);
    CHECK(sobolev_exponent(6) == 3.0);
    CHECK_THROWS_AS(sobolev_exponent(1), DomainError);
}

TEST_CASE("hypothesis set invariants")
{
    CHECK_NOTHROW(hyp(1, 0, 0).validate());
    HypothesisSet h = hyp(2, 0, 0);
    h.beta = 1.0;
    CHECK_THROWS_AS(h.validate(), DomainError);
    CHECK_THROWS_AS(hyp(1, -1, 0).validate(), DomainError);
    CHECK_THROWS_AS(hyp(1, 0, -1).validate(), DomainError);
    h = hyp(1, 0, 0);
    h.q = 0.0;
    CHECK_THROWS_AS(h.validate(), DomainError);
}

TEST_CASE("threshold function at the printed example")
{
    const HypothesisSet h = hyp(7, 1, 1);
    CHECK(std::abs(eval_F(6.0, h) - 1.75) <= 1e-12);
    CHECK(std::abs(eval_F(9.0, h) - 25.0 / 18.0) <= 1e-12);
    CHECK(std::abs(eval_F(1e9, h) + 0.5) <= 1e-6);
    for (double m = 6.0; m < 30.0; m += 0.37) CHECK(std::abs(eval_F(m, h) - figure_curve(m)) <= 1e-12);
    CHECK_THROWS_AS(eval_F(5.9, h), DomainError);
}

TEST_CASE("threshold root")
{
    // F(m) = 3/2 reduces to 2m^2 - 24m + 63 = 0.
    const double quad = (24.0 + std::sqrt(24.0 * 24.0 - 8.0 * 63.0)) / 4.0;
    const MThreshold m = solve_m_threshold(hyp(7, 1, 1));
    REQUIRE(m.is_finite());
    CHECK(std::abs(m.value - quad) <= 1e-9);
    CHECK(std::abs(m.value - (6.0 + 1.5 * std::sqrt(2.0))) <= 1e-9);

    CHECK(solve_m_threshold(hyp(1, 0, 0, 4)).unbounded);
    CHECK_THROWS_AS(solve_m_threshold(hyp(1, 1, 0)), HypothesisError);

    // Target just under alpha H^2 pushes the root onto 2*. With A = 0 the
    // curve is flat at 2*, so the distance shrinks like sqrt(eps).
    double prev = std::numeric_limits<double>::infinity();
    for (double eps : {1e-3, 1e-6, 1e-9, 1e-12}) {
        const double gap = solve_m_threshold(hyp(1, 0, 0.25 - eps)).value - 6.0;
        CHECK(gap > 0.0);
        CHECK(gap < prev);
        CHECK(gap < 20.0 * std::sqrt(eps));
        prev = gap;
    }
}

TEST_CASE("existence condition examples")
{
    CHECK(check_existence(hyp(1, 0, 0)));
    CHECK(check_existence(hyp(7, 1, 1)));
    CHECK_FALSE(check_existence(hyp(1, 1, 0)));
    const ExistenceCrossCheck c = cross_check_existence(hyp(7, 1, 1));
    CHECK(c.direct);
    CHECK(c.via_threshold);
    CHECK(c.agree);
}

TEST_CASE("L^m estimate constants")
{
    const Nonlinearity lin = Nonlinearity::linear();
    const HypothesisSet h = hyp(7, 1, 1);
    const EstimateConstants at2 = lm_estimate_constant(h, 6.0, 1.0, lin);
    CHECK(at2.s == doctest::Approx(0.0));
    CHECK(at2.c_lin == doctest::Approx(7.0 - 1.0 / 0.5 - 1.0 / 0.25));
    REQUIRE(at2.c_bound);

    CHECK(lm_estimate_constant(h, 7.0, 1.0, lin).c_lin > 0.0);
    // F(9) = 25/18 < 3/2: no bound at m = 9.
    const EstimateConstants at9 = lm_estimate_constant(h, 9.0, 1.0, lin);
    CHECK(at9.c_lin <= 0.0);
    CHECK_FALSE(at9.c_bound);
    CHECK_THROWS_AS(lm_estimate_constant(h, 5.0, 1.0, lin), DomainError);
}

TEST_CASE("k0 and truncation examples")
{
    CHECK(compute_k0(Nonlinearity::linear(), 3.0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(compute_k0(Nonlinearity::odd_power(3.0), 8.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS(compute_k0(Nonlinearity::linear(), 0.0), DomainError);

    Truncation t = truncate(5.0, 2.0);
    CHECK(t.t_k == 2.0);
    CHECK(t.g_k == 3.0);
    t = truncate(-5.0, 2.0);
    CHECK(t.t_k == -2.0);
    CHECK(t.g_k == -3.0);
    t = truncate(1.0, 2.0);
    CHECK(t.t_k == 1.0);
    CHECK(t.g_k == 0.0);
    CHECK_THROWS_AS(truncate(1.0, 0.0), DomainError);
}

TEST_CASE("nonlinearity family")
{
    const Nonlinearity cube = Nonlinearity::odd_power(3.0, 2.0);
    CHECK(cube(-2.0) == doctest::Approx(-16.0));
    CHECK(cube(0.0) == 0.0);
    CHECK_THROWS_AS(Nonlinearity::odd_power(0.5).validate(), DomainError);
    CHECK_THROWS_AS(Nonlinearity::linear(-1.0).validate(), DomainError);
}

TEST_CASE("property: F strictly decreasing, endpoint, tail and root")
{
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int roots = 0;
    for (int k = 0; k < 1000; ++k) {
        const Draw d = random_draw(rng);
        const HypothesisSet& h = d.h;
        const double H = hardy_constant(h.dimension);
        const double s2 = sobolev_exponent(h.dimension);
        double prev = eval_F(s2, h);
        CHECK(std::abs(prev - h.alpha * H * H) <= 1e-12 * std::max(1.0, h.alpha * H * H));
        for (int j = 1; j <= 40; ++j) {
            const double t = s2 * std::pow(1.25, j);
            const double f = eval_F(t, h);
            CHECK(f < prev);
            CHECK(std::abs(f - f_oracle(t, h)) <= 1e-12 * std::max(1.0, std::abs(f)));
            prev = f;
        }
        CHECK(std::abs(eval_F(1e9, h) + h.drift * H) <= 1e-6 * (1.0 + h.drift * H));

        const double target = h.drift * H + h.lambda;
        if (target < h.alpha * H * H) {
            const MThreshold m = solve_m_threshold(h);
            if (m.is_finite()) {
                ++roots;
                CHECK(std::abs(eval_F(m.value, h) - target) <= 1e-10);
                CHECK(m.value > s2);
            }
        } else {
            CHECK_THROWS_AS(solve_m_threshold(h), HypothesisError);
        }
    }
    CHECK(roots > 50);
}

TEST_CASE("property: existence truth table")
{
    std::mt19937_64 rng(7);
    for (int k = 0; k < 10000; ++k) {
        const HypothesisSet h = random_draw(rng).h;
        const double H = (h.dimension - 2.0) / 2.0;
        CHECK(check_existence(h) == (h.alpha * H * H > h.drift * H + h.lambda));
        CHECK(cross_check_existence(h).agree);
    }
}

TEST_CASE("property: sign of c_lin matches AH + lambda < F(m)")
{
    std::mt19937_64 rng(11);
    int positive = 0;
    for (int k = 0; k < 1000; ++k) {
        const Draw d = random_draw(rng);
        const HypothesisSet& h = d.h;
        const double H = hardy_constant(h.dimension);
        const EstimateConstants c = lm_estimate_constant(h, d.m, 1.0, Nonlinearity::linear());
        const bool below = h.drift * H + h.lambda < eval_F(d.m, h);
        CHECK((c.c_lin > 0.0) == below);
        CHECK(c.c_bound.has_value() == below);
        // H^2 c_lin = F(m) - AH - lambda exactly.
        CHECK(H * H * c.c_lin ==
              doctest::Approx(eval_F(d.m, h) - h.drift * H - h.lambda).epsilon(1e-9).scale(1.0));
        positive += below;
    }
    CHECK(positive > 100);
    CHECK(positive < 900);
}

TEST_CASE("property: truncation algebra")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> t(-50.0, 50.0);
    std::uniform_real_distribution<double> k(1e-3, 30.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = t(rng);
        const double lvl = k(rng);
        const Truncation tr = truncate(x, lvl);
        CHECK(tr.t_k + tr.g_k == doctest::Approx(x).epsilon(1e-15));
        CHECK(truncate(tr.t_k, lvl).t_k == tr.t_k);
        CHECK(std::abs(tr.g_k) == doctest::Approx(std::max(0.0, std::abs(x) - lvl)).epsilon(1e-14));
    }
}
