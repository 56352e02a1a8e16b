#include <doctest.h>

#include "hardyrad/csv.hpp"
#include "hardyrad/errors.hpp"
#include "hardyrad/radial_mesh.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace hardyrad;

namespace {

constexpr double pi = std::numbers::pi;

DiscreteField random_field(const RadialMesh& mesh, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<double> v(mesh.node_count());
    for (double& x : v) x = u(rng);
    v.back() = 0.0;
    return DiscreteField(mesh, std::move(v));
}

} // namespace

TEST_CASE("sphere area")
{
    CHECK(sphere_area(2) == doctest::Approx(2 * pi));
    CHECK(sphere_area(3) == doctest::Approx(4 * pi));
    CHECK(sphere_area(4) == doctest::Approx(2 * pi * pi));
}

TEST_CASE("mesh construction examples")
{
    const RadialMesh uni = RadialMesh::build(4, 1.0, 3);
    const std::vector<double> want{0, 0.25, 0.5, 0.75, 1};
    REQUIRE(uni.node_count() == 5);
    for (std::size_t i = 0; i < 5; ++i) CHECK(uni.nodes()[i] == doctest::Approx(want[i]));

    const RadialMesh g = RadialMesh::build(3, 0.5, 3);
    CHECK(g.nodes()[1] == doctest::Approx(1.0 / 7.0));
    CHECK(g.nodes()[2] == doctest::Approx(3.0 / 7.0));
    CHECK(g.nodes()[3] == 1.0);
    CHECK(g.element_length(0) / g.element_length(1) == doctest::Approx(0.5));

    CHECK_THROWS_AS(RadialMesh::build(4, 0.0, 3), DomainError);
    CHECK_THROWS_AS(RadialMesh::build(4, 1.5, 3), DomainError);
    CHECK_THROWS_AS(RadialMesh::build(1, 1.0, 3), DomainError);
    CHECK_THROWS_AS(RadialMesh::build(4, 1.0, 3, 1.0), DomainError);
    CHECK_THROWS_AS(RadialMesh::from_nodes({0.0, 0.5, 0.4, 1.0}, 3), DomainError);
    CHECK_THROWS_AS(RadialMesh::from_nodes({0.0, 0.5, 0.9}, 3), DomainError);
}

TEST_CASE("grading floor and cutoff")
{
    const RadialMesh m = RadialMesh::build(100, 0.5, 3);
    CHECK(m.requested_grading() == 0.5);
    CHECK(m.grading() == doctest::Approx(std::pow(RadialMesh::kDefaultGradingFloor, 0.01)));
    CHECK(m.nodes()[0] == 0.0);

    const RadialMesh c = RadialMesh::build(50, 0.9, 3, 1e-6);
    CHECK(c.cutoff() == 1e-6);
    CHECK(c.nodes().back() == 1.0);
    for (std::size_t e = 0; e + 1 < c.element_count(); ++e) {
        CHECK(c.element_length(e) < c.element_length(e + 1));
    }
}

TEST_CASE("nested refinement keeps the coarse nodes")
{
    const RadialMesh m = RadialMesh::build(10, 0.7, 3);
    const RadialMesh f = m.refined();
    REQUIRE(f.element_count() == 20);
    for (std::size_t i = 0; i < m.node_count(); ++i) CHECK(f.nodes()[2 * i] == m.nodes()[i]);
    CHECK(f.nodes()[1] == doctest::Approx(0.5 * (m.nodes()[0] + m.nodes()[1])));
}

TEST_CASE("discrete fields")
{
    const RadialMesh m = RadialMesh::build(4, 1.0, 3);
    CHECK_THROWS_AS(DiscreteField(m, {1, 1, 1, 1, 1}), DomainError);
    CHECK_THROWS_AS(DiscreteField(m, {1, 1, 0}), DomainError);
    const DiscreteField u = interpolate([](double r) { return 1.0 - r; }, m);
    CHECK(u.value_at(0.6) == doctest::Approx(0.4));
    CHECK(u.value_at(0.0) == 1.0);
    CHECK(u.max_abs() == 1.0);
    CHECK((u - u).max_abs() == 0.0);
    CHECK((2.0 * u)[0] == 2.0);
    CHECK((u + u)[1] == doctest::Approx(1.5));
    CHECK(u.slope(2) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(interpolate([](double) { return 1.0; }, m), DomainError);
    CHECK_NOTHROW(u - DiscreteField::zero(RadialMesh::build(4, 1.0, 3)));
    CHECK_THROWS_AS(u - DiscreteField::zero(RadialMesh::build(5, 1.0, 3)), DomainError);
}

TEST_CASE("weighted norm examples")
{
    const RadialMesh m = RadialMesh::build(400, 0.9, 3, 1e-30);
    CHECK(weighted_lp_norm([](double) { return 1.0; }, 1.0, m) == doctest::Approx(4 * pi / 3));
    CHECK(weighted_lp_norm([](double r) { return std::pow(r, -0.4); }, 6.0, m) ==
          doctest::Approx(std::pow(4 * pi / 0.6, 1.0 / 6.0)).epsilon(1e-9));
    CHECK(std::pow(4 * pi / 0.6, 1.0 / 6.0) == doctest::Approx(1.660).epsilon(1e-3));

    // int r^{-1} dr diverges: every halving of log(cutoff) adds the same amount.
    double prev = 0.0;
    for (double cut : {1e-4, 1e-8, 1e-16}) {
        const RadialMesh c = RadialMesh::build(500, 0.5, 3, cut);
        const double v = weighted_lp_integral([](double r) { return 1.0 / r; }, 3.0, c);
        CHECK(v == doctest::Approx(4 * pi * std::log(1.0 / cut)).epsilon(1e-8));
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("H1 seminorm examples")
{
    const RadialMesh m = RadialMesh::build(64, 1.0, 3);
    CHECK(h1_seminorm(interpolate([](double r) { return 1.0 - r; }, m)) ==
          doctest::Approx(std::sqrt(4 * pi / 3)));
    CHECK(std::sqrt(4 * pi / 3) == doctest::Approx(2.0466).epsilon(1e-4));
    CHECK(h1_seminorm(DiscreteField::zero(m)) == 0.0);
    const PowerSum p = PowerSum::constant(1.0) - PowerSum::monomial(1.0, 2.0);
    CHECK(h1_seminorm(p, m) == doctest::Approx(std::sqrt(4 * pi * 0.8)).epsilon(1e-12));
    CHECK(std::sqrt(4 * pi * 0.8) == doctest::Approx(3.1705).epsilon(1e-4));
    // the interpolant converges from below
    const double coarse = h1_seminorm(interpolate([](double r) { return 1 - r * r; }, m));
    const double fine = h1_seminorm(interpolate([](double r) { return 1 - r * r; }, m.refined()));
    CHECK(coarse < fine);
    CHECK(fine < std::sqrt(4 * pi * 0.8));
}

TEST_CASE("Hardy quotient examples")
{
    const RadialMesh m = RadialMesh::build(32, 1.0, 3);
    CHECK(hardy_quotient(interpolate([](double r) { return 1.0 - r; }, m)) == doctest::Approx(1.0));
    const PowerSum rr = PowerSum::monomial(1.0, 1.0) - PowerSum::monomial(1.0, 2.0);
    CHECK(hardy_quotient(rr, m) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK_THROWS_AS(hardy_quotient(DiscreteField::zero(m)), DomainError);
}

TEST_CASE("property: power-law norms match the closed form")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 40; ++k) {
        const int n = 3 + k % 3;
        const RadialMesh mesh = RadialMesh::build(2000, 0.5, n, 1e-40);
        const double m = 1.0 + 9.0 * u(rng);
        const double s = -n / m + 0.3 + 2.0 * u(rng);
        const double want = sphere_area(n) / (n + s * m);
        const double got = weighted_lp_integral([s](double r) { return std::pow(r, s); }, m, mesh);
        CHECK(got == doctest::Approx(want).epsilon(1e-8));
    }
}

TEST_CASE("property: Hoelder ordering on random fields")
{
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(1.0, 8.0);
    const RadialMesh mesh = RadialMesh::build(60, 0.8, 3);
    const double ball = 4 * pi / 3;
    for (int k = 0; k < 200; ++k) {
        const DiscreteField v = random_field(mesh, rng);
        double m1 = u(rng);
        double m2 = u(rng);
        if (m1 > m2) std::swap(m1, m2);
        const double lhs = weighted_lp_norm(v, m1);
        const double rhs = std::pow(ball, 1.0 / m1 - 1.0 / m2) * weighted_lp_norm(v, m2);
        CHECK(lhs <= rhs * (1.0 + 1e-12));
    }
}

TEST_CASE("property: Hardy inequality on random fields")
{
    std::mt19937_64 rng(23);
    for (int k = 0; k < 200; ++k) {
        const int n = 3 + k % 4;
        const double H = (n - 2) / 2.0;
        const RadialMesh mesh = RadialMesh::build(20 + k, 0.3 + 0.7 * (k % 10) / 10.0, n, k % 2 ? 1e-5 : 0.0);
        CHECK(hardy_quotient(random_field(mesh, rng)) >= H * H - 1e-10);
    }
}

TEST_CASE("CSV round trips are bit exact")
{
    std::mt19937_64 rng(29);
    const RadialMesh mesh = RadialMesh::build(37, 0.71, 3, 1e-9);
    const DiscreteField v = random_field(mesh, rng);

    std::stringstream field;
    write_field_csv(field, v);
    const DiscreteField w = read_field_csv(field, 3);
    REQUIRE(w.mesh().node_count() == mesh.node_count());
    for (std::size_t i = 0; i < mesh.node_count(); ++i) {
        CHECK(w.mesh().nodes()[i] == mesh.nodes()[i]);
        CHECK(w[i] == v[i]);
    }

    std::stringstream nodes;
    write_mesh_csv(nodes, mesh);
    const RadialMesh back = read_mesh_csv(nodes, 3);
    for (std::size_t i = 0; i < mesh.node_count(); ++i) CHECK(back.nodes()[i] == mesh.nodes()[i]);

    std::stringstream bad("r,u\n0,1\n0.5\n");
    CHECK_THROWS_AS(read_csv(bad), ParseError);
    std::stringstream junk("r,u\n0,x\n");
    CHECK_THROWS_AS(read_csv(junk), ParseError);
}
