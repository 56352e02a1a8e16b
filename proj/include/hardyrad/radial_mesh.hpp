#pragma once

#include "hardyrad/power_sum.hpp"
#include "hardyrad/quadrature.hpp"

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace hardyrad {

using RadialFunction = std::function<double(double)>;

/// Surface area of the unit sphere S^{N-1}: 2 pi^{N/2} / Gamma(N/2).
double sphere_area(int dimension);

/// Immutable 1D node set r_0 < ... < r_M = 1 discretising the unit ball in
/// radial coordinates. Copies share the node storage.
class RadialMesh {
public:
    /// Smallest grading span used when the cutoff is 0: q^M is never allowed
    /// below this value.
    static constexpr double kDefaultGradingFloor = 1e-12;

    /// Geometric grading toward the origin: element lengths satisfy
    /// len(e_i) / len(e_{i+1}) = q. When q^M would fall below the cutoff (or
    /// kDefaultGradingFloor for cutoff 0) the ratio is raised to
    /// cutoff^{1/M} so the elements never shrink below the cutoff scale;
    /// grading() reports the ratio actually used.
    static RadialMesh build(int elements, double grading, int dimension, double cutoff = 0.0,
                            int quadrature_order = 4);
    static RadialMesh from_nodes(std::vector<double> nodes, int dimension,
                                 int quadrature_order = 4);

    /// Bisect every element (nested refinement).
    RadialMesh refined() const;

    std::span<const double> nodes() const noexcept { return data_->nodes; }
    std::size_t node_count() const noexcept { return data_->nodes.size(); }
    std::size_t element_count() const noexcept { return data_->nodes.size() - 1; }
    double element_length(std::size_t e) const { return data_->nodes[e + 1] - data_->nodes[e]; }
    int dimension() const noexcept { return data_->dimension; }
    double grading() const noexcept { return data_->grading; }
    double requested_grading() const noexcept { return data_->requested_grading; }
    double cutoff() const noexcept { return data_->nodes.front(); }
    const GaussLegendre& rule() const noexcept { return data_->rule; }
    double sphere_area() const noexcept { return data_->sphere_area; }

    bool same_as(const RadialMesh& other) const noexcept;

    /// Calls fn(element, r, weight, xi) for every quadrature point; `weight`
    /// already includes the element length, `xi` is the local coordinate.
    template <class Fn>
    void for_each_point(Fn&& fn) const
    {
        const auto& nodes = data_->nodes;
        const auto& rule = data_->rule;
        for (std::size_t e = 0; e + 1 < nodes.size(); ++e) {
            const double a = nodes[e];
            const double len = nodes[e + 1] - a;
            for (std::size_t q = 0; q < rule.points.size(); ++q) {
                const double xi = rule.points[q];
                fn(e, a + xi * len, rule.weights[q] * len, xi);
            }
        }
    }

private:
    struct Data {
        std::vector<double> nodes;
        int dimension = 3;
        double grading = 1.0;
        double requested_grading = 1.0;
        GaussLegendre rule{4};
        double sphere_area = 0.0;
    };

    explicit RadialMesh(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
    static std::shared_ptr<Data> make(std::vector<double> nodes, int dimension, int order);

    std::shared_ptr<const Data> data_;
};

/// Piecewise-linear radial function on a mesh, vanishing at r = 1.
class DiscreteField {
public:
    /// Throws DomainError if the size mismatches or the boundary value is not 0.
    DiscreteField(RadialMesh mesh, std::vector<double> values);

    static DiscreteField zero(const RadialMesh& mesh);

    const RadialMesh& mesh() const noexcept { return mesh_; }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

    /// Value in element e at local coordinate xi in [0, 1].
    double value_in(std::size_t e, double xi) const noexcept
    {
        return (1.0 - xi) * values_[e] + xi * values_[e + 1];
    }
    double slope(std::size_t e) const noexcept
    {
        return (values_[e + 1] - values_[e]) / mesh_.element_length(e);
    }
    double value_at(double r) const;

    double max_abs() const noexcept;
    double min_value() const noexcept;

    friend DiscreteField operator-(const DiscreteField& a, const DiscreteField& b);
    friend DiscreteField operator+(const DiscreteField& a, const DiscreteField& b);
    friend DiscreteField operator*(double s, const DiscreteField& a);

private:
    RadialMesh mesh_;
    std::vector<double> values_;
};

/// Nodal interpolant. The value at r = 1 must vanish to 1e-12 relative to
/// the field's magnitude; it is then set to exactly 0.
DiscreteField interpolate(const RadialFunction& fn, const RadialMesh& mesh);

/// (omega_{N-1} int_0^1 |v|^m r^{N-1} dr)^{1/m} by per-element Gauss quadrature.
double weighted_lp_norm(const DiscreteField& v, double m);
double weighted_lp_norm(const RadialFunction& v, double m, const RadialMesh& mesh);

/// omega_{N-1} int |v|^m r^{N-1} dr, accumulated in log space so extremely
/// graded meshes and large m do not overflow intermediate products.
double weighted_lp_integral(const DiscreteField& v, double m);
double weighted_lp_integral(const RadialFunction& v, double m, const RadialMesh& mesh);

/// (omega_{N-1} int |v'|^2 r^{N-1} dr)^{1/2}.
double h1_seminorm(const DiscreteField& v);
double h1_seminorm(const PowerSum& v, const RadialMesh& mesh);
/// H^1 seminorm of (v_h - v) given the exact derivative v'.
double h1_distance(const DiscreteField& v, const RadialFunction& exact_derivative);

/// int |v'|^2 r^{N-1} dr / int v^2 r^{N-3} dr. Throws DomainError for v = 0.
double hardy_quotient(const DiscreteField& v);
double hardy_quotient(const PowerSum& v, const RadialMesh& mesh);

} // namespace hardyrad
