#include "hardyrad/radial_mesh.hpp"

#include "hardyrad/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace hardyrad {

namespace {

constexpr double kSmallestCutoff = 1e-300;

void require_exponent(double m)
{
    if (!(m >= 1.0) || !std::isfinite(m)) throw DomainError("L^m norm requires m >= 1");
}

void require_same_mesh(const DiscreteField& a, const DiscreteField& b)
{
    if (!a.mesh().same_as(b.mesh())) throw DomainError("fields live on different meshes");
}

// Log-space accumulation of omega * sum w |v|^m r^{N-1}.
template <class ValueAt>
double lp_integral(const RadialMesh& mesh, double m, ValueAt&& value_at)
{
    const double radial_power = mesh.dimension() - 1.0;
    double sum = 0.0;
    mesh.for_each_point([&](std::size_t e, double r, double w, double xi) {
        const double v = std::abs(value_at(e, r, xi));
        if (v == 0.0) return;
        if (std::isinf(v)) {
            sum = std::numeric_limits<double>::infinity();
            return;
        }
        sum += std::exp(m * std::log(v) + radial_power * std::log(r) + std::log(w));
    });
    return mesh.sphere_area() * sum;
}

} // namespace

double sphere_area(int dimension)
{
    if (dimension < 1) throw DomainError("dimension must be positive");
    const double half = dimension / 2.0;
    return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

std::shared_ptr<RadialMesh::Data> RadialMesh::make(std::vector<double> nodes, int dimension,
                                                   int order)
{
    if (dimension < 1) throw DomainError("mesh dimension must be positive");
    if (nodes.size() < 3) throw DomainError("mesh needs at least 2 elements");
    if (!(nodes.front() >= 0.0)) throw DomainError("first node must be nonnegative");
    if (nodes.back() != 1.0) throw DomainError("last node must be exactly 1");
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        if (!(nodes[i + 1] > nodes[i])) throw DomainError("mesh nodes must be strictly increasing");
    }
    auto data = std::make_shared<Data>();
    data->nodes = std::move(nodes);
    data->dimension = dimension;
    data->rule = GaussLegendre(order);
    data->sphere_area = hardyrad::sphere_area(dimension);
    return data;
}

RadialMesh RadialMesh::build(int elements, double grading, int dimension, double cutoff,
                             int quadrature_order)
{
    if (elements < 2) throw DomainError("mesh needs at least 2 elements");
    if (!(grading > 0.0 && grading <= 1.0)) throw DomainError("grading ratio must be in (0, 1]");
    if (!(cutoff >= 0.0 && cutoff < 1.0)) throw DomainError("inner cutoff must be in [0, 1)");
    if (cutoff > 0.0 && cutoff < kSmallestCutoff) throw DomainError("inner cutoff below 1e-300");

    const double floor = cutoff > 0.0 ? cutoff : kDefaultGradingFloor;
    const double q = std::max(grading, std::pow(floor, 1.0 / elements));

    // Partial sums of q^{M-1-i}, normalised, so q = 1 gives exactly i/M.
    std::vector<double> partial(elements + 1, 0.0);
    const double log_q = std::log(q);
    for (int i = 0; i < elements; ++i) {
        partial[i + 1] = partial[i] + std::exp((elements - 1 - i) * log_q);
    }
    const double total = partial.back();
    std::vector<double> nodes(elements + 1);
    for (int i = 0; i <= elements; ++i) {
        nodes[i] = cutoff + (1.0 - cutoff) * (partial[i] / total);
    }
    nodes.front() = cutoff;
    nodes.back() = 1.0;

    auto data = make(std::move(nodes), dimension, quadrature_order);
    data->grading = q;
    data->requested_grading = grading;
    return RadialMesh(std::move(data));
}

RadialMesh RadialMesh::from_nodes(std::vector<double> nodes, int dimension, int quadrature_order)
{
    return RadialMesh(make(std::move(nodes), dimension, quadrature_order));
}

RadialMesh RadialMesh::refined() const
{
    const auto& old = data_->nodes;
    std::vector<double> nodes;
    nodes.reserve(2 * old.size() - 1);
    for (std::size_t i = 0; i + 1 < old.size(); ++i) {
        nodes.push_back(old[i]);
        nodes.push_back(0.5 * (old[i] + old[i + 1]));
    }
    nodes.push_back(old.back());
    auto data = make(std::move(nodes), data_->dimension, data_->rule.order());
    data->grading = data_->grading;
    data->requested_grading = data_->requested_grading;
    return RadialMesh(std::move(data));
}

bool RadialMesh::same_as(const RadialMesh& other) const noexcept
{
    if (data_ == other.data_) return true;
    return data_->dimension == other.data_->dimension && data_->nodes == other.data_->nodes &&
           data_->rule.order() == other.data_->rule.order();
}

// ---------------------------------------------------------------------------

DiscreteField::DiscreteField(RadialMesh mesh, std::vector<double> values)
    : mesh_(std::move(mesh)), values_(std::move(values))
{
    if (values_.size() != mesh_.node_count()) {
        throw DomainError("field size does not match mesh node count");
    }
    if (values_.back() != 0.0) throw DomainError("field must vanish at r = 1");
}

DiscreteField DiscreteField::zero(const RadialMesh& mesh)
{
    return DiscreteField(mesh, std::vector<double>(mesh.node_count(), 0.0));
}

double DiscreteField::value_at(double r) const
{
    const auto nodes = mesh_.nodes();
    if (r < nodes.front() || r > nodes.back()) throw DomainError("radius outside mesh");
    auto it = std::upper_bound(nodes.begin(), nodes.end(), r);
    std::size_t e = it == nodes.end() ? nodes.size() - 2 : static_cast<std::size_t>(it - nodes.begin()) - 1;
    e = std::min(e, nodes.size() - 2);
    const double xi = (r - nodes[e]) / mesh_.element_length(e);
    return value_in(e, xi);
}

double DiscreteField::max_abs() const noexcept
{
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double DiscreteField::min_value() const noexcept
{
    return *std::min_element(values_.begin(), values_.end());
}

DiscreteField operator-(const DiscreteField& a, const DiscreteField& b)
{
    require_same_mesh(a, b);
    std::vector<double> v(a.values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values_[i] - b.values_[i];
    return DiscreteField(a.mesh_, std::move(v));
}

DiscreteField operator+(const DiscreteField& a, const DiscreteField& b)
{
    require_same_mesh(a, b);
    std::vector<double> v(a.values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values_[i] + b.values_[i];
    return DiscreteField(a.mesh_, std::move(v));
}

DiscreteField operator*(double s, const DiscreteField& a)
{
    std::vector<double> v(a.values_);
    for (double& x : v) x *= s;
    return DiscreteField(a.mesh_, std::move(v));
}

DiscreteField interpolate(const RadialFunction& fn, const RadialMesh& mesh)
{
    const auto nodes = mesh.nodes();
    std::vector<double> v(nodes.size());
    double scale = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        v[i] = fn(nodes[i]);
        if (!std::isfinite(v[i])) throw DomainError("interpolated function is not finite at a node");
        scale = std::max(scale, std::abs(v[i]));
    }
    if (std::abs(v.back()) > 1e-12 * std::max(1.0, scale)) {
        throw DomainError("interpolated function does not vanish at r = 1");
    }
    v.back() = 0.0;
    return DiscreteField(mesh, std::move(v));
}

double weighted_lp_integral(const DiscreteField& v, double m)
{
    require_exponent(m);
    return lp_integral(v.mesh(), m, [&](std::size_t e, double, double xi) { return v.value_in(e, xi); });
}

double weighted_lp_integral(const RadialFunction& v, double m, const RadialMesh& mesh)
{
    require_exponent(m);
    return lp_integral(mesh, m, [&](std::size_t, double r, double) { return v(r); });
}

double weighted_lp_norm(const DiscreteField& v, double m)
{
    return std::pow(weighted_lp_integral(v, m), 1.0 / m);
}

double weighted_lp_norm(const RadialFunction& v, double m, const RadialMesh& mesh)
{
    return std::pow(weighted_lp_integral(v, m, mesh), 1.0 / m);
}

double h1_seminorm(const DiscreteField& v)
{
    const RadialMesh& mesh = v.mesh();
    const double p = mesh.dimension() - 1.0;
    double sum = 0.0;
    mesh.for_each_point([&](std::size_t e, double r, double w, double) {
        const double d = v.slope(e);
        sum += w * d * d * std::pow(r, p);
    });
    return std::sqrt(mesh.sphere_area() * sum);
}

double h1_seminorm(const PowerSum& v, const RadialMesh& mesh)
{
    const PowerSum dv = v.derivative();
    const double p = mesh.dimension() - 1.0;
    double sum = 0.0;
    mesh.for_each_point([&](std::size_t, double r, double w, double) {
        const double d = dv(r);
        sum += w * d * d * std::pow(r, p);
    });
    return std::sqrt(mesh.sphere_area() * sum);
}

double h1_distance(const DiscreteField& v, const RadialFunction& exact_derivative)
{
    const RadialMesh& mesh = v.mesh();
    const double p = mesh.dimension() - 1.0;
    double sum = 0.0;
    mesh.for_each_point([&](std::size_t e, double r, double w, double) {
        const double d = v.slope(e) - exact_derivative(r);
        sum += w * d * d * std::pow(r, p);
    });
    return std::sqrt(mesh.sphere_area() * sum);
}

namespace {

template <class Value, class Derivative>
double quotient(const RadialMesh& mesh, Value&& value, Derivative&& derivative)
{
    const int n = mesh.dimension();
    if (n < 3) throw DomainError("Hardy quotient requires N >= 3");
    double num = 0.0;
    double den = 0.0;
    mesh.for_each_point([&](std::size_t e, double r, double w, double xi) {
        const double d = derivative(e, r);
        const double u = value(e, r, xi);
        num += w * d * d * std::pow(r, n - 1.0);
        den += w * u * u * std::pow(r, n - 3.0);
    });
    if (!(den > 0.0)) throw DomainError("Hardy quotient undefined for the zero field");
    return num / den;
}

} // namespace

double hardy_quotient(const DiscreteField& v)
{
    return quotient(
        v.mesh(), [&](std::size_t e, double, double xi) { return v.value_in(e, xi); },
        [&](std::size_t e, double) { return v.slope(e); });
}

double hardy_quotient(const PowerSum& v, const RadialMesh& mesh)
{
    const PowerSum dv = v.derivative();
    return quotient(
        mesh, [&](std::size_t, double r, double) { return v(r); },
        [&](std::size_t, double r) { return dv(r); });
}

} // namespace hardyrad
