#include "hardyrad/analysis.hpp"

#include "hardyrad/csv.hpp"
#include "hardyrad/errors.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

namespace hardyrad {

namespace {

double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void require_elements(const RadialMesh& mesh)
{
    if (mesh.element_count() < 8) throw DomainError("eigenvalue estimates need at least 8 elements");
}

DiscreteField as_field(const RadialMesh& mesh, std::vector<double> free)
{
    free.push_back(0.0);
    return DiscreteField(mesh, std::move(free));
}

void validate_scan(int dimension, const std::vector<double>& m_grid,
                   const std::vector<RefinementLevel>& levels)
{
    const double s2 = sobolev_exponent(dimension);
    if (m_grid.empty()) throw DomainError("summability scan needs a nonempty m grid");
    for (double m : m_grid) {
        if (!(m >= s2)) throw DomainError("summability scan grid must lie in [2*, inf)");
    }
    if (levels.size() < 3) throw DomainError("summability scan needs at least 3 refinement levels");
    for (std::size_t i = 1; i < levels.size(); ++i) {
        if (!(levels[i].cutoff < levels[i - 1].cutoff)) {
            throw DomainError("refinement levels must have strictly decreasing cutoffs");
        }
    }
}

template <class FieldOn>
SummabilityReport scan(int dimension, const std::vector<double>& m_grid,
                       const std::vector<RefinementLevel>& levels, int workers, FieldOn&& field_on)
{
    validate_scan(dimension, m_grid, levels);
    SummabilityReport rep;
    rep.m_grid = m_grid;
    rep.levels = levels;
    rep.norms.assign(levels.size(), {});
    rep.integrals.assign(levels.size(), {});

    const auto run = [&](std::size_t i) {
        const RefinementLevel& lv = levels[i];
        const RadialMesh mesh = RadialMesh::build(lv.elements, lv.grading, dimension, lv.cutoff);
        const DiscreteField u = field_on(mesh);
        std::vector<double> norms;
        std::vector<double> integrals;
        for (double m : m_grid) {
            const double integral = weighted_lp_integral(u, m);
            integrals.push_back(integral);
            norms.push_back(std::pow(integral, 1.0 / m));
        }
        rep.norms[i] = std::move(norms);
        rep.integrals[i] = std::move(integrals);
    };

    // Each level writes only its own slot.
    const std::size_t width = static_cast<std::size_t>(std::max(1, workers));
    for (std::size_t start = 0; start < levels.size(); start += width) {
        std::vector<std::future<void>> batch;
        for (std::size_t i = start; i < std::min(levels.size(), start + width); ++i) {
            batch.push_back(std::async(width == 1 ? std::launch::deferred : std::launch::async, run, i));
        }
        for (auto& f : batch) f.get();
    }

    const std::vector<double> integral_ratio = rep.integral_growth();
    const std::size_t fine = levels.size() - 1;
    for (std::size_t j = 0; j < m_grid.size(); ++j) {
        const double a = rep.norms[fine - 1][j];
        const double b = rep.norms[fine][j];
        const double spread = std::max(a, b) > 0.0 ? std::abs(b - a) / std::max(a, b) : 0.0;
        Growth g = Growth::undetermined;
        if (integral_ratio[j] >= kGrowthFactor) {
            g = Growth::growing;
        } else if (spread < kBoundedVariation) {
            g = Growth::bounded;
        }
        rep.classes.push_back(g);
        if (g == Growth::growing && !rep.empirical_transition) rep.empirical_transition = m_grid[j];
    }
    return rep;
}

} // namespace

EigenResult smallest_eigenpair(const Tridiagonal& stiffness, const Tridiagonal& mass,
                               const RadialMesh& mesh, double relative_tolerance,
                               int max_iterations)
{
    const std::size_t n = stiffness.size();
    if (mass.size() != n || n + 1 != mesh.node_count()) {
        throw DomainError("eigenproblem matrices do not match the mesh");
    }
    std::vector<double> x(n, 1.0);
    double previous = std::numeric_limits<double>::infinity();
    double previous_change = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= max_iterations; ++k) {
        const std::vector<double> y = mass.apply(x);
        std::vector<double> z = solve_tridiagonal(stiffness, y);
        const std::vector<double> mz = mass.apply(z);
        const double norm = std::sqrt(dot(z, mz));
        if (!(norm > 0.0) || !std::isfinite(norm)) throw SpectralError("inverse iteration collapsed");
        for (double& v : z) v /= norm;
        const std::vector<double> kz = stiffness.apply(z);
        const double quotient = dot(z, kz); // z is M-normalised
        x = std::move(z);

        const double change = std::abs(quotient - previous);
        if (change == 0.0) return {quotient, as_field(mesh, std::move(x)), k};
        if (k >= 3 && change < previous_change) {
            const double c = change / previous_change;
            if (change * c / (1.0 - c) <= relative_tolerance * std::abs(quotient)) {
                return {quotient, as_field(mesh, std::move(x)), k};
            }
        }
        previous_change = change;
        previous = quotient;
    }
    throw SpectralError("inverse power iteration did not reach relative tolerance in " +
                        std::to_string(max_iterations) + " steps");
}

EigenResult min_hardy_rayleigh(const RadialMesh& mesh)
{
    require_elements(mesh);
    if (mesh.dimension() < 3) throw DomainError("Hardy quotient requires N >= 3");
    return smallest_eigenpair(assemble_stiffness(mesh), assemble_mass(mesh, -2.0), mesh);
}

EigenResult dirichlet_eigenvalue(const RadialMesh& mesh)
{
    require_elements(mesh);
    return smallest_eigenpair(assemble_stiffness(mesh), assemble_mass(mesh, 0.0), mesh);
}

MaxPrincipleVerdict check_weak_maximum(const DiscreteField& u, double tolerance)
{
    if (!(tolerance >= 0.0)) throw DomainError("tolerance must be nonnegative");
    MaxPrincipleVerdict v;
    v.min_value = u.min_value();
    v.tolerance = tolerance * std::max(1.0, u.max_abs());
    v.weak_ok = v.min_value >= -v.tolerance;
    return v;
}

bool sign_preconditions_hold(const ProblemSpec& spec, const RadialMesh& mesh)
{
    if (!spec.zero_order) return false;
    bool equal = true;
    mesh.for_each_point([&](std::size_t, double r, double, double) {
        const double qa = spec.hyp.q * spec.weight(r);
        if (std::abs(spec.source(r) - qa) > 1e-12 * std::max(std::abs(qa), 1e-300)) equal = false;
    });
    const double k0 = compute_k0(spec.h, spec.hyp.q);
    // h is increasing, so the maximum over |s| <= k0 is h(k0).
    const bool bounded = spec.h(k0) <= spec.hyp.q * (1.0 + 1e-12);
    return equal && bounded;
}

MaxPrincipleVerdict check_weak_maximum(const DiscreteField& u, const ProblemSpec& spec,
                                       double tolerance)
{
    MaxPrincipleVerdict v = check_weak_maximum(u, tolerance);
    v.preconditions_ok = sign_preconditions_hold(spec, u.mesh());
    v.existence_ok = check_existence(spec.hyp);
    return v;
}

MaxPrincipleVerdict check_strong_maximum(const DiscreteField& u, double inner_radius)
{
    if (!(inner_radius > 0.0 && inner_radius < 1.0)) {
        throw DomainError("inner radius must lie in (0, 1)");
    }
    const auto nodes = u.mesh().nodes();
    if (inner_radius < nodes.front()) throw DomainError("inner radius below the mesh cutoff");
    double c = u.value_at(inner_radius);
    for (std::size_t i = 0; i < nodes.size() && nodes[i] <= inner_radius; ++i) c = std::min(c, u[i]);
    MaxPrincipleVerdict v = check_weak_maximum(u);
    v.c_omega = c;
    v.inner_radius = inner_radius;
    v.strong_ok = c > 0.0;
    return v;
}

const char* to_string(Growth g)
{
    switch (g) {
    case Growth::bounded: return "bounded";
    case Growth::growing: return "growing";
    case Growth::undetermined: return "undetermined";
    }
    return "undetermined";
}

std::vector<double> SummabilityReport::norm_growth() const
{
    std::vector<double> out;
    const std::size_t fine = norms.size() - 1;
    for (std::size_t j = 0; j < m_grid.size(); ++j) out.push_back(norms[fine][j] / norms[fine - 1][j]);
    return out;
}

std::vector<double> SummabilityReport::integral_growth() const
{
    std::vector<double> out;
    const std::size_t fine = integrals.size() - 1;
    for (std::size_t j = 0; j < m_grid.size(); ++j) {
        out.push_back(integrals[fine][j] / integrals[fine - 1][j]);
    }
    return out;
}

std::vector<double> SummabilityReport::norm_variation() const
{
    std::vector<double> out;
    for (std::size_t j = 0; j < m_grid.size(); ++j) {
        double lo = norms[0][j];
        double hi = lo;
        for (const auto& row : norms) {
            lo = std::min(lo, row[j]);
            hi = std::max(hi, row[j]);
        }
        out.push_back(hi > 0.0 ? (hi - lo) / hi : 0.0);
    }
    return out;
}

std::string SummabilityReport::to_csv() const
{
    std::ostringstream out;
    out << "m,level,norm,class\n";
    for (std::size_t i = 0; i < norms.size(); ++i) {
        for (std::size_t j = 0; j < m_grid.size(); ++j) {
            out << format_double(m_grid[j]) << ',' << i << ',' << format_double(norms[i][j]) << ','
                << to_string(classes[j]) << '\n';
        }
    }
    return out.str();
}

SummabilityReport summability_scan(const RadialFunction& u, int dimension,
                                   const std::vector<double>& m_grid,
                                   const std::vector<RefinementLevel>& levels, int workers)
{
    return scan(dimension, m_grid, levels, workers,
                [&](const RadialMesh& mesh) { return interpolate(u, mesh); });
}

SummabilityReport summability_scan(const ProblemSpec& spec, const std::vector<double>& m_grid,
                                   const std::vector<RefinementLevel>& levels,
                                   const SolveOptions& options, int workers)
{
    spec.validate();
    SummabilityReport rep = scan(spec.hyp.dimension, m_grid, levels, workers, [&](const RadialMesh& mesh) {
        return picard_solve(unregularized(spec), mesh, options).solution;
    });
    if (check_existence(spec.hyp)) rep.predicted = solve_m_threshold(spec.hyp);
    return rep;
}

} // namespace hardyrad
