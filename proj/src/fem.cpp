#include "hardyrad/fem.hpp"

#include "hardyrad/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hardyrad {

namespace {

constexpr double kBoundSlack = 1e-12;

void require_same_mesh(const RadialMesh& a, const RadialMesh& b)
{
    if (!a.same_as(b)) throw DomainError("lagged field does not live on the assembly mesh");
}

void add_element(Tridiagonal& t, std::size_t e, double k00, double k01, double k10, double k11)
{
    // Free nodes are 0..M-1; node M (r = 1) is eliminated.
    const std::size_t free = t.size();
    t.diag[e] += k00;
    if (e + 1 < free) {
        t.upper[e] += k01;
        t.lower[e] += k10;
        t.diag[e + 1] += k11;
    }
}

} // namespace

void ProblemSpec::validate() const
{
    hyp.validate();
    h.validate();
    if (!std::isfinite(drift) || std::abs(drift) > hyp.drift * (1.0 + kBoundSlack)) {
        std::ostringstream msg;
        msg << "drift coefficient |d| = " << std::abs(drift) << " exceeds the bound A = " << hyp.drift;
        throw DomainError(msg.str());
    }
    if (zero_order && !weight.is_zero() && !(weight.min_exponent() > -hyp.dimension)) {
        throw DomainError("weight a is not integrable: exponent <= -N");
    }
}

void ProblemSpec::validate_on(const RadialMesh& mesh) const
{
    validate();
    if (mesh.dimension() != hyp.dimension) throw DomainError("mesh dimension differs from N");
    mesh.for_each_point([&](std::size_t, double r, double, double) {
        const double m = diffusion(r);
        if (!(m >= hyp.alpha * (1.0 - kBoundSlack)) || !(m <= hyp.beta * (1.0 + kBoundSlack))) {
            std::ostringstream msg;
            msg << "diffusion m(" << r << ") = " << m << " outside [alpha, beta] = [" << hyp.alpha
                << ", " << hyp.beta << "]";
            throw DomainError(msg.str());
        }
        if (zero_order && !(weight(r) >= 0.0)) {
            std::ostringstream msg;
            msg << "weight a(" << r << ") = " << weight(r) << " is negative";
            throw DomainError(msg.str());
        }
    });
}

bool ProblemSpec::dominated_on(const RadialMesh& mesh) const
{
    bool ok = true;
    mesh.for_each_point([&](std::size_t, double r, double, double) {
        const double bound = hyp.q * weight(r);
        if (std::abs(source(r)) > bound + kBoundSlack * std::abs(bound)) ok = false;
    });
    return ok;
}

const char* to_string(TruncationMode mode)
{
    return mode == TruncationMode::rational ? "rational" : "hard";
}

double RegularizedProblem::source(double r) const
{
    const double f = base.source(r);
    return level ? f / (1.0 + std::abs(f) / *level) : f;
}

double RegularizedProblem::weight(double r) const
{
    if (!base.zero_order) return 0.0;
    const double a = base.weight(r);
    return level ? a / (1.0 + base.hyp.q * a / *level) : a;
}

double RegularizedProblem::drift(double r) const
{
    const double d = base.drift;
    return level ? d / (r + std::abs(d) / *level) : d / r;
}

double RegularizedProblem::kernel(double r) const
{
    return level ? 1.0 / (r * r + 1.0 / *level) : 1.0 / (r * r);
}

double RegularizedProblem::convected(double u) const
{
    if (!level) return u;
    if (mode == TruncationMode::rational) return u / (1.0 + std::abs(u) / *level);
    return std::clamp(u, -*level, *level);
}

double RegularizedProblem::potential(double u) const
{
    if (!level || mode == TruncationMode::rational) return u;
    return std::clamp(u, -*level, *level);
}

RegularizedProblem regularize(const ProblemSpec& spec, double n, TruncationMode mode)
{
    if (!(n >= 1.0)) throw DomainError("regularisation level n must be >= 1");
    return {spec, n, mode};
}

RegularizedProblem unregularized(const ProblemSpec& spec)
{
    return {spec, std::nullopt, TruncationMode::hard};
}

std::vector<double> Tridiagonal::apply(std::span<const double> x) const
{
    const std::size_t n = size();
    if (x.size() != n) throw DomainError("vector size does not match matrix");
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = diag[i] * x[i];
        if (i > 0) s += lower[i - 1] * x[i - 1];
        if (i + 1 < n) s += upper[i] * x[i + 1];
        y[i] = s;
    }
    return y;
}

double Tridiagonal::norm_inf() const
{
    double m = 0.0;
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
        double s = std::abs(diag[i]);
        if (i > 0) s += std::abs(lower[i - 1]);
        if (i + 1 < n) s += std::abs(upper[i]);
        m = std::max(m, s);
    }
    return m;
}

std::vector<double> solve_tridiagonal(const Tridiagonal& a, std::span<const double> b)
{
    const std::size_t n = a.size();
    if (b.size() != n) throw DomainError("right-hand side size does not match matrix");
    if (n == 0) return {};
    // Pivots are judged against their own row: graded meshes legitimately
    // span many orders of magnitude between rows.
    const auto row_scale = [&](std::size_t i) {
        double s = std::abs(a.diag[i]);
        if (i > 0) s += std::abs(a.lower[i - 1]);
        if (i + 1 < n) s += std::abs(a.upper[i]);
        return s;
    };
    const auto check = [&](double pivot, std::size_t i) {
        if (!(std::abs(pivot) > 1e-14 * row_scale(i)) || !std::isfinite(pivot)) {
            throw SingularSystemError("zero pivot at row " + std::to_string(i));
        }
    };
    std::vector<double> c(n, 0.0);
    std::vector<double> x(n);
    double pivot = a.diag[0];
    check(pivot, 0);
    x[0] = b[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        c[i - 1] = a.upper[i - 1] / pivot;
        pivot = a.diag[i] - a.lower[i - 1] * c[i - 1];
        check(pivot, i);
        x[i] = (b[i] - a.lower[i - 1] * x[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
    return x;
}

Tridiagonal assemble_stiffness(const RadialMesh& mesh, const RadialFunction& coefficient)
{
    Tridiagonal t(mesh.node_count() - 1);
    const double p = mesh.dimension() - 1.0;
    const double omega = mesh.sphere_area();
    mesh.for_each_point([&](std::size_t e, double r, double w, double) {
        const double len = mesh.element_length(e);
        const double k = omega * w * coefficient(r) * std::pow(r, p) / (len * len);
        add_element(t, e, k, -k, -k, k);
    });
    return t;
}

Tridiagonal assemble_stiffness(const RadialMesh& mesh)
{
    return assemble_stiffness(mesh, [](double) { return 1.0; });
}

Tridiagonal assemble_mass(const RadialMesh& mesh, double shift)
{
    Tridiagonal t(mesh.node_count() - 1);
    const double p = mesh.dimension() - 1.0 + shift;
    const double omega = mesh.sphere_area();
    mesh.for_each_point([&](std::size_t e, double r, double w, double xi) {
        const double k = omega * w * std::pow(r, p);
        const double l = 1.0 - xi;
        add_element(t, e, k * l * l, k * l * xi, k * l * xi, k * xi * xi);
    });
    return t;
}

Assembler::Assembler(RegularizedProblem problem, RadialMesh mesh)
    : problem_(std::move(problem)), mesh_(std::move(mesh))
{
    if (mesh_.dimension() != problem_.base.hyp.dimension) {
        throw DomainError("mesh dimension differs from the problem dimension");
    }
    const ProblemSpec& spec = problem_.base;
    stiffness_ = assemble_stiffness(mesh_, [&](double r) { return spec.diffusion(r); });
    const double p = mesh_.dimension() - 1.0;
    const double omega = mesh_.sphere_area();
    points_.reserve(mesh_.element_count() * mesh_.rule().order());
    mesh_.for_each_point([&](std::size_t e, double r, double w, double xi) {
        Point pt;
        pt.element = e;
        pt.xi = xi;
        pt.dphi = 1.0 / mesh_.element_length(e);
        pt.volume = omega * w * std::pow(r, p);
        pt.source = problem_.source(r);
        pt.weight = problem_.weight(r);
        pt.drift = problem_.drift(r);
        pt.kernel = problem_.kernel(r);
        points_.push_back(pt);
    });
}

std::vector<double> Assembler::load(const DiscreteField& lagged) const
{
    require_same_mesh(mesh_, lagged.mesh());
    const std::size_t free = mesh_.node_count() - 1;
    std::vector<double> b(free, 0.0);
    const double lambda = problem_.base.hyp.lambda;
    const Nonlinearity& h = problem_.base.h;
    const bool zero_order = problem_.base.zero_order;
    for (const Point& pt : points_) {
        const double u = lagged.value_in(pt.element, pt.xi);
        // Coefficient of phi and of phi' at this point.
        double value = pt.source + lambda * problem_.potential(u) * pt.kernel;
        if (zero_order) value -= pt.weight * h(u);
        const double flux = problem_.convected(u) * pt.drift;
        const double left = value * (1.0 - pt.xi) - flux * pt.dphi;
        const double right = value * pt.xi + flux * pt.dphi;
        b[pt.element] += pt.volume * left;
        if (pt.element + 1 < free) b[pt.element + 1] += pt.volume * right;
    }
    return b;
}

LinearSystem Assembler::system(const DiscreteField& lagged) const
{
    return {mesh_, stiffness_, load(lagged), mesh_.node_count() - 1};
}

std::vector<double> Assembler::residual(const DiscreteField& u) const
{
    const auto values = u.values();
    std::vector<double> r = stiffness_.apply(values.first(values.size() - 1));
    const std::vector<double> b = load(u);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

LinearSystem assemble(const RegularizedProblem& problem, const RadialMesh& mesh,
                      const DiscreteField& lagged)
{
    return Assembler(problem, mesh).system(lagged);
}

DiscreteField solve_linear(const LinearSystem& system)
{
    const Tridiagonal& a = system.matrix;
    std::vector<double> x = solve_tridiagonal(a, system.rhs);
    const auto residual_ok = [&](std::vector<double>& r) {
        const std::vector<double> ax = a.apply(x);
        double res = 0.0;
        double xn = 0.0;
        double bn = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            r[i] = system.rhs[i] - ax[i];
            res = std::max(res, std::abs(r[i]));
            xn = std::max(xn, std::abs(x[i]));
            bn = std::max(bn, std::abs(system.rhs[i]));
        }
        return res <= 1e-12 * (a.norm_inf() * xn + bn);
    };
    std::vector<double> r(x.size());
    if (!residual_ok(r)) {
        // one step of iterative refinement before giving up
        const std::vector<double> dx = solve_tridiagonal(a, r);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += dx[i];
        if (!residual_ok(r)) throw SingularSystemError("linear solve residual exceeds tolerance");
    }
    x.push_back(0.0);
    return DiscreteField(system.mesh, std::move(x));
}

double dual_norm(const RadialMesh& mesh, std::span<const double> residual)
{
    const Tridiagonal k = assemble_stiffness(mesh);
    const std::vector<double> z = solve_tridiagonal(k, residual);
    double s = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) s += residual[i] * z[i];
    return std::sqrt(std::max(s, 0.0));
}

} // namespace hardyrad
