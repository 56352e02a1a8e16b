#pragma once

#include "hardyrad/power_sum.hpp"
#include "hardyrad/radial_mesh.hpp"
#include "hardyrad/thresholds.hpp"

#include <optional>
#include <span>
#include <vector>

namespace hardyrad {

/// Radial realisation of  -div(m(r) grad u - u V) + a h(u) = lambda u/|x|^2 + f
/// on the unit ball, with V(x) = d x/|x|^2 and |d| <= A.
struct ProblemSpec {
    HypothesisSet hyp;
    PowerSum diffusion = PowerSum::constant(1.0); ///< m(r), alpha <= m <= beta
    double drift = 0.0;                           ///< signed radial drift coefficient d
    PowerSum source;                              ///< f(r)
    PowerSum weight;                              ///< a(r) >= 0
    Nonlinearity h;
    bool zero_order = false; ///< include a(r) h(u)

    /// Checks that need no mesh: hypotheses, h, |d| <= A and a in L^1.
    void validate() const;
    /// Pointwise checks on the quadrature points of `mesh`: alpha <= m <= beta, a >= 0.
    void validate_on(const RadialMesh& mesh) const;
    /// |f| <= Q a on every quadrature point (relative slack 1e-12).
    bool dominated_on(const RadialMesh& mesh) const;
};

enum class TruncationMode {
    rational, ///< u / (1 + |u|/n) in the convection term
    hard,     ///< T_n(u) in convection and potential
};

const char* to_string(TruncationMode mode);

/// ProblemSpec with damped coefficients at level n. An empty level means the
/// unregularised problem (used for discretisation studies).
struct RegularizedProblem {
    ProblemSpec base;
    std::optional<double> level;
    TruncationMode mode = TruncationMode::hard;

    double source(double r) const;    ///< f / (1 + |f|/n)
    double weight(double r) const;    ///< a / (1 + Q a/n)
    double drift(double r) const;     ///< d / (r + |d|/n)
    double kernel(double r) const;    ///< 1 / (r^2 + 1/n)
    double convected(double u) const; ///< truncation applied inside the convection
    double potential(double u) const; ///< truncation applied inside the Hardy term
};

/// Throws DomainError for n < 1.
RegularizedProblem regularize(const ProblemSpec& spec, double n, TruncationMode mode);
RegularizedProblem unregularized(const ProblemSpec& spec);

/// Tridiagonal matrix; lower[i] = A(i+1, i), upper[i] = A(i, i+1).
struct Tridiagonal {
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;

    explicit Tridiagonal(std::size_t n = 0) : lower(n ? n - 1 : 0), diag(n), upper(n ? n - 1 : 0) {}
    std::size_t size() const noexcept { return diag.size(); }
    std::vector<double> apply(std::span<const double> x) const;
    double norm_inf() const;
};

/// Free-node system; the Dirichlet node r = 1 is eliminated.
struct LinearSystem {
    RadialMesh mesh;
    Tridiagonal matrix;
    std::vector<double> rhs;
    std::size_t boundary_index = 0;
};

/// Thomas elimination. Throws SingularSystemError on a vanishing pivot.
std::vector<double> solve_tridiagonal(const Tridiagonal& a, std::span<const double> b);

/// omega int m(r) phi_i' phi_j' r^{N-1} dr over free nodes.
Tridiagonal assemble_stiffness(const RadialMesh& mesh, const RadialFunction& coefficient);
Tridiagonal assemble_stiffness(const RadialMesh& mesh);
/// omega int phi_i phi_j r^{N-1+shift} dr over free nodes (shift -2 gives the Hardy mass).
Tridiagonal assemble_mass(const RadialMesh& mesh, double shift = 0.0);

/// Precomputed coefficient values at the quadrature points of one mesh.
class Assembler {
public:
    Assembler(RegularizedProblem problem, RadialMesh mesh);

    const RadialMesh& mesh() const noexcept { return mesh_; }
    const RegularizedProblem& problem() const noexcept { return problem_; }
    const Tridiagonal& stiffness() const noexcept { return stiffness_; }

    /// Right-hand side with every lower-order term evaluated at `lagged`.
    std::vector<double> load(const DiscreteField& lagged) const;
    LinearSystem system(const DiscreteField& lagged) const;
    /// K u - b(u): the discrete weak residual of the regularised problem at u.
    std::vector<double> residual(const DiscreteField& u) const;

private:
    struct Point {
        std::size_t element;
        double xi;
        double dphi;   ///< 1 / element length
        double volume; ///< omega w r^{N-1}
        double source;
        double weight;
        double drift;
        double kernel;
    };

    RegularizedProblem problem_;
    RadialMesh mesh_;
    Tridiagonal stiffness_;
    std::vector<Point> points_;
};

LinearSystem assemble(const RegularizedProblem& problem, const RadialMesh& mesh,
                      const DiscreteField& lagged);

/// Solves and re-attaches the zero boundary value. The residual
/// ||Ax - b||_inf <= 1e-12 (||A||_inf ||x||_inf + ||b||_inf) is verified.
DiscreteField solve_linear(const LinearSystem& system);

/// sqrt(R^T K^{-1} R) with K the unit-coefficient weighted stiffness: the
/// discrete H^{-1} norm of a weak residual over the free nodes.
double dual_norm(const RadialMesh& mesh, std::span<const double> residual);

} // namespace hardyrad
