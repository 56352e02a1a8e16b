#pragma once

#include "hardyrad/fem.hpp"
#include "hardyrad/solver.hpp"
#include "hardyrad/thresholds.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hardyrad {

struct EigenResult {
    double value = 0.0;
    DiscreteField vector;
    int iterations = 0;
};

/// Smallest eigenvalue of the pencil (stiffness, mass) by inverse power
/// iteration with shift 0. Stops when the extrapolated error of the Rayleigh
/// quotient is below relative_tolerance; throws SpectralError if that takes
/// more than max_iterations steps.
EigenResult smallest_eigenpair(const Tridiagonal& stiffness, const Tridiagonal& mass,
                               const RadialMesh& mesh, double relative_tolerance = 1e-8,
                               int max_iterations = 200000);

/// min over the discrete space of int |v'|^2 r^{N-1} / int v^2 r^{N-3}; >= H^2.
EigenResult min_hardy_rayleigh(const RadialMesh& mesh);
/// First Dirichlet eigenvalue of -Delta on the unit ball (radial ground state).
EigenResult dirichlet_eigenvalue(const RadialMesh& mesh);

struct MaxPrincipleVerdict {
    bool weak_ok = false;
    double min_value = 0.0;
    double tolerance = 0.0; ///< absolute threshold actually applied
    std::optional<double> c_omega;
    std::optional<double> inner_radius;
    bool strong_ok = false;
    /// f = Q a and max_{|s| <= k0} h(s) <= Q on the originating problem.
    std::optional<bool> preconditions_ok;
    std::optional<bool> existence_ok;
};

/// weak_ok iff min nodal value >= -tolerance * max(1, ||u||_inf).
MaxPrincipleVerdict check_weak_maximum(const DiscreteField& u, double tolerance = 1e-10);
/// As above, additionally reporting the sign-condition preconditions of `spec`.
MaxPrincipleVerdict check_weak_maximum(const DiscreteField& u, const ProblemSpec& spec,
                                       double tolerance = 1e-10);
/// c_omega = min of u over {r <= inner_radius} (nodes plus the interpolated
/// value at inner_radius); strong_ok iff c_omega > 0.
MaxPrincipleVerdict check_strong_maximum(const DiscreteField& u, double inner_radius);

/// f = Q a on every quadrature point (relative 1e-12) and h(k0) <= Q.
bool sign_preconditions_hold(const ProblemSpec& spec, const RadialMesh& mesh);

enum class Growth { bounded, growing, undetermined };
const char* to_string(Growth g);

struct RefinementLevel {
    int elements = 0;
    double grading = 1.0;
    double cutoff = 0.0;
};

struct SummabilityReport {
    std::vector<double> m_grid;
    std::vector<RefinementLevel> levels;
    /// norms[level][j] = ||u||_{L^{m_j}} on that level; integrals the m-th powers.
    std::vector<std::vector<double>> norms;
    std::vector<std::vector<double>> integrals;
    std::vector<Growth> classes;
    std::optional<MThreshold> predicted;
    /// Smallest grid m classified as growing, if any.
    std::optional<double> empirical_transition;

    /// Norm ratio finest / second finest per m.
    std::vector<double> norm_growth() const;
    /// Integral ratio finest / second finest per m.
    std::vector<double> integral_growth() const;
    /// Relative spread (max - min) / max of the norms over all levels per m.
    std::vector<double> norm_variation() const;

    /// Columns m, level, norm, class.
    std::string to_csv() const;
};

/// growing: int |u|^m grows >= growth_factor between the two finest levels;
/// bounded: the norm varies by < 10% between them.
inline constexpr double kGrowthFactor = 10.0;
inline constexpr double kBoundedVariation = 0.1;

/// Scan of an explicit radial function (e.g. the interpolant of u_rho) on
/// meshes of decreasing cutoff. Levels are processed by up to `workers` threads.
SummabilityReport summability_scan(const RadialFunction& u, int dimension,
                                   const std::vector<double>& m_grid,
                                   const std::vector<RefinementLevel>& levels, int workers = 1);

/// Solves the unregularised problem on each level and scans the discrete solutions.
SummabilityReport summability_scan(const ProblemSpec& spec, const std::vector<double>& m_grid,
                                   const std::vector<RefinementLevel>& levels,
                                   const SolveOptions& options, int workers = 1);

} // namespace hardyrad
