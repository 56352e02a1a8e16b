#pragma once

#include "hardyrad/fem.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hardyrad {

struct SolveOptions {
    double theta = 0.5;
    double tolerance = 1e-10;
    int max_iterations = 200;
    std::vector<double> schedule{10.0, 100.0, 1000.0, 10000.0};
    /// Empty: hard truncation when the zero-order term is on, rational otherwise.
    std::optional<TruncationMode> mode;
    /// Exponents at which L^m norms are reported; empty means {2*, 1.5 2*, 2 2*}.
    std::vector<double> m_grid;
    /// Consecutive gap increases that count as divergence.
    int divergence_window = 5;

    void validate() const;
    TruncationMode resolve_mode(const ProblemSpec& spec) const;
};

struct LevelReport {
    std::optional<double> level; ///< n, empty when unregularised
    int iterations = 0;
    double theta = 0.0;          ///< relaxation actually used
    bool relaxation_halved = false;
    std::vector<double> gaps;    ///< H^1 update gap per iteration
    bool monotone_after_5 = true;
    double residual = 0.0;       ///< dual norm of K u - b(u) at the returned field
    double h1 = 0.0;
    double linf = 0.0;
    std::vector<double> lm_norms; ///< aligned with SolveReport::m_grid
    std::optional<double> ratio_source; ///< h1 / ||f||_{L^{2N/(N+2)}}
    std::optional<double> ratio_weight; ///< h1 / ||a||_{L^1}
    std::optional<bool> within_k0;      ///< max |u| <= k0 + 1e-6
};

struct SolveReport {
    bool existence_ok = false;
    std::string mode;
    std::vector<double> m_grid;
    std::vector<LevelReport> levels;
    std::vector<double> cauchy; ///< ||u_{n_{j+1}} - u_{n_j}||_{H^1}
    bool cauchy_decreasing = true;
    double h1_variation = 0.0;  ///< (max - min) / max of h1 over levels
    std::optional<double> k0;
    double max_ratio_source = 0.0;
    double max_ratio_weight = 0.0;
    bool converged = false;

    std::string to_json() const;
    /// (level, iter, gap) rows for every level.
    std::string residual_csv() const;
};

struct SolveResult {
    DiscreteField solution;
    SolveReport report;
};

/// u^{k+1} = (1 - theta) u^k + theta K^{-1} b(u^k) until the H^1 gap drops
/// below the tolerance. Gaps rising `divergence_window` times in a row halve
/// theta and restart once; a second failure, or running out of iterations,
/// throws NonConvergenceError carrying the gap history.
SolveResult picard_solve(const RegularizedProblem& problem, const RadialMesh& mesh,
                         const SolveOptions& options,
                         const std::optional<DiscreteField>& initial = std::nullopt);

/// Picard over the n schedule, warm-starting each level from the previous one.
SolveResult continuation_solve(const ProblemSpec& spec, const RadialMesh& mesh,
                               const SolveOptions& options,
                               const std::optional<DiscreteField>& initial = std::nullopt);

} // namespace hardyrad
