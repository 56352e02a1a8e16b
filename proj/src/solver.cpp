#include "hardyrad/solver.hpp"

#include "hardyrad/csv.hpp"
#include "hardyrad/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hardyrad {

namespace {

std::vector<double> default_grid(const SolveOptions& options, int dimension)
{
    if (!options.m_grid.empty()) return options.m_grid;
    const double s2 = sobolev_exponent(dimension);
    return {s2, 1.5 * s2, 2.0 * s2};
}

struct Attempt {
    std::optional<DiscreteField> field;
    std::vector<double> gaps;
    bool diverged = false;
};

Attempt iterate(const Assembler& assembler, const DiscreteField& start, double theta,
                const SolveOptions& options)
{
    Attempt out;
    DiscreteField u = start;
    int rising = 0;
    for (int k = 0; k < options.max_iterations; ++k) {
        const DiscreteField target = solve_linear(assembler.system(u));
        DiscreteField next = (1.0 - theta) * u + theta * target;
        const double gap = h1_seminorm(next - u);
        out.gaps.push_back(gap);
        u = std::move(next);
        if (!std::isfinite(gap)) {
            out.diverged = true;
            return out;
        }
        if (gap <= options.tolerance) {
            out.field = std::move(u);
            return out;
        }
        const std::size_t n = out.gaps.size();
        rising = n >= 2 && out.gaps[n - 1] > out.gaps[n - 2] ? rising + 1 : 0;
        if (rising >= options.divergence_window) {
            out.diverged = true;
            return out;
        }
    }
    return out;
}

std::string level_name(const std::optional<double>& level)
{
    return level ? format_double(*level) : std::string("inf");
}

void measure(LevelReport& rep, const DiscreteField& u, const Assembler& assembler,
             const std::vector<double>& grid)
{
    const RadialMesh& mesh = u.mesh();
    const ProblemSpec& spec = assembler.problem().base;
    rep.residual = dual_norm(mesh, assembler.residual(u));
    rep.h1 = h1_seminorm(u);
    rep.linf = u.max_abs();
    for (double m : grid) rep.lm_norms.push_back(weighted_lp_norm(u, m));

    const int n = spec.hyp.dimension;
    const double data_exponent = 2.0 * n / (n + 2.0);
    const double f_norm =
        weighted_lp_norm([&](double r) { return spec.source(r); }, data_exponent, mesh);
    if (f_norm > 0.0) rep.ratio_source = rep.h1 / f_norm;
    if (spec.zero_order) {
        const double a_norm = weighted_lp_norm([&](double r) { return spec.weight(r); }, 1.0, mesh);
        if (a_norm > 0.0) rep.ratio_weight = rep.h1 / a_norm;
    }
}

} // namespace

void SolveOptions::validate() const
{
    if (!(theta > 0.0 && theta <= 1.0)) throw DomainError("relaxation theta must be in (0, 1]");
    if (!(tolerance > 0.0)) throw DomainError("tolerance must be positive");
    if (max_iterations < 1) throw DomainError("max iterations must be >= 1");
    if (divergence_window < 1) throw DomainError("divergence window must be >= 1");
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (!(schedule[i] >= 1.0)) throw DomainError("schedule levels must be >= 1");
        if (i > 0 && !(schedule[i] > schedule[i - 1])) {
            throw DomainError("schedule must be strictly increasing");
        }
    }
    for (double m : m_grid) {
        if (!(m >= 1.0)) throw DomainError("m grid entries must be >= 1");
    }
}

TruncationMode SolveOptions::resolve_mode(const ProblemSpec& spec) const
{
    if (mode) return *mode;
    return spec.zero_order ? TruncationMode::hard : TruncationMode::rational;
}

SolveResult picard_solve(const RegularizedProblem& problem, const RadialMesh& mesh,
                         const SolveOptions& options, const std::optional<DiscreteField>& initial)
{
    options.validate();
    problem.base.validate_on(mesh);
    const Assembler assembler(problem, mesh);
    const DiscreteField start = initial ? *initial : DiscreteField::zero(mesh);
    if (!start.mesh().same_as(mesh)) throw DomainError("initial guess lives on a different mesh");

    LevelReport rep;
    rep.level = problem.level;
    rep.theta = options.theta;
    Attempt attempt = iterate(assembler, start, rep.theta, options);
    if (attempt.diverged) {
        rep.relaxation_halved = true;
        rep.theta *= 0.5;
        std::vector<double> history = std::move(attempt.gaps);
        attempt = iterate(assembler, start, rep.theta, options);
        history.insert(history.end(), attempt.gaps.begin(), attempt.gaps.end());
        attempt.gaps = std::move(history);
    }
    if (!attempt.field) {
        std::ostringstream msg;
        msg << "Picard iteration at level n = " << level_name(problem.level)
            << (attempt.diverged ? " diverged after halving theta" : " hit the iteration limit")
            << " (last gap " << (attempt.gaps.empty() ? 0.0 : attempt.gaps.back()) << ")";
        throw NonConvergenceError(msg.str(), std::move(attempt.gaps));
    }
    rep.gaps = std::move(attempt.gaps);
    rep.iterations = static_cast<int>(rep.gaps.size());
    for (std::size_t k = 5; k < rep.gaps.size(); ++k) {
        if (rep.gaps[k] > rep.gaps[k - 1]) rep.monotone_after_5 = false;
    }

    SolveReport report;
    report.existence_ok = check_existence(problem.base.hyp);
    report.mode = to_string(problem.mode);
    report.m_grid = default_grid(options, mesh.dimension());
    measure(rep, *attempt.field, assembler, report.m_grid);
    if (problem.base.zero_order && problem.base.dominated_on(mesh)) {
        report.k0 = compute_k0(problem.base.h, problem.base.hyp.q);
        rep.within_k0 = rep.linf <= *report.k0 + 1e-6;
    }
    report.max_ratio_source = rep.ratio_source.value_or(0.0);
    report.max_ratio_weight = rep.ratio_weight.value_or(0.0);
    report.levels.push_back(std::move(rep));
    report.converged = true;
    return {std::move(*attempt.field), std::move(report)};
}

SolveResult continuation_solve(const ProblemSpec& spec, const RadialMesh& mesh,
                               const SolveOptions& options,
                               const std::optional<DiscreteField>& initial)
{
    options.validate();
    if (options.schedule.empty()) throw DomainError("continuation needs a nonempty schedule");
    const TruncationMode mode = options.resolve_mode(spec);

    SolveReport report;
    std::optional<DiscreteField> current = initial;
    std::optional<DiscreteField> previous;
    for (double n : options.schedule) {
        SolveResult step = picard_solve(regularize(spec, n, mode), mesh, options, current);
        if (report.levels.empty()) {
            report = step.report;
        } else {
            report.levels.push_back(std::move(step.report.levels.front()));
        }
        if (previous) report.cauchy.push_back(h1_seminorm(step.solution - *previous));
        previous = step.solution;
        current = std::move(step.solution);
    }

    for (std::size_t j = 1; j < report.cauchy.size(); ++j) {
        if (!(report.cauchy[j] < report.cauchy[j - 1])) report.cauchy_decreasing = false;
    }
    double lo = report.levels.front().h1;
    double hi = lo;
    for (const auto& lv : report.levels) {
        lo = std::min(lo, lv.h1);
        hi = std::max(hi, lv.h1);
        report.max_ratio_source = std::max(report.max_ratio_source, lv.ratio_source.value_or(0.0));
        report.max_ratio_weight = std::max(report.max_ratio_weight, lv.ratio_weight.value_or(0.0));
    }
    report.h1_variation = hi > 0.0 ? (hi - lo) / hi : 0.0;
    return {std::move(*current), std::move(report)};
}

std::string SolveReport::to_json() const
{
    using nlohmann::json;
    json j;
    j["existence_ok"] = existence_ok;
    j["mode"] = mode;
    j["converged"] = converged;
    j["m_grid"] = m_grid;
    j["cauchy"] = cauchy;
    j["cauchy_decreasing"] = cauchy_decreasing;
    j["h1_variation"] = h1_variation;
    j["k0"] = k0 ? json(*k0) : json(nullptr);
    j["max_ratio_source"] = max_ratio_source;
    j["max_ratio_weight"] = max_ratio_weight;
    json levels = json::array();
    for (const auto& lv : this->levels) {
        json l;
        l["level"] = lv.level ? json(*lv.level) : json(nullptr);
        l["iterations"] = lv.iterations;
        l["theta"] = lv.theta;
        l["relaxation_halved"] = lv.relaxation_halved;
        l["final_gap"] = lv.gaps.empty() ? 0.0 : lv.gaps.back();
        l["monotone_after_5"] = lv.monotone_after_5;
        l["residual"] = lv.residual;
        l["h1"] = lv.h1;
        l["linf"] = lv.linf;
        l["lm_norms"] = lv.lm_norms;
        l["ratio_source"] = lv.ratio_source ? json(*lv.ratio_source) : json(nullptr);
        l["ratio_weight"] = lv.ratio_weight ? json(*lv.ratio_weight) : json(nullptr);
        l["within_k0"] = lv.within_k0 ? json(*lv.within_k0) : json(nullptr);
        levels.push_back(std::move(l));
    }
    j["levels"] = std::move(levels);
    return j.dump(2);
}

std::string SolveReport::residual_csv() const
{
    std::ostringstream out;
    out << "level,iter,gap\n";
    for (const auto& lv : levels) {
        const std::string name = level_name(lv.level);
        for (std::size_t k = 0; k < lv.gaps.size(); ++k) {
            out << name << ',' << (k + 1) << ',' << format_double(lv.gaps[k]) << '\n';
        }
    }
    return out.str();
}

} // namespace hardyrad
