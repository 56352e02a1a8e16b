#include "cli.hpp"

#include "svg.hpp"

#include "hardyrad/analysis.hpp"
#include "hardyrad/config.hpp"
#include "hardyrad/csv.hpp"
#include "hardyrad/errors.hpp"
#include "hardyrad/manufactured.hpp"
#include "hardyrad/solver.hpp"
#include "hardyrad/thresholds.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <sstream>

namespace hardyrad::cli {

namespace {

namespace fs = std::filesystem;

struct Context {
    std::ostream& out;
    std::ostream& err;
    std::string out_dir;
};

std::string g17(double x)
{
    return format_double(x);
}

fs::path output_dir(const std::string& flag, const std::string& from_config = {})
{
    std::string dir = flag;
    if (dir.empty()) dir = from_config;
    if (dir.empty()) {
        const char* env = std::getenv("HARDYRAD_OUTPUT_DIR");
        dir = env && *env ? env : ".";
    }
    fs::create_directories(dir);
    return dir;
}

std::string existence_message(const HypothesisSet& hyp)
{
    const double H = hardy_constant(hyp.dimension);
    std::ostringstream msg;
    msg << "existence hypothesis alpha*H^2 > A*H + lambda fails (" << hyp.alpha * H * H
        << " <= " << hyp.drift * H + hyp.lambda << ")";
    return msg.str();
}

// ---------------------------------------------------------------------------

struct ThresholdArgs {
    double alpha = 1.0;
    double beta = 0.0;
    double drift = 0.0;
    double lambda = 0.0;
    int dim = 3;
    double q = 1.0;
    double m = 0.0;
    double sobolev = 1.0;
    int points = 200;
    std::string prefix = "threshold";
    bool svg = false;
};

int run_threshold(const ThresholdArgs& a, Context& ctx)
{
    HypothesisSet hyp;
    hyp.dimension = a.dim;
    hyp.alpha = a.alpha;
    hyp.beta = a.beta > 0.0 ? a.beta : a.alpha;
    hyp.drift = a.drift;
    hyp.lambda = a.lambda;
    hyp.q = a.q;
    hyp.validate();
    if (a.points < 2) throw DomainError("--points must be >= 2");

    const double H = hardy_constant(hyp.dimension);
    const double s2 = sobolev_exponent(hyp.dimension);
    ctx.out << "H = " << g17(H) << '\n';
    ctx.out << "2* = " << g17(s2) << '\n';
    ctx.out << "F(2*) = " << g17(eval_F(s2, hyp)) << '\n';
    if (!check_existence(hyp)) {
        ctx.out << "existence: false\n";
        ctx.err << existence_message(hyp) << '\n';
        return kHypothesis;
    }
    ctx.out << "existence: true (alpha*H^2 = " << g17(hyp.alpha * H * H)
            << " > A*H + lambda = " << g17(hyp.drift * H + hyp.lambda) << ")\n";
    const MThreshold m = solve_m_threshold(hyp);
    ctx.out << "m_threshold = " << (m.is_finite() ? g17(m.value) : std::string("inf")) << '\n';
    const ExistenceCrossCheck cc = cross_check_existence(hyp);
    ctx.out << "cross-check: " << (cc.agree ? "agree" : "DISAGREE") << '\n';

    if (a.m > 0.0) {
        const EstimateConstants c = lm_estimate_constant(hyp, a.m, a.sobolev, Nonlinearity::linear());
        ctx.out << "c_lin(m = " << g17(a.m) << ") = " << g17(c.c_lin) << '\n';
        ctx.out << "c_bound = " << (c.c_bound ? g17(*c.c_bound) : std::string("unavailable (c_lin <= 0)"))
                << '\n';
    }

    const double hi = m.is_finite() ? 3.0 * m.value : 10.0 * s2;
    CsvTable curve{{"m", "F"}, {}};
    std::vector<double> xs;
    std::vector<double> ys;
    for (int i = 0; i < a.points; ++i) {
        const double t = i + 1 == a.points ? hi : s2 + (hi - s2) * i / (a.points - 1.0);
        const double f = eval_F(t, hyp);
        curve.rows.push_back({t, f});
        xs.push_back(t);
        ys.push_back(f);
    }
    const fs::path dir = output_dir(ctx.out_dir);
    std::ostringstream csv;
    write_csv(csv, curve);
    const fs::path path = dir / (a.prefix + "_F.csv");
    write_file(path.string(), csv.str());
    ctx.out << "F-curve: " << path.string() << '\n';
    if (a.svg) {
        const fs::path svg = dir / (a.prefix + "_F.svg");
        write_file(svg.string(), render_polyline_svg(xs, ys, "F(m)"));
        ctx.out << "F-curve plot: " << svg.string() << '\n';
    }
    return kOk;
}

// ---------------------------------------------------------------------------

void print_verdicts(const RunConfig& cfg, const DiscreteField& u, Context& ctx)
{
    const MaxPrincipleVerdict weak = check_weak_maximum(u, cfg.spec);
    ctx.out << "weak maximum principle: " << (weak.weak_ok ? "holds" : "fails")
            << " (min = " << g17(weak.min_value) << ", tolerance = " << g17(weak.tolerance) << ")\n";
    ctx.out << "sign preconditions f = Q a, h(k0) <= Q: "
            << (weak.preconditions_ok.value_or(false) ? "satisfied" : "not satisfied") << '\n';
    const MaxPrincipleVerdict strong = check_strong_maximum(u, cfg.tasks.inner_radius);
    ctx.out << "strong maximum principle: " << (strong.strong_ok ? "holds" : "fails")
            << " (c_omega = " << g17(*strong.c_omega) << " on r <= " << g17(cfg.tasks.inner_radius)
            << ")\n";
}

std::vector<RefinementLevel> scan_levels(const TaskConfig& t)
{
    std::vector<RefinementLevel> levels;
    for (double c : t.scan_cutoffs) levels.push_back({t.scan_elements, t.scan_grading, c});
    return levels;
}

void print_scan(const SummabilityReport& rep, Context& ctx)
{
    const auto growth = rep.integral_growth();
    for (std::size_t j = 0; j < rep.m_grid.size(); ++j) {
        ctx.out << "m = " << g17(rep.m_grid[j]) << ": " << to_string(rep.classes[j])
                << " (finest norm " << g17(rep.norms.back()[j]) << ", integral growth "
                << g17(growth[j]) << ")\n";
    }
    if (rep.predicted) {
        ctx.out << "predicted threshold m = "
                << (rep.predicted->is_finite() ? g17(rep.predicted->value) : std::string("inf")) << '\n';
    }
    ctx.out << "empirical transition m = "
            << (rep.empirical_transition ? g17(*rep.empirical_transition) : std::string("none")) << '\n';
}

int run_solve(const std::string& config_path, const std::string& prefix_flag, bool svg_flag,
              bool verdicts_only, Context& ctx)
{
    const RunConfig cfg = load_run_config(config_path);
    const RadialMesh mesh = cfg.mesh.build(cfg.spec.hyp.dimension);
    const bool existence = check_existence(cfg.spec.hyp);
    if (!existence) ctx.err << "warning: " << existence_message(cfg.spec.hyp) << '\n';

    SolveResult result = [&] {
        try {
            return continuation_solve(cfg.spec, mesh, cfg.solver);
        } catch (const NonConvergenceError& e) {
            if (!existence) throw HypothesisError(std::string(e.what()) + "; " + existence_message(cfg.spec.hyp));
            throw;
        }
    }();

    if (verdicts_only) {
        print_verdicts(cfg, result.solution, ctx);
        return existence ? kOk : kHypothesis;
    }

    const fs::path dir = output_dir(ctx.out_dir, cfg.output.directory);
    const std::string prefix = prefix_flag.empty() ? cfg.output.prefix : prefix_flag;
    std::ostringstream sol;
    write_field_csv(sol, result.solution);
    write_file((dir / (prefix + "_solution.csv")).string(), sol.str());
    write_file((dir / (prefix + "_report.json")).string(), result.report.to_json() + "\n");
    write_file((dir / (prefix + "_residuals.csv")).string(), result.report.residual_csv());
    if (svg_flag || cfg.output.svg) {
        const auto nodes = result.solution.mesh().nodes();
        const auto values = result.solution.values();
        write_file((dir / (prefix + "_solution.svg")).string(),
                   render_polyline_svg({nodes.begin(), nodes.end()}, {values.begin(), values.end()}, "u(r)"));
    }

    const LevelReport& last = result.report.levels.back();
    ctx.out << "levels: " << result.report.levels.size() << ", mode: " << result.report.mode << '\n';
    ctx.out << "iterations (last level): " << last.iterations << '\n';
    ctx.out << "H1 seminorm: " << g17(last.h1) << ", max |u|: " << g17(last.linf) << '\n';
    ctx.out << "Cauchy differences decreasing: " << (result.report.cauchy_decreasing ? "yes" : "no")
            << '\n';
    ctx.out << "solution: " << (dir / (prefix + "_solution.csv")).string() << '\n';
    if (cfg.tasks.maxprin) print_verdicts(cfg, result.solution, ctx);
    if (cfg.tasks.scan) {
        std::vector<double> grid = cfg.tasks.m_grid;
        if (grid.empty()) grid = result.report.m_grid;
        const SummabilityReport rep =
            summability_scan(cfg.spec, grid, scan_levels(cfg.tasks), cfg.solver, cfg.tasks.workers);
        write_file((dir / (prefix + "_summability.csv")).string(), rep.to_csv());
        print_scan(rep, ctx);
    }
    if (!existence) {
        ctx.err << existence_message(cfg.spec.hyp) << '\n';
        return kHypothesis;
    }
    return kOk;
}

// ---------------------------------------------------------------------------

struct ScanArgs {
    std::string config;
    double rho = 0.0;
    int dim = 3;
    std::vector<double> m_grid;
    std::vector<double> cutoffs{1e-4, 1e-25, 1e-280};
    int elements = 4000;
    double grading = 0.5;
    int workers = 1;
    std::string prefix = "scan";
};

int run_scan(const ScanArgs& a, Context& ctx)
{
    SummabilityReport rep;
    std::string out_dir_cfg;
    if (!a.config.empty()) {
        const RunConfig cfg = load_run_config(a.config);
        out_dir_cfg = cfg.output.directory;
        std::vector<double> grid = a.m_grid.empty() ? cfg.tasks.m_grid : a.m_grid;
        if (grid.empty()) {
            const double s2 = sobolev_exponent(cfg.spec.hyp.dimension);
            grid = {s2, 1.5 * s2, 2.0 * s2};
        }
        rep = summability_scan(cfg.spec, grid, scan_levels(cfg.tasks), cfg.solver,
                               std::max(a.workers, cfg.tasks.workers));
    } else {
        if (!(a.rho > 0.0)) throw DomainError("scan needs --config or --rho > 0");
        const ExactField u = exact_u_rho(a.rho, a.dim);
        if (!u.in_h1) ctx.err << "note: u_rho is outside H^1 for rho >= (N-2)/2\n";
        std::vector<double> grid = a.m_grid;
        if (grid.empty()) {
            const double s2 = sobolev_exponent(a.dim);
            for (double m = s2; m <= 2.0 * s2 + 1e-12; m += 1.0) grid.push_back(m);
        }
        std::vector<RefinementLevel> levels;
        for (double c : a.cutoffs) levels.push_back({a.elements, a.grading, c});
        rep = summability_scan([&](double r) { return u.value(r); }, a.dim, grid, levels, a.workers);
        ctx.out << "critical exponent N/rho = " << g17(a.dim / a.rho) << '\n';
    }
    const fs::path dir = output_dir(ctx.out_dir, out_dir_cfg);
    const fs::path path = dir / (a.prefix + "_summability.csv");
    write_file(path.string(), rep.to_csv());
    print_scan(rep, ctx);
    ctx.out << "summability: " << path.string() << '\n';
    return kOk;
}

// ---------------------------------------------------------------------------

struct ExampleArgs {
    double alpha = 7.0;
    double lambda = 1.0;
    int dim = 3;
    double m = 9.0;
    int elements = 4000;
    double grading = 0.7;
    std::string prefix = "example";
};

int run_example(const ExampleArgs& a, Context& ctx)
{
    const ExampleCoefficients c = optimality_example_coefficients(a.alpha, a.lambda, a.dim, a.m);
    ctx.out << "rho = N/m = " << g17(c.rho) << '\n';
    ctx.out << "F(m) = " << g17(c.f_at_m) << '\n';
    ctx.out << "C(alpha, rho) = " << g17(c.c) << '\n';
    ctx.out << "a_m = " << g17(c.a_coefficient) << " / r^2\n";
    ctx.out << "f_m = " << g17(c.f_coefficient) << " / r^2\n";
    ctx.out << "Q_m >= " << g17(c.q_bound) << (c.q_bound_positive ? "" : "  (NOT positive)") << '\n';

    const RadialMesh mesh = RadialMesh::build(a.elements, a.grading, a.dim, 0.0);
    const ExactField u = exact_u_rho(c.rho, a.dim);
    ctx.out << "u_rho in H^1: " << (u.in_h1 ? "yes" : "no") << '\n';
    ctx.out << "transport identity residual: " << g17(residual_norm(u.value, kl_problem(c.rho, a.dim), mesh))
            << '\n';
    ctx.out << "printed example residual (diagnostic): "
            << g17(residual_norm(u.value, sz_problem(a.alpha, a.lambda, a.dim, a.m), mesh)) << '\n';

    std::vector<double> grid;
    const double s2 = sobolev_exponent(a.dim);
    for (double m = s2; m <= std::ceil(a.m) + 1.0 + 1e-12; m += 1.0) grid.push_back(m);
    const std::vector<RefinementLevel> levels{{500, 0.5, 1e-4}, {2000, 0.5, 1e-25}, {8000, 0.5, 1e-280}};
    const SummabilityReport rep =
        summability_scan([&](double r) { return u.value(r); }, a.dim, grid, levels);
    const fs::path dir = output_dir(ctx.out_dir);
    const fs::path path = dir / (a.prefix + "_summability.csv");
    write_file(path.string(), rep.to_csv());
    print_scan(rep, ctx);
    ctx.out << "summability: " << path.string() << '\n';
    return kOk;
}

// ---------------------------------------------------------------------------

struct MeshArgs {
    int dim = 3;
    int elements = 2000;
    double grading = 1.0;
    double cutoff = 0.0;
};

int run_spectral(const MeshArgs& a, bool hardy, Context& ctx)
{
    const RadialMesh mesh = RadialMesh::build(a.elements, a.grading, a.dim, a.cutoff);
    const EigenResult r = hardy ? min_hardy_rayleigh(mesh) : dirichlet_eigenvalue(mesh);
    if (hardy) {
        const double H = hardy_constant(a.dim);
        ctx.out << "min Hardy quotient = " << g17(r.value) << " (H^2 = " << g17(H * H) << ")\n";
    } else {
        ctx.out << "mu_1 = " << g17(r.value) << '\n';
    }
    ctx.out << "iterations = " << r.iterations << '\n';
    return kOk;
}

void add_mesh_options(CLI::App* cmd, MeshArgs& m)
{
    cmd->add_option("--dim", m.dim, "dimension N");
    cmd->add_option("--elements", m.elements, "element count");
    cmd->add_option("--grading", m.grading, "geometric grading ratio in (0, 1]");
    cmd->add_option("--cutoff", m.cutoff, "inner radius of the mesh");
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Radial finite-element solver for elliptic problems with Hardy potential and singular drift"};
    app.require_subcommand(1);
    Context ctx{out, err, {}};
    app.add_option("--out-dir", ctx.out_dir, "directory for emitted files");

    ThresholdArgs th;
    auto* threshold = app.add_subcommand("threshold", "threshold function F and m_{lambda,A}");
    threshold->add_option("--alpha", th.alpha, "ellipticity lower bound");
    threshold->add_option("--beta", th.beta, "coefficient upper bound (default alpha)");
    threshold->add_option("--drift", th.drift, "drift bound A");
    threshold->add_option("--lambda", th.lambda, "Hardy potential weight");
    threshold->add_option("--dim", th.dim, "dimension N");
    threshold->add_option("--q", th.q, "data domination constant Q");
    threshold->add_option("--m", th.m, "also report the L^m estimate constants at this m");
    threshold->add_option("--sobolev", th.sobolev, "Sobolev constant S");
    threshold->add_option("--points", th.points, "F-curve sample count");
    threshold->add_option("--prefix", th.prefix, "output file prefix");
    threshold->add_flag("--svg", th.svg, "also write an SVG plot");
    threshold->add_option("--out-dir", ctx.out_dir, "directory for emitted files");

    std::string config;
    std::string prefix;
    bool svg = false;
    auto* solve = app.add_subcommand("solve", "continuation solve from a config file");
    solve->add_option("config", config, "run configuration")->required();
    solve->add_option("--prefix", prefix, "output file prefix (overrides the config)");
    solve->add_flag("--svg", svg, "also write an SVG plot of the solution");
    solve->add_option("--out-dir", ctx.out_dir, "directory for emitted files");

    auto* maxprin = app.add_subcommand("maxprin", "weak and strong maximum-principle verdicts");
    maxprin->add_option("config", config, "run configuration")->required();

    ExampleArgs ex;
    auto* example = app.add_subcommand("verify-example", "optimality example: coefficients, residuals, summability");
    example->add_option("--alpha", ex.alpha, "alpha");
    example->add_option("--lambda", ex.lambda, "lambda");
    example->add_option("--dim", ex.dim, "dimension N");
    example->add_option("--m", ex.m, "exponent m (rho = N/m)");
    example->add_option("--elements", ex.elements, "residual mesh element count");
    example->add_option("--grading", ex.grading, "residual mesh grading");
    example->add_option("--prefix", ex.prefix, "output file prefix");
    example->add_option("--out-dir", ctx.out_dir, "directory for emitted files");

    MeshArgs hardy_mesh;
    auto* hardy = app.add_subcommand("hardy", "minimal discrete Hardy quotient");
    add_mesh_options(hardy, hardy_mesh);
    MeshArgs eigen_mesh;
    auto* eigen = app.add_subcommand("eigen", "first Dirichlet eigenvalue of -Delta on the ball");
    add_mesh_options(eigen, eigen_mesh);

    ScanArgs sc;
    auto* scan = app.add_subcommand("scan", "L^m summability scan under cutoff refinement");
    scan->add_option("--config", sc.config, "scan the solution of this configuration");
    scan->add_option("--rho", sc.rho, "scan the exact field r^{-rho} - 1 instead");
    scan->add_option("--dim", sc.dim, "dimension N (with --rho)");
    scan->add_option("--m", sc.m_grid, "m grid")->delimiter(',');
    scan->add_option("--cutoffs", sc.cutoffs, "strictly decreasing inner cutoffs")->delimiter(',');
    scan->add_option("--elements", sc.elements, "elements per level (with --rho)");
    scan->add_option("--grading", sc.grading, "grading per level (with --rho)");
    scan->add_option("--workers", sc.workers, "levels processed concurrently");
    scan->add_option("--prefix", sc.prefix, "output file prefix");
    scan->add_option("--out-dir", ctx.out_dir, "directory for emitted files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        std::ostringstream sink;
        app.exit(e, sink, err);
        return kFailure;
    }

    try {
        if (*threshold) return run_threshold(th, ctx);
        if (*solve) return run_solve(config, prefix, svg, false, ctx);
        if (*maxprin) return run_solve(config, {}, false, true, ctx);
        if (*example) return run_example(ex, ctx);
        if (*hardy) return run_spectral(hardy_mesh, true, ctx);
        if (*eigen) return run_spectral(eigen_mesh, false, ctx);
        if (*scan) return run_scan(sc, ctx);
    } catch (const HypothesisError& e) {
        err << e.what() << '\n';
        return kHypothesis;
    } catch (const ParseError& e) {
        err << "config error: " << e.what() << '\n';
        return kFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kFailure;
}

} // namespace hardyrad::cli
