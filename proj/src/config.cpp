#include "hardyrad/config.hpp"

#include "hardyrad/errors.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace hardyrad {

namespace {

struct Value {
    std::string text;
    std::size_t line = 0;
    std::size_t column = 0;
};

std::string trim(std::string_view s, std::size_t* offset = nullptr)
{
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
    while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
    if (offset) *offset = a;
    return std::string(s.substr(a, b - a));
}

[[noreturn]] void fail(const Value& v, const std::string& message)
{
    throw ParseError(message, v.line, v.column);
}

double to_number(const Value& v, const std::string& key)
{
    const char* begin = v.text.c_str();
    char* end = nullptr;
    errno = 0;
    const double x = std::strtod(begin, &end);
    if (v.text.empty() || end != begin + v.text.size() || errno == ERANGE || !std::isfinite(x)) {
        fail(v, "invalid number for '" + key + "': '" + v.text + "'");
    }
    return x;
}

int to_integer(const Value& v, const std::string& key)
{
    const double x = to_number(v, key);
    if (x != std::floor(x) || std::abs(x) > 1e9) fail(v, "'" + key + "' must be an integer");
    return static_cast<int>(x);
}

bool to_bool(const Value& v, const std::string& key)
{
    if (v.text == "true" || v.text == "yes" || v.text == "1") return true;
    if (v.text == "false" || v.text == "no" || v.text == "0") return false;
    fail(v, "'" + key + "' must be true or false");
}

std::vector<double> to_list(const Value& v, const std::string& key)
{
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= v.text.size()) {
        const std::size_t comma = std::min(v.text.find(',', start), v.text.size());
        std::size_t lead = 0;
        const std::string item = trim(std::string_view(v.text).substr(start, comma - start), &lead);
        out.push_back(to_number({item, v.line, v.column + start + lead}, key));
        start = comma + 1;
    }
    return out;
}

PowerSum to_power_sum(const Value& v)
{
    try {
        return parse_power_sum(v.text, v.line);
    } catch (const ParseError& e) {
        throw ParseError(e.message(), v.line, v.column + e.column() - 1);
    }
}

using Handler = std::function<void(RunConfig&, const Value&)>;
using Section = std::map<std::string, Handler>;

std::map<std::string, Section> schema()
{
    std::map<std::string, Section> s;
    auto positive = [](const Value& v, const std::string& key, double x) {
        if (!(x > 0.0)) fail(v, "'" + key + "' must be positive");
        return x;
    };
    auto& problem = s["problem"];
    problem["dimension"] = [](RunConfig& c, const Value& v) {
        const int n = to_integer(v, "dimension");
        if (n < 3) fail(v, "'dimension' must be >= 3 (Hardy constant (N-2)/2 must be positive)");
        c.spec.hyp.dimension = n;
    };
    problem["alpha"] = [=](RunConfig& c, const Value& v) {
        c.spec.hyp.alpha = positive(v, "alpha", to_number(v, "alpha"));
    };
    problem["beta"] = [=](RunConfig& c, const Value& v) {
        c.spec.hyp.beta = positive(v, "beta", to_number(v, "beta"));
    };
    problem["drift"] = [](RunConfig& c, const Value& v) {
        const double a = to_number(v, "drift");
        if (!(a >= 0.0)) fail(v, "'drift' (A) must be nonnegative");
        c.spec.hyp.drift = a;
    };
    problem["lambda"] = [](RunConfig& c, const Value& v) {
        const double l = to_number(v, "lambda");
        if (!(l >= 0.0)) fail(v, "'lambda' must be nonnegative");
        c.spec.hyp.lambda = l;
    };
    problem["q"] = [=](RunConfig& c, const Value& v) {
        c.spec.hyp.q = positive(v, "q", to_number(v, "q"));
    };
    problem["zero_order"] = [](RunConfig& c, const Value& v) {
        c.spec.zero_order = to_bool(v, "zero_order");
    };

    auto& coeff = s["coefficients"];
    coeff["diffusion"] = [](RunConfig& c, const Value& v) { c.spec.diffusion = to_power_sum(v); };
    coeff["weight"] = [](RunConfig& c, const Value& v) { c.spec.weight = to_power_sum(v); };
    coeff["source"] = [](RunConfig& c, const Value& v) { c.spec.source = to_power_sum(v); };
    coeff["drift_coefficient"] = [](RunConfig& c, const Value& v) {
        c.spec.drift = to_number(v, "drift_coefficient");
    };
    coeff["h"] = [](RunConfig& c, const Value& v) {
        if (v.text == "linear") {
            c.spec.h.kind = Nonlinearity::Kind::linear;
        } else if (v.text == "odd_power") {
            c.spec.h.kind = Nonlinearity::Kind::odd_power;
        } else {
            fail(v, "'h' must be linear or odd_power");
        }
    };
    coeff["h_exponent"] = [](RunConfig& c, const Value& v) {
        const double p = to_number(v, "h_exponent");
        if (!(p >= 1.0)) fail(v, "'h_exponent' must be >= 1");
        c.spec.h.exponent = p;
    };
    coeff["h_coefficient"] = [=](RunConfig& c, const Value& v) {
        c.spec.h.coefficient = positive(v, "h_coefficient", to_number(v, "h_coefficient"));
    };

    auto& mesh = s["mesh"];
    mesh["elements"] = [](RunConfig& c, const Value& v) {
        const int e = to_integer(v, "elements");
        if (e < 2) fail(v, "'elements' must be >= 2");
        c.mesh.elements = e;
    };
    mesh["grading"] = [](RunConfig& c, const Value& v) {
        const double q = to_number(v, "grading");
        if (!(q > 0.0 && q <= 1.0)) fail(v, "'grading' must be in (0, 1]");
        c.mesh.grading = q;
    };
    mesh["cutoff"] = [](RunConfig& c, const Value& v) {
        const double r = to_number(v, "cutoff");
        if (!(r >= 0.0 && r < 1.0)) fail(v, "'cutoff' must be in [0, 1)");
        c.mesh.cutoff = r;
    };
    mesh["quadrature_order"] = [](RunConfig& c, const Value& v) {
        const int q = to_integer(v, "quadrature_order");
        if (q < 1 || q > 64) fail(v, "'quadrature_order' must be in [1, 64]");
        c.mesh.quadrature_order = q;
    };

    auto& solver = s["solver"];
    solver["theta"] = [](RunConfig& c, const Value& v) {
        const double t = to_number(v, "theta");
        if (!(t > 0.0 && t <= 1.0)) fail(v, "'theta' must be in (0, 1]");
        c.solver.theta = t;
    };
    solver["tolerance"] = [=](RunConfig& c, const Value& v) {
        c.solver.tolerance = positive(v, "tolerance", to_number(v, "tolerance"));
    };
    solver["max_iterations"] = [](RunConfig& c, const Value& v) {
        const int k = to_integer(v, "max_iterations");
        if (k < 1) fail(v, "'max_iterations' must be >= 1");
        c.solver.max_iterations = k;
    };
    solver["schedule"] = [](RunConfig& c, const Value& v) {
        const std::vector<double> levels = to_list(v, "schedule");
        for (std::size_t i = 0; i < levels.size(); ++i) {
            if (!(levels[i] >= 1.0)) fail(v, "'schedule' levels must be >= 1");
            if (i > 0 && !(levels[i] > levels[i - 1])) fail(v, "'schedule' must be strictly increasing");
        }
        c.solver.schedule = levels;
    };
    solver["truncation"] = [](RunConfig& c, const Value& v) {
        if (v.text == "rational") {
            c.solver.mode = TruncationMode::rational;
        } else if (v.text == "hard") {
            c.solver.mode = TruncationMode::hard;
        } else if (v.text == "auto") {
            c.solver.mode.reset();
        } else {
            fail(v, "'truncation' must be rational, hard or auto");
        }
    };
    solver["sobolev"] = [=](RunConfig& c, const Value& v) {
        c.sobolev = positive(v, "sobolev", to_number(v, "sobolev"));
    };

    auto& tasks = s["tasks"];
    tasks["maxprin"] = [](RunConfig& c, const Value& v) { c.tasks.maxprin = to_bool(v, "maxprin"); };
    tasks["inner_radius"] = [](RunConfig& c, const Value& v) {
        const double r = to_number(v, "inner_radius");
        if (!(r > 0.0 && r < 1.0)) fail(v, "'inner_radius' must be in (0, 1)");
        c.tasks.inner_radius = r;
    };
    tasks["scan"] = [](RunConfig& c, const Value& v) { c.tasks.scan = to_bool(v, "scan"); };
    tasks["m_grid"] = [](RunConfig& c, const Value& v) {
        c.tasks.m_grid = to_list(v, "m_grid");
        for (double m : c.tasks.m_grid) {
            if (!(m >= 1.0)) fail(v, "'m_grid' entries must be >= 1");
        }
    };
    tasks["scan_cutoffs"] = [](RunConfig& c, const Value& v) {
        const std::vector<double> cuts = to_list(v, "scan_cutoffs");
        if (cuts.size() < 3) fail(v, "'scan_cutoffs' needs at least 3 levels");
        for (std::size_t i = 0; i < cuts.size(); ++i) {
            if (!(cuts[i] >= 0.0 && cuts[i] < 1.0)) fail(v, "'scan_cutoffs' entries must be in [0, 1)");
            if (i > 0 && !(cuts[i] < cuts[i - 1])) fail(v, "'scan_cutoffs' must be strictly decreasing");
        }
        c.tasks.scan_cutoffs = cuts;
    };
    tasks["scan_elements"] = [](RunConfig& c, const Value& v) {
        const int e = to_integer(v, "scan_elements");
        if (e < 2) fail(v, "'scan_elements' must be >= 2");
        c.tasks.scan_elements = e;
    };
    tasks["scan_grading"] = [](RunConfig& c, const Value& v) {
        const double q = to_number(v, "scan_grading");
        if (!(q > 0.0 && q <= 1.0)) fail(v, "'scan_grading' must be in (0, 1]");
        c.tasks.scan_grading = q;
    };
    tasks["workers"] = [](RunConfig& c, const Value& v) {
        const int w = to_integer(v, "workers");
        if (w < 1) fail(v, "'workers' must be >= 1");
        c.tasks.workers = w;
    };

    auto& output = s["output"];
    output["directory"] = [](RunConfig& c, const Value& v) { c.output.directory = v.text; };
    output["prefix"] = [](RunConfig& c, const Value& v) {
        if (v.text.empty() || v.text.find('/') != std::string::npos) {
            fail(v, "'prefix' must be a nonempty file name without '/'");
        }
        c.output.prefix = v.text;
    };
    output["svg"] = [](RunConfig& c, const Value& v) { c.output.svg = to_bool(v, "svg"); };
    return s;
}

} // namespace

RadialMesh MeshConfig::build(int dimension) const
{
    return RadialMesh::build(elements, grading, dimension, cutoff, quadrature_order);
}

RunConfig parse_run_config(std::string_view text)
{
    static const std::map<std::string, Section> sections = schema();
    RunConfig config;
    bool drift_coefficient_set = false;
    std::map<std::string, Value> seen; // "section.key" -> location
    const Section* current = nullptr;
    std::string current_name;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view raw = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        const std::size_t hash = raw.find_first_of("#;");
        if (hash != std::string_view::npos) raw = raw.substr(0, hash);
        std::size_t lead = 0;
        const std::string line = trim(raw, &lead);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError("unterminated section header", line_no, lead + 1);
            const std::string name = trim(std::string_view(line).substr(1, line.size() - 2));
            const auto it = sections.find(name);
            if (it == sections.end()) {
                throw ParseError("unknown section [" + name + "]", line_no, lead + 1);
            }
            current = &it->second;
            current_name = name;
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no, lead + 1);
        const std::string key = trim(std::string_view(line).substr(0, eq));
        if (key.empty()) throw ParseError("missing key before '='", line_no, lead + 1);
        if (!current) throw ParseError("key '" + key + "' outside any section", line_no, lead + 1);
        const auto handler = current->find(key);
        if (handler == current->end()) {
            throw ParseError("unknown key '" + key + "' in section [" + current_name + "]", line_no,
                             lead + 1);
        }
        std::size_t value_lead = 0;
        const std::string value_text = trim(std::string_view(line).substr(eq + 1), &value_lead);
        const Value value{value_text, line_no, lead + eq + 1 + value_lead + 1};
        const std::string full = current_name + "." + key;
        if (seen.count(full)) {
            throw ParseError("duplicate key '" + key + "' in section [" + current_name + "]", line_no,
                             lead + 1);
        }
        seen[full] = value;
        if (full == "coefficients.drift_coefficient") drift_coefficient_set = true;
        handler->second(config, value);
    }

    const auto where = [&](const std::string& full) {
        const auto it = seen.find(full);
        return it == seen.end() ? Value{"", 1, 1} : it->second;
    };
    if (!drift_coefficient_set) config.spec.drift = config.spec.hyp.drift;
    if (!(config.spec.hyp.beta >= config.spec.hyp.alpha)) {
        fail(where(seen.count("problem.beta") ? "problem.beta" : "problem.alpha"),
             "'beta' must satisfy beta >= alpha");
    }
    if (std::abs(config.spec.drift) > config.spec.hyp.drift * (1.0 + 1e-12)) {
        fail(where(drift_coefficient_set ? "coefficients.drift_coefficient" : "problem.drift"),
             "'drift_coefficient' must satisfy |d| <= drift (A)");
    }
    if (config.spec.h.kind == Nonlinearity::Kind::linear && config.spec.h.exponent != 1.0) {
        fail(where("coefficients.h_exponent"), "'h_exponent' must be 1 for linear h");
    }
    if (config.spec.h.kind == Nonlinearity::Kind::odd_power && config.spec.h.exponent == 1.0) {
        config.spec.h.kind = Nonlinearity::Kind::linear;
    }
    if (config.spec.zero_order && !config.spec.weight.is_zero() &&
        !(config.spec.weight.min_exponent() > -config.spec.hyp.dimension)) {
        fail(where("coefficients.weight"), "'weight' must be integrable: every exponent > -N");
    }
    try {
        config.spec.validate_on(config.mesh.build(config.spec.hyp.dimension));
    } catch (const DomainError& e) {
        fail(where("coefficients.diffusion"), e.what());
    }
    return config;
}

RunConfig load_run_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str());
}

} // namespace hardyrad
