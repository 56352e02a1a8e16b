#pragma once

#include "hardyrad/fem.hpp"
#include "hardyrad/radial_mesh.hpp"
#include "hardyrad/solver.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace hardyrad {

struct MeshConfig {
    int elements = 2000;
    double grading = 1.0;
    double cutoff = 0.0;
    int quadrature_order = 4;

    RadialMesh build(int dimension) const;
};

struct TaskConfig {
    bool maxprin = false;
    double inner_radius = 0.9;
    bool scan = false;
    std::vector<double> m_grid;
    std::vector<double> scan_cutoffs{1e-4, 1e-8, 1e-16};
    int scan_elements = 2000;
    double scan_grading = 0.5;
    int workers = 1;
};

struct OutputConfig {
    std::string directory;
    std::string prefix = "run";
    bool svg = false;
};

/// Sections and keys:
///   [problem]      dimension alpha beta drift lambda q zero_order
///   [coefficients] diffusion weight source drift_coefficient h h_exponent h_coefficient
///   [mesh]         elements grading cutoff quadrature_order
///   [solver]       theta tolerance max_iterations schedule truncation sobolev
///   [tasks]        maxprin inner_radius scan m_grid scan_cutoffs scan_elements scan_grading workers
///   [output]       directory prefix svg
/// Radial functions use the power-sum grammar, lists are comma separated,
/// `#` and `;` start comments.
struct RunConfig {
    ProblemSpec spec;
    MeshConfig mesh;
    SolveOptions solver;
    double sobolev = 1.0;
    TaskConfig tasks;
    OutputConfig output;
};

/// Throws ParseError (line, column) for syntax errors, unknown sections or
/// keys, duplicates, bad values and violated ranges.
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::string& path);

} // namespace hardyrad
