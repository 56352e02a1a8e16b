#pragma once

#include "hardyrad/radial_mesh.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace hardyrad {

/// %.17g: enough digits that strtod reproduces the double bit-exactly.
std::string format_double(double x);

/// Column-oriented numeric table with a header row.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::vector<double> column(const std::string& name) const;
};

void write_csv(std::ostream& out, const CsvTable& table);
/// Throws ParseError on ragged rows or non-numeric cells.
CsvTable read_csv(std::istream& in);

/// Solution schema (r, u).
void write_field_csv(std::ostream& out, const DiscreteField& field);
DiscreteField read_field_csv(std::istream& in, int dimension, int quadrature_order = 4);

/// Node list schema (r).
void write_mesh_csv(std::ostream& out, const RadialMesh& mesh);
RadialMesh read_mesh_csv(std::istream& in, int dimension, int quadrature_order = 4);

void write_file(const std::string& path, const std::string& contents);

} // namespace hardyrad
