#include "hardyrad/csv.hpp"

#include "hardyrad/errors.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace hardyrad {

namespace {

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

void strip_cr(std::string& line)
{
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

} // namespace

std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<double> CsvTable::column(const std::string& name) const
{
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j] != name) continue;
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& row : rows) out.push_back(row[j]);
        return out;
    }
    throw DomainError("no CSV column named '" + name + "'");
}

void write_csv(std::ostream& out, const CsvTable& table)
{
    for (std::size_t j = 0; j < table.header.size(); ++j) {
        out << (j ? "," : "") << table.header[j];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << format_double(row[j]);
        out << '\n';
    }
}

CsvTable read_csv(std::istream& in)
{
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty CSV input", 1, 1);
    strip_cr(line);
    table.header = split(line);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != table.header.size()) {
            throw ParseError("expected " + std::to_string(table.header.size()) + " cells, got " +
                                 std::to_string(cells.size()),
                             lineno, 1);
        }
        std::vector<double> row;
        std::size_t column = 1;
        for (const auto& cell : cells) {
            char* end = nullptr;
            errno = 0;
            const double v = std::strtod(cell.c_str(), &end);
            if (cell.empty() || end != cell.c_str() + cell.size()) {
                throw ParseError("not a number: '" + cell + "'", lineno, column);
            }
            row.push_back(v);
            column += cell.size() + 1;
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_field_csv(std::ostream& out, const DiscreteField& field)
{
    CsvTable t{{"r", "u"}, {}};
    const auto nodes = field.mesh().nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) t.rows.push_back({nodes[i], field[i]});
    write_csv(out, t);
}

DiscreteField read_field_csv(std::istream& in, int dimension, int quadrature_order)
{
    const CsvTable t = read_csv(in);
    RadialMesh mesh = RadialMesh::from_nodes(t.column("r"), dimension, quadrature_order);
    return DiscreteField(std::move(mesh), t.column("u"));
}

void write_mesh_csv(std::ostream& out, const RadialMesh& mesh)
{
    CsvTable t{{"r"}, {}};
    for (double r : mesh.nodes()) t.rows.push_back({r});
    write_csv(out, t);
}

RadialMesh read_mesh_csv(std::istream& in, int dimension, int quadrature_order)
{
    return RadialMesh::from_nodes(read_csv(in).column("r"), dimension, quadrature_order);
}

void write_file(const std::string& path, const std::string& contents)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << contents;
    if (!out) throw std::runtime_error("write to " + path + " failed");
}

} // namespace hardyrad
