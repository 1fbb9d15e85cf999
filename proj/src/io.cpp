#include "ksupg/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ksupg/error.hpp"

namespace ksupg {

namespace {

std::string join(std::initializer_list<double> values) {
    std::string line;
    for (double v : values) {
        if (!line.empty()) line += ',';
        line += format_number(v);
    }
    return line + '\n';
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string token;
    std::istringstream in(line);
    while (std::getline(in, token, ',')) out.push_back(token);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        require(static_cast<bool>(out), ErrorCode::IoError, "cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        require(static_cast<bool>(out), ErrorCode::IoError, "write to " + tmp.string() + " failed");
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        fail(ErrorCode::IoError, "cannot move file into place at " + path.string());
    }
}

std::string format_number(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string field_csv(const ConservedField& field) {
    const Mesh& mesh = field.mesh();
    std::string out;
    switch (field.equation()) {
        case Equation::Euler1D: {
            out = "x,rho,u,p,mach,e_internal\n";
            for (Index i = 0; i < mesh.node_count(); ++i) {
                const double rho = field.density(i), p = field.pressure(i);
                out += join({mesh.node(i).x, rho, field.velocity(i)[0], p, field.mach(i),
                             p / (rho * (field.gas().gamma - 1.0))});
            }
            break;
        }
        case Equation::Euler2D: {
            out = "x,y,rho,u,v,p,mach\n";
            for (Index i = 0; i < mesh.node_count(); ++i) {
                const Vec2 v = field.velocity(i);
                out += join({mesh.node(i).x, mesh.node(i).y, field.density(i), v[0], v[1], field.pressure(i),
                             field.mach(i)});
            }
            break;
        }
        case Equation::Burgers1D:
            out = "x,u\n";
            for (Index i = 0; i < mesh.node_count(); ++i) out += join({mesh.node(i).x, field.component(i, 0)});
            break;
        case Equation::Burgers2D:
            out = "x,y,u\n";
            for (Index i = 0; i < mesh.node_count(); ++i)
                out += join({mesh.node(i).x, mesh.node(i).y, field.component(i, 0)});
            break;
    }
    return out;
}

void write_csv(const ConservedField& field, const std::filesystem::path& path) {
    write_file_atomic(path, field_csv(field));
}

std::string history_csv(const std::vector<StepReport>& history) {
    std::string out = "iteration,residue\n";
    for (std::size_t k = 0; k < history.size(); ++k)
        out += std::to_string(k + 1) + ',' + format_number(history[k].residue) + '\n';
    return out;
}

void write_csv(const std::vector<StepReport>& history, const std::filesystem::path& path) {
    write_file_atomic(path, history_csv(history));
}

void write_csv(const StabilityReport& report, const std::filesystem::path& path) {
    std::string out = "dt,spectral_radius\n";
    for (std::size_t k = 0; k < report.dt_values.size(); ++k)
        out += join({report.dt_values[k], report.spectral_radii[k]});
    write_file_atomic(path, out);
}

CsvTable parse_csv(const std::string& text) {
    CsvTable table;
    std::istringstream in(text);
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> cells = split(line);
        if (table.header.empty()) {
            table.header = cells;
            continue;
        }
        require(cells.size() == table.header.size(), ErrorCode::ParseError,
                "line " + std::to_string(number) + ": expected " + std::to_string(table.header.size()) + " fields");
        std::vector<double> row;
        for (const auto& cell : cells) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(cell, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            require(used == cell.size() && used > 0, ErrorCode::ParseError,
                    "line " + std::to_string(number) + ": '" + cell + "' is not a number");
            row.push_back(v);
        }
        table.rows.push_back(std::move(row));
    }
    require(!table.header.empty(), ErrorCode::ParseError, "line 1: missing header");
    return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorCode::IoError, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str());
}

std::string field_vtk(const ConservedField& field) {
    const Mesh& mesh = field.mesh();
    require(mesh.dim() == 2, ErrorCode::InvalidArgument, "VTK output needs a 2D field");
    std::ostringstream out;
    out << "# vtk DataFile Version 3.0\nksupg " << to_string(field.equation()) << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << mesh.node_count() << " double\n";
    for (const Node& n : mesh.nodes()) out << format_number(n.x) << ' ' << format_number(n.y) << " 0\n";
    std::size_t size = 0;
    for (const Element& el : mesh.elements()) size += 1 + el.vertices().size();
    out << "CELLS " << mesh.element_count() << ' ' << size << '\n';
    for (const Element& el : mesh.elements()) {
        out << el.vertices().size();
        for (Index v : el.vertices()) out << ' ' << v;
        out << '\n';
    }
    out << "CELL_TYPES " << mesh.element_count() << '\n';
    for (const Element& el : mesh.elements()) out << (el.kind == ElementKind::Q4 ? 9 : 5) << '\n';
    out << "POINT_DATA " << mesh.node_count() << '\n';
    auto scalars = [&](const char* name, auto&& value) {
        out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
        for (Index i = 0; i < mesh.node_count(); ++i) out << format_number(value(i)) << '\n';
    };
    if (is_euler(field.equation())) {
        scalars("rho", [&](Index i) { return field.density(i); });
        scalars("p", [&](Index i) { return field.pressure(i); });
        scalars("mach", [&](Index i) { return field.mach(i); });
        out << "VECTORS velocity double\n";
        for (Index i = 0; i < mesh.node_count(); ++i) {
            const Vec2 v = field.velocity(i);
            out << format_number(v[0]) << ' ' << format_number(v[1]) << " 0\n";
        }
    } else {
        scalars("u", [&](Index i) { return field.component(i, 0); });
    }
    return out.str();
}

void write_vtk(const ConservedField& field, const std::filesystem::path& path) {
    write_file_atomic(path, field_vtk(field));
}

}  // namespace ksupg
