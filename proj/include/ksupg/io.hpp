#pragma once

/**
 * @file io.hpp
 * @brief CSV and legacy VTK writers. Every file is written to a temporary sibling and renamed
 * into place, so readers never observe a partial file.
 */

#include <filesystem>
#include <string>
#include <vector>

#include "ksupg/analysis.hpp"
#include "ksupg/field.hpp"
#include "ksupg/solver.hpp"

namespace ksupg {

/// Writes `content` atomically. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Shortest-round-trip-safe decimal text (17 significant digits).
std::string format_number(double value);

/// Euler 1D: x, rho, u, p, mach, e_internal. Euler 2D: x, y, rho, u, v, p, mach.
/// Scalar fields: x[, y], u.
std::string field_csv(const ConservedField& field);
void write_csv(const ConservedField& field, const std::filesystem::path& path);

/// iteration, residue (one row per step, iterations counted from 1).
std::string history_csv(const std::vector<StepReport>& history);
void write_csv(const std::vector<StepReport>& history, const std::filesystem::path& path);

/// dt, spectral_radius.
void write_csv(const StabilityReport& report, const std::filesystem::path& path);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Parses a numeric CSV with one header line. Throws ParseError with the line number.
CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::filesystem::path& path);

/// Legacy ASCII unstructured grid: quads as VTK cell type 9, triangles as 5. Point data holds
/// rho, p, mach and the velocity vector for Euler fields, u for scalar fields.
std::string field_vtk(const ConservedField& field);
void write_vtk(const ConservedField& field, const std::filesystem::path& path);

}  // namespace ksupg
