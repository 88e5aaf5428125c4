#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dpsqm/geometry.hpp"
#include "dpsqm/report.hpp"
#include "dpsqm/types.hpp"

namespace dpsqm {

enum class OutputFormat { csv, json };

// Round-trip-exact, locale-independent formatting (shortest form that parses
// back to the same bits); identical inputs produce byte-identical output.
std::string format_double(double v);

// A rectangular table of ready-formatted cells with named columns.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> cells);
};

// CSV with a header row.
void write_table_csv(const std::filesystem::path& path, const Table& table);
// JSON array of row objects keyed by column name (numeric strings are
// emitted as JSON numbers).
void write_table_json(const std::filesystem::path& path, const Table& table);
// Dispatches on format and appends the matching extension to `stem`.
std::filesystem::path write_table(const std::filesystem::path& directory,
                                  const std::string& stem, const Table& table,
                                  OutputFormat format);

// JSON array of check objects with fields
// {test, norm_interior, norm_full, tolerance, pass}.
void write_reports_json(const std::filesystem::path& path,
                        const std::vector<CheckReport>& reports);
// The same checks as blocks of key = value lines.
void write_reports_text(const std::filesystem::path& path,
                        const std::vector<CheckReport>& reports,
                        const std::map<std::string, std::string>& context);

// Sparse matrix dump, one "row, col, real, imag" line per stored entry in
// row-major order.
void write_matrix_text(std::ostream& os, const SparseReal& m);
void write_matrix_text(std::ostream& os, const SparseComplex& m);
std::string matrix_to_text(const SparseReal& m);
void write_matrix_text_file(const std::filesystem::path& path,
                            const SparseReal& m);

// Flat "key = value" file with '#' comments and blank lines allowed.
// Returns pairs in file order; later duplicates override earlier ones on
// lookup.
std::vector<std::pair<std::string, std::string>> read_key_value_file(
    const std::filesystem::path& path);
void write_key_value_file(
    const std::filesystem::path& path,
    const std::vector<std::pair<std::string, std::string>>& entries);

// Orbit point sets as (kind, N, q, p[, t]) rows; the time column is present
// only when some record carries one.
Table orbit_table(const std::vector<OrbitGeometry>& orbits);

}  // namespace dpsqm
