#include "dpsqm/io.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>

#include <json.hpp>

#include "dpsqm/errors.hpp"

namespace dpsqm {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  return os;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

bool parse_integer(const std::string& cell, long long& value) {
  const char* first = cell.data();
  const char* last = first + cell.size();
  const auto result = std::from_chars(first, last, value);
  return result.ec == std::errc() && result.ptr == last;
}

bool parse_real(const std::string& cell, double& value) {
  if (cell.empty()) return false;
  char* end = nullptr;
  value = std::strtod(cell.c_str(), &end);
  return end == cell.c_str() + cell.size();
}

nlohmann::ordered_json cell_to_json(const std::string& cell) {
  long long integral = 0;
  if (parse_integer(cell, integral)) return integral;
  double real = 0.0;
  if (parse_real(cell, real)) return real;
  return cell;
}

template <typename Matrix>
void write_matrix_entries(std::ostream& os, const Matrix& m) {
  Eigen::SparseMatrix<typename Matrix::Scalar, Eigen::RowMajor> by_rows(m);
  by_rows.makeCompressed();
  for (Eigen::Index row = 0; row < by_rows.outerSize(); ++row) {
    for (typename decltype(by_rows)::InnerIterator it(by_rows, row); it;
         ++it) {
      double re;
      double im;
      if constexpr (std::is_same_v<typename Matrix::Scalar, double>) {
        re = it.value();
        im = 0.0;
      } else {
        re = it.value().real();
        im = it.value().imag();
      }
      os << it.row() << ", " << it.col() << ", " << format_double(re) << ", "
         << format_double(im) << '\n';
    }
  }
}

}  // namespace

std::string format_double(double v) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), v);
  return std::string(buffer, result.ptr);
}

void Table::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns.size()) {
    throw std::invalid_argument("table row width does not match its columns");
  }
  rows.push_back(std::move(cells));
}

void write_table_csv(const std::filesystem::path& path, const Table& table) {
  auto os = open_for_write(path);
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i != 0) os << ',';
    os << table.columns[i];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i != 0) os << ',';
      os << row[i];
    }
    os << '\n';
  }
}

void write_table_json(const std::filesystem::path& path, const Table& table) {
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json record;
    for (std::size_t i = 0; i < row.size(); ++i) {
      record[table.columns[i]] = cell_to_json(row[i]);
    }
    records.push_back(std::move(record));
  }
  auto os = open_for_write(path);
  os << records.dump(2) << '\n';
}

std::filesystem::path write_table(const std::filesystem::path& directory,
                                  const std::string& stem, const Table& table,
                                  OutputFormat format) {
  const std::filesystem::path path =
      directory / (stem + (format == OutputFormat::csv ? ".csv" : ".json"));
  if (format == OutputFormat::csv) {
    write_table_csv(path, table);
  } else {
    write_table_json(path, table);
  }
  return path;
}

void write_reports_json(const std::filesystem::path& path,
                        const std::vector<CheckReport>& reports) {
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const auto& report : reports) {
    nlohmann::ordered_json record;
    record["test"] = report.test;
    record["norm_interior"] = report.norm_interior;
    record["norm_full"] = report.norm_full;
    record["tolerance"] = report.tolerance;
    record["pass"] = report.pass;
    records.push_back(std::move(record));
  }
  auto os = open_for_write(path);
  os << records.dump(2) << '\n';
}

void write_reports_text(const std::filesystem::path& path,
                        const std::vector<CheckReport>& reports,
                        const std::map<std::string, std::string>& context) {
  auto os = open_for_write(path);
  bool first = true;
  for (const auto& report : reports) {
    if (!first) os << '\n';
    first = false;
    os << "test = " << report.test << '\n';
    for (const auto& [key, value] : context) {
      os << key << " = " << value << '\n';
    }
    os << "norm_interior = " << format_double(report.norm_interior) << '\n';
    os << "norm_full = " << format_double(report.norm_full) << '\n';
    os << "tolerance = " << format_double(report.tolerance) << '\n';
    os << "pass = " << (report.pass ? "true" : "false") << '\n';
  }
}

void write_matrix_text(std::ostream& os, const SparseReal& m) {
  write_matrix_entries(os, m);
}

void write_matrix_text(std::ostream& os, const SparseComplex& m) {
  write_matrix_entries(os, m);
}

std::string matrix_to_text(const SparseReal& m) {
  std::ostringstream os;
  write_matrix_text(os, m);
  return os.str();
}

void write_matrix_text_file(const std::filesystem::path& path,
                            const SparseReal& m) {
  auto os = open_for_write(path);
  write_matrix_text(os, m);
}

std::vector<std::pair<std::string, std::string>> read_key_value_file(
    const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) {
    throw UsageError("cannot open configuration file " + path.string());
  }
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int line_number = 0;
  while (std::getline(is, line)) {
    ++line_number;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const auto split = stripped.find('=');
    if (split == std::string::npos) {
      throw UsageError("malformed line " + std::to_string(line_number) +
                       " in " + path.string() + ": expected key = value");
    }
    std::string key = trim(stripped.substr(0, split));
    std::string value = trim(stripped.substr(split + 1));
    if (key.empty()) {
      throw UsageError("missing key on line " + std::to_string(line_number) +
                       " in " + path.string());
    }
    entries.emplace_back(std::move(key), std::move(value));
  }
  return entries;
}

void write_key_value_file(
    const std::filesystem::path& path,
    const std::vector<std::pair<std::string, std::string>>& entries) {
  auto os = open_for_write(path);
  for (const auto& [key, value] : entries) {
    os << key << " = " << value << '\n';
  }
}

Table orbit_table(const std::vector<OrbitGeometry>& orbits) {
  bool with_time = false;
  for (const auto& orbit : orbits) {
    if (orbit.has_time) with_time = true;
  }
  Table table;
  table.columns = {"kind", "N", "q", "p"};
  if (with_time) table.columns.push_back("t");
  for (const auto& orbit : orbits) {
    for (const auto& point : orbit.points) {
      std::vector<std::string> row = {orbit_kind_name(orbit.kind),
                                      std::to_string(orbit.N),
                                      format_double(point.q),
                                      format_double(point.p)};
      if (with_time) {
        row.push_back(orbit.has_time ? format_double(point.t)
                                     : format_double(0.0));
      }
      table.add_row(std::move(row));
    }
  }
  return table;
}

}  // namespace dpsqm
