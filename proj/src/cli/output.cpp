#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "cuspke/cli.hpp"
#include "cuspke/errors.hpp"

namespace cuspke::cli {

namespace {

int precision() {
  static const int p = [] {
    const char* env = std::getenv("CUSPKE_PRECISION");
    if (!env) return 17;
    const int v = std::atoi(env);
    return (v >= 1 && v <= 17) ? v : 17;
  }();
  return p;
}

std::string quote(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char ch : cell) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", precision() - 1, v);
  return buf;
}

void CsvTable::add(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  add_cells(std::move(cells));
}

void CsvTable::add_cells(std::vector<std::string> cells) {
  if (cells.size() != header.size()) throw NumericalError("csv: row width does not match header");
  rows.push_back(std::move(cells));
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  auto line = [&](const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << quote(cells[i]);
    out << "\r\n";
  };
  line(table.header);
  for (const auto& r : table.rows) line(r);
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace cuspke::cli
