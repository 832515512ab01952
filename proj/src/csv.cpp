#include "confmass/csv.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "confmass/error.hpp"

namespace confmass {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path) {
  if (!out_) fail(ErrorCode::IOError, "cannot open " + path + " for writing");
  row(header);
}

void CsvWriter::row(std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out_ << ',';
    out_ << format_number(v);
    first = false;
  }
  out_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
  if (!out_) fail(ErrorCode::IOError, "write failed");
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  fail(ErrorCode::IOError, "missing CSV column " + name);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IOError, "cannot open " + path);
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::IOError, path + " is empty");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) table.header.push_back(cell);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        fail(ErrorCode::IOError, "non-numeric CSV cell '" + cell + "' in " + path);
      }
    }
    if (row.size() != table.header.size()) fail(ErrorCode::IOError, "ragged CSV row in " + path);
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace confmass
