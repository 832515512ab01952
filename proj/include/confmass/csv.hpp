#pragma once

#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

namespace confmass {

/// Shortest round-trippable text for a double ("nan" for NaN).
std::string format_number(double value);

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);

  void row(std::initializer_list<double> values);
  void row(const std::vector<std::string>& cells);

 private:
  std::ofstream out_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

}  // namespace confmass
