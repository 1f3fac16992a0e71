#pragma once

#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

namespace seqexp {

// Twelve significant digits, the fixed numeric format of every CSV output.
std::string fmt12(double x);

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& cells);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
};

}  // namespace seqexp
