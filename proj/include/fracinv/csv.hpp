#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "fracinv/types.hpp"

namespace fracinv {

/// 17 significant digits with a '.' separator, independent of the global locale.
std::string format_double(double value);

/// Writes a CSV file row by row: header first, '\n' line endings. Fields
/// containing ',', '"' or a newline are quoted.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  void row(const std::vector<std::string>& fields);
  void row(const ConstVectorRef& values);

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

/// Two numeric columns, e.g. `t,g`.
void write_columns(const std::filesystem::path& path, const std::string& first, const ConstVectorRef& a,
                   const std::string& second, const ConstVectorRef& b);

}  // namespace fracinv
