#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rydgate::cli {

// %.12g for every floating value; no locale, no timestamps.
std::string format_number(double v);

using Cell = std::variant<double, long, std::string>;

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);
  void row(const std::vector<Cell>& cells);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::size_t columns_;
  std::ofstream out_;
};

}  // namespace rydgate::cli
