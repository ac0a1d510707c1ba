// csv.hpp — Columnar CSV in a fixed decimal format (17 significant digits, LF)

#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace tclprep::csvio {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};

std::string format_value(double v);

void write_csv(const std::filesystem::path& path, const Table& table);
Table read_csv(const std::filesystem::path& path);

}  // namespace tclprep::csvio
