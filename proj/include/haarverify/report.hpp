#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace haarverify {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::string str() const;
};

void write_csv(const CsvTable& table, const std::filesystem::path& file);
void write_json(const nlohmann::json& j, const std::filesystem::path& file);

struct Series {
  std::string label;
  std::vector<double> x, y;
};

// Line plot with axes and tick labels. With log_y the y values must be positive.
std::string svg_plot(const std::vector<Series>& series, const std::string& title, const std::string& x_label,
                     const std::string& y_label, bool log_y = false);
void write_text(const std::string& text, const std::filesystem::path& file);

}  // namespace haarverify
