#pragma once

#include <string>
#include <vector>

#include "nlslab/io.hpp"

namespace nlslab {

struct PlotSpec {
  std::string x;
  std::vector<std::string> y;
  bool log_x = false;
  bool log_y = false;
  std::string title;
  int width = 640;
  int height = 420;
};

// Line plot as a standalone SVG document. Throws missing-column when a
// requested column is absent or the table is empty.
std::string plot_svg(const CsvTable& table, const PlotSpec& spec);

}  // namespace nlslab
