#pragma once

#include <string>
#include <vector>

#include "ipslab/simplex.hpp"

namespace ipslab {

// Square heatmap of a per-cell scalar on an H x H grid laid out row-major
// with coordinate 0 drawn rightward and coordinate 1 upward. The color
// scale is linear and stated in the emitted file's header comment, along
// with the caller's stamp.
void write_heatmap_svg(const std::string& path, const Simplex& values, int H,
                       const std::string& title, const std::string& stamp = "");

// Quiver plot over an H x H grid: one arrow per cell, pointing along the
// cell's vector with length proportional to its magnitude.
void write_quiver_svg(const std::string& path,
                      const std::vector<std::vector<double>>& field, int H,
                      const std::string& title, const std::string& stamp = "");

}  // namespace ipslab
