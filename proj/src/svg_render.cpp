#include "ipslab/svg_render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "ipslab/io_util.hpp"

namespace ipslab {

namespace {

constexpr int kCellPx = 48;
constexpr int kMarginPx = 40;

std::string rgb(double t) {
  // Linear white-to-blue ramp.
  t = std::clamp(t, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(255 + t * (31 - 255)));
  const int g = static_cast<int>(std::lround(255 + t * (78 - 255)));
  const int b = static_cast<int>(std::lround(255 + t * (150 - 255)));
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

void check_square(std::size_t cells, int H, const char* who) {
  if (H < 1 || cells != static_cast<std::size_t>(H) * static_cast<std::size_t>(H))
    throw std::invalid_argument(std::string(who) + ": values do not form an H x H grid");
}

std::string svg_open(int H, const std::string& title, const std::string& scale_note,
                     const std::string& stamp) {
  const int size = 2 * kMarginPx + H * kCellPx;
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<!-- " << scale_note
      << "; coordinate 0 increases rightward, coordinate 1 increases upward";
  if (!stamp.empty()) out << "; " << stamp;
  out << " -->\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\""
      << size << "\" viewBox=\"0 0 " << size << " " << size << "\">\n";
  out << "  <rect width=\"" << size << "\" height=\"" << size << "\" fill=\"white\"/>\n";
  out << "  <text x=\"" << kMarginPx << "\" y=\"" << kMarginPx - 14
      << "\" font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
  return out.str();
}

// Pixel origin of a cell: coordinate 0 rightward, coordinate 1 upward.
std::pair<double, double> cell_origin(int x0, int x1, int H) {
  const double px = kMarginPx + x0 * kCellPx;
  const double py = kMarginPx + (H - 1 - x1) * kCellPx;
  return {px, py};
}

}  // namespace

void write_heatmap_svg(const std::string& path, const Simplex& values, int H,
                       const std::string& title, const std::string& stamp) {
  check_square(values.size(), H, "write_heatmap_svg");
  const double vmax = *std::max_element(values.begin(), values.end());
  std::ostringstream out;
  out << svg_open(H, title,
                  "linear color scale: 0 -> #ffffff, " + format_double(vmax) +
                      " -> #1f4e96",
                  stamp);
  for (int x0 = 0; x0 < H; ++x0) {
    for (int x1 = 0; x1 < H; ++x1) {
      const double v = values[static_cast<std::size_t>(x0) * H + x1];
      const auto [px, py] = cell_origin(x0, x1, H);
      out << "  <rect x=\"" << px << "\" y=\"" << py << "\" width=\"" << kCellPx
          << "\" height=\"" << kCellPx << "\" fill=\"" << rgb(vmax > 0 ? v / vmax : 0.0)
          << "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
    }
  }
  out << "</svg>\n";
  write_text_file(path, out.str());
}

void write_quiver_svg(const std::string& path,
                      const std::vector<std::vector<double>>& field, int H,
                      const std::string& title, const std::string& stamp) {
  check_square(field.size(), H, "write_quiver_svg");
  double mmax = 0.0;
  for (const auto& v : field) {
    if (v.size() != 2)
      throw std::invalid_argument("write_quiver_svg: needs two components per cell");
    mmax = std::max(mmax, std::hypot(v[0], v[1]));
  }
  const double scale = mmax > 0 ? 0.45 * kCellPx / mmax : 0.0;

  std::ostringstream out;
  out << svg_open(H, title,
                  "arrow length scale: magnitude " + format_double(mmax) + " -> " +
                      format_double(0.45 * kCellPx) + " px, linear",
                  stamp);
  out << "  <defs><marker id=\"head\" viewBox=\"0 0 6 6\" refX=\"5\" refY=\"3\" "
         "markerWidth=\"5\" markerHeight=\"5\" orient=\"auto\">"
         "<path d=\"M0,0 L6,3 L0,6 z\" fill=\"#b02a2a\"/></marker></defs>\n";
  for (int x0 = 0; x0 < H; ++x0) {
    for (int x1 = 0; x1 < H; ++x1) {
      const auto& v = field[static_cast<std::size_t>(x0) * H + x1];
      const auto [px, py] = cell_origin(x0, x1, H);
      const double cx = px + kCellPx / 2.0;
      const double cy = py + kCellPx / 2.0;
      out << "  <circle cx=\"" << cx << "\" cy=\"" << cy
          << "\" r=\"1.5\" fill=\"#888888\"/>\n";
      const double mag = std::hypot(v[0], v[1]);
      if (mag * scale < 0.5) continue;
      const double ex = cx + v[0] * scale;
      const double ey = cy - v[1] * scale;
      out << "  <line x1=\"" << cx << "\" y1=\"" << cy << "\" x2=\"" << ex << "\" y2=\""
          << ey << "\" stroke=\"#b02a2a\" stroke-width=\"1.5\" marker-end=\"url(#head)\"/>\n";
    }
  }
  out << "</svg>\n";
  write_text_file(path, out.str());
}

}  // namespace ipslab
