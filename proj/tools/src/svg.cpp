#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "csv.hpp"

namespace loopy::io {
namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::string render_shape(const PolygonGeometry& geometry, const RenderStyle& style) {
  double min_x = 0, max_x = 0, min_y = 0, max_y = 0;
  for (const Vec2& v : geometry.vertices) {
    min_x = std::min(min_x, v.x);
    max_x = std::max(max_x, v.x);
    min_y = std::min(min_y, v.y);
    max_y = std::max(max_y, v.y);
  }
  const double span = std::max({max_x - min_x, max_y - min_y, 1e-9});
  const double pad = 0.08 * span;
  const double scale = std::min(style.width, style.height) / (span + 2 * pad);
  auto px = [&](double x) { return (x - min_x + pad) * scale; };
  auto py = [&](double y) { return style.height - (y - min_y + pad) * scale; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << num(style.width) << "\" height=\"" << num(style.height) << "\">\n";
  svg << "<path d=\"";
  for (std::size_t i = 0; i < geometry.vertices.size(); ++i) {
    svg << (i == 0 ? 'M' : 'L') << num(px(geometry.vertices[i].x)) << ' '
        << num(py(geometry.vertices[i].y)) << ' ';
  }
  svg << "Z\" fill=\"none\" stroke=\""
      << (geometry.self_intersects ? style.invalid_stroke : style.stroke)
      << "\" stroke-width=\"" << num(style.stroke_width) << "\"/>\n";
  for (const Vec2& p : self_intersection_points(geometry)) {
    svg << "<circle cx=\"" << num(px(p.x)) << "\" cy=\"" << num(py(p.y))
        << "\" r=\"4\" fill=\"" << style.marker_fill << "\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string render_sweep_map(const SweepResult& result, const std::string& axis1_name,
                             const std::string& axis2_name) {
  std::set<double> a1, a2;
  for (const SweepCell& c : result.cells) {
    a1.insert(c.axis1_value);
    a2.insert(c.axis2_value);
  }
  const std::vector<double> v1(a1.begin(), a1.end());
  const std::vector<double> v2(a2.begin(), a2.end());
  const double cell = 40.0;
  const double margin = 60.0;
  const double width = margin + cell * static_cast<double>(v2.size()) + 10;
  const double height = margin + cell * static_cast<double>(v1.size()) + 10;

  auto index_of = [](const std::vector<double>& v, double x) {
    return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), x) - v.begin());
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << num(width) << "\" height=\"" << num(height) << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const SweepCell& c : result.cells) {
    const std::size_t i = index_of(v1, c.axis1_value);
    const std::size_t j = index_of(v2, c.axis2_value);
    // red/green/blue carry the 2/3/4+ lobe fractions; invalid trials
    // contribute to no channel, so fully invalid cells are black
    const int r = static_cast<int>(std::lround(255.0 * c.frac_2lobe));
    const int g = static_cast<int>(std::lround(255.0 * c.frac_3lobe));
    const int b = static_cast<int>(std::lround(255.0 * c.frac_4plus));
    const double x = margin + cell * static_cast<double>(j);
    // axis1 increases upward
    const double y = margin + cell * static_cast<double>(v1.size() - 1 - i) - margin + 10;
    svg << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(cell)
        << "\" height=\"" << num(cell) << "\" fill=\"rgb(" << r << ',' << g << ',' << b
        << ")\"/>\n";
  }
  for (std::size_t j = 0; j < v2.size(); ++j) {
    svg << "<text x=\"" << num(margin + cell * (static_cast<double>(j) + 0.5)) << "\" y=\""
        << num(height - 4) << "\" font-size=\"10\" text-anchor=\"middle\">"
        << format_double(v2[j]) << "</text>\n";
  }
  for (std::size_t i = 0; i < v1.size(); ++i) {
    svg << "<text x=\"4\" y=\""
        << num(10 + cell * (static_cast<double>(v1.size() - 1 - i) + 0.6))
        << "\" font-size=\"10\">" << format_double(v1[i]) << "</text>\n";
  }
  svg << "<text x=\"" << num(width / 2) << "\" y=\"" << num(height - 20)
      << "\" font-size=\"12\" text-anchor=\"middle\">" << axis2_name << "</text>\n";
  svg << "<text x=\"14\" y=\"" << num(10.0) << "\" font-size=\"12\">" << axis1_name
      << "</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace loopy::io
