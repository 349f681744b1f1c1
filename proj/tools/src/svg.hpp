#pragma once

#include <string>

#include "loopy/experiments.hpp"
#include "loopy/geometry.hpp"

namespace loopy::io {

struct RenderStyle {
  double width = 600.0;
  double height = 600.0;
  std::string stroke = "#1f6fb2";
  std::string invalid_stroke = "#c0392b";
  std::string marker_fill = "#e67e22";
  double stroke_width = 2.0;
};

/// Closed polyline of the polygon; self-intersection points get markers and
/// an invalid shape switches stroke color. Output bytes are deterministic.
std::string render_shape(const PolygonGeometry& geometry, const RenderStyle& style = {});

/// Fig-2 style map: one rect per grid cell, red = 2-lobe fraction,
/// green = 3-lobe, blue = 4-plus; invalid trials darken toward black.
std::string render_sweep_map(const SweepResult& result, const std::string& axis1_name,
                             const std::string& axis2_name);

}  // namespace loopy::io
