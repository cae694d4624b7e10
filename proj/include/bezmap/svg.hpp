#pragma once

#include <array>
#include <cstdio>
#include <string>
#include <vector>

#include "bezmap/map_model.hpp"
#include "bezmap/polyline.hpp"

namespace bezmap {

struct SvgOptions {
  bool control_points{false};  // draw one circle per control point
  double stroke_width{1.5};
};

namespace detail {

inline const std::array<const char*, 6> kClassColors = {
    "#e4572e", "#17bebb", "#76b041", "#9b5de5", "#f4a259", "#3a86ff"};

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

inline std::string pixel_pair(const BevGridSpec& grid, Vec2 world) {
  const PixelCoord p = grid.world_to_pixel(world);
  return fmt(p.col) + " " + fmt(p.row);
}

// Degrees 1-3 map onto native SVG path commands; higher degrees fall back
// to a sampled polyline.
inline std::string instance_path_data(const MapInstance& ins, const BevGridSpec& grid) {
  std::string d;
  if (ins.is_bezier() && ins.bezier().degree() <= 3) {
    const PiecewiseBezier& pb = ins.bezier();
    const int n = pb.degree();
    const std::vector<Vec2>& flat = pb.controls();
    d = "M " + pixel_pair(grid, flat.front());
    for (int j = 0; j < pb.piece_count(); ++j) {
      const std::size_t base = static_cast<std::size_t>(j) * static_cast<std::size_t>(n);
      if (n == 1) {
        d += " L " + pixel_pair(grid, flat[base + 1]);
      } else if (n == 2) {
        d += " Q " + pixel_pair(grid, flat[base + 1]) + ", " + pixel_pair(grid, flat[base + 2]);
      } else {
        d += " C " + pixel_pair(grid, flat[base + 1]) + ", " + pixel_pair(grid, flat[base + 2]) +
             ", " + pixel_pair(grid, flat[base + 3]);
      }
    }
    return d;
  }
  std::vector<Vec2> pts;
  if (ins.is_bezier()) {
    pts = restore_points(ins.bezier(), 100);
  } else {
    pts = ins.polyline().points();
  }
  d = "M " + pixel_pair(grid, pts.front());
  for (std::size_t i = 1; i < pts.size(); ++i) d += " L " + pixel_pair(grid, pts[i]);
  return d;
}

inline void append_instances(std::string& svg, const VectorMap& map, const BevGridSpec& grid,
                             const SvgOptions& opt, bool overlay_style) {
  for (const MapInstance& ins : map.instances) {
    const char* color =
        kClassColors[static_cast<std::size_t>(ins.class_id) % kClassColors.size()];
    svg += "  <path d=\"" + instance_path_data(ins, grid) + "\" fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"" + fmt(opt.stroke_width) + "\"";
    if (overlay_style) svg += " stroke-dasharray=\"4 3\" opacity=\"0.55\"";
    svg += "/>\n";
  }
  if (!opt.control_points) return;
  for (const MapInstance& ins : map.instances) {
    if (!ins.is_bezier()) continue;
    const char* color =
        kClassColors[static_cast<std::size_t>(ins.class_id) % kClassColors.size()];
    for (const Vec2& c : ins.bezier().controls()) {
      const PixelCoord p = grid.world_to_pixel(c);
      svg += "  <circle cx=\"" + fmt(p.col) + "\" cy=\"" + fmt(p.row) +
             "\" r=\"2\" fill=\"" + color + "\"/>\n";
    }
  }
}

}  // namespace detail

// SVG 1.1 drawing in raster pixel coordinates: one path element per
// instance, class-colored, with an optional dashed overlay map (typically
// the ground truth) and optional control-point circles.
inline std::string render_svg(const VectorMap& map, const BevGridSpec& grid,
                              const SvgOptions& opt = {}, const VectorMap* overlay = nullptr) {
  validate_grid(grid);
  const int h = grid.height();
  const int w = grid.width();
  std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(w) + "\" height=\"" + std::to_string(h) + "\" viewBox=\"0 0 " +
         std::to_string(w) + " " + std::to_string(h) + "\">\n";
  svg += "  <rect width=\"" + std::to_string(w) + "\" height=\"" + std::to_string(h) +
         "\" fill=\"#fafafa\"/>\n";
  if (overlay != nullptr) detail::append_instances(svg, *overlay, grid, opt, true);
  detail::append_instances(svg, map, grid, opt, false);
  svg += "</svg>\n";
  return svg;
}

}  // namespace bezmap
