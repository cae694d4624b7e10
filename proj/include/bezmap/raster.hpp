#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "bezmap/losses.hpp"
#include "bezmap/map_model.hpp"
#include "bezmap/polyline.hpp"

namespace bezmap {

inline constexpr int kRasterPointsPerInstance = 100;

namespace detail {

inline std::vector<Vec2> raster_points(const MapInstance& ins) {
  if (ins.is_bezier()) return restore_points(ins.bezier(), kRasterPointsPerInstance);
  const std::vector<Vec2>& pts = ins.polyline().points();
  return resample_arc_length(pts, 0, pts.size() - 1, kRasterPointsPerInstance);
}

}  // namespace detail

// Binary occupancy masks, one per taxonomy class. Every instance is sampled
// at 100 points, mapped to the nearest raster node, dilated by omega, and
// in-bounds nodes are set to 1. Fully out-of-range instances contribute
// nothing.
inline std::vector<RasterMask> rasterize(const VectorMap& map, const BevGridSpec& grid,
                                         const DilationSpec& omega) {
  validate_grid(grid);
  if (omega.width < 0) throw DomainError("rasterize: dilation width must be >= 0");
  const int h = grid.height();
  const int w = grid.width();
  std::vector<RasterMask> masks(map.taxonomy.size(), RasterMask(h, w, 0.0));
  for (const MapInstance& ins : map.instances) {
    RasterMask& mask = masks[static_cast<std::size_t>(ins.class_id)];
    for (const Vec2& p : detail::raster_points(ins)) {
      const PixelCoord px = grid.world_to_pixel(p);
      if (std::abs(px.row) > 1e9 || std::abs(px.col) > 1e9) continue;
      const long row = std::lround(px.row);
      const long col = std::lround(px.col);
      for (long dr = -omega.width; dr <= omega.width; ++dr) {
        for (long dc = -omega.width; dc <= omega.width; ++dc) {
          const long r = row + dr;
          const long c = col + dc;
          if (r < 0 || r >= h || c < 0 || c >= w) continue;
          mask.set(static_cast<int>(r), static_cast<int>(c), 1.0);
        }
      }
    }
  }
  return masks;
}

// Plain (ASCII) PGM with maxval 255 for bit-exact diffing.
inline std::string write_pgm(const RasterMask& mask) {
  std::string out = "P2\n";
  out += std::to_string(mask.width()) + " " + std::to_string(mask.height()) + "\n255\n";
  for (int r = 0; r < mask.height(); ++r) {
    for (int c = 0; c < mask.width(); ++c) {
      if (c > 0) out += ' ';
      out += std::to_string(static_cast<int>(std::lround(mask.at(r, c) * 255.0)));
    }
    out += '\n';
  }
  return out;
}

}  // namespace bezmap
