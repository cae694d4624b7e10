#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bezmap/bezier.hpp"
#include "bezmap/errors.hpp"
#include "bezmap/gengt.hpp"
#include "bezmap/polyline.hpp"
#include "bezmap/vec2.hpp"

namespace bezmap {

struct MapClass {
  int id{0};
  std::string name;
  GenGtConfig bezier_config;

  friend bool operator==(const MapClass&, const MapClass&) = default;
};

// Three static map categories with their piecewise Bezier deployments
// <k,n>: lane-divider <3,2>, ped-crossing <1,1>, road-boundary <7,3>.
// The maximum piece count equals the deployed k.
inline std::vector<MapClass> default_taxonomy() {
  return {
      {0, "lane-divider", GenGtConfig{2, 100, 0.1, 3}},
      {1, "ped-crossing", GenGtConfig{1, 100, 0.1, 1}},
      {2, "road-boundary", GenGtConfig{3, 100, 0.1, 7}},
  };
}

inline void validate_taxonomy(const std::vector<MapClass>& taxonomy) {
  if (taxonomy.empty()) throw ConfigError("taxonomy: empty");
  for (std::size_t i = 0; i < taxonomy.size(); ++i) {
    if (taxonomy[i].id != static_cast<int>(i)) {
      throw ConfigError("taxonomy: ids must be dense 0..U-1, got id " +
                        std::to_string(taxonomy[i].id) + " at position " + std::to_string(i));
    }
    validate(taxonomy[i].bezier_config);
  }
}

// Perception range and raster resolution. Extents are meters from the ego
// origin: front/rear along +x/-x, left/right along +y/-y. Pixel rows grow
// rightward (toward -y), columns grow forward (toward +x), so the ego
// origin sits at the center of the raster.
struct BevGridSpec {
  double front{30.0};
  double rear{30.0};
  double left{15.0};
  double right{15.0};
  double resolution{0.15};

  int height() const { return static_cast<int>(std::llround((left + right) / resolution)); }
  int width() const { return static_cast<int>(std::llround((front + rear) / resolution)); }

  PixelCoord world_to_pixel(Vec2 w) const {
    return {(left - w.y) / resolution, (w.x + rear) / resolution};
  }
  Vec2 pixel_to_world(PixelCoord p) const {
    return {p.col * resolution - rear, left - p.row * resolution};
  }

  bool contains(Vec2 w) const {
    return w.x >= -rear && w.x <= front && w.y >= -right && w.y <= left;
  }

  // Nearest raster lattice node; may fall outside [0,H)x[0,W).
  std::pair<long, long> world_to_cell(Vec2 w) const {
    const PixelCoord p = world_to_pixel(w);
    return {std::lround(p.row), std::lround(p.col)};
  }
  Vec2 cell_to_world(long row, long col) const {
    return pixel_to_world({static_cast<double>(row), static_cast<double>(col)});
  }

  friend bool operator==(const BevGridSpec&, const BevGridSpec&) = default;
};

inline void validate_grid(const BevGridSpec& g) {
  if (!(g.front > 0 && g.rear > 0 && g.left > 0 && g.right > 0)) {
    throw ConfigError("grid: extents must be positive");
  }
  if (!(g.resolution > 0)) throw ConfigError("grid: resolution must be positive");
  const double h = (g.left + g.right) / g.resolution;
  const double w = (g.front + g.rear) / g.resolution;
  if (std::abs(h - std::llround(h)) > 1e-9 || std::abs(w - std::llround(w)) > 1e-9) {
    throw ConfigError("grid: extents must be integer multiples of the resolution");
  }
}

// [30, 30, 15, 15] m at 0.15 m/pixel: a 400 x 200 raster.
inline BevGridSpec default_grid() { return BevGridSpec{}; }

// One map element, either in annotation form (polyline) or ground-truth
// form (piecewise Bezier). Predictions may carry a confidence score;
// ground-truth-derived instances default to 1.0 at evaluation time.
struct MapInstance {
  int class_id{0};
  std::variant<Polyline, PiecewiseBezier> shape;
  std::optional<double> score;

  bool is_bezier() const { return std::holds_alternative<PiecewiseBezier>(shape); }
  const Polyline& polyline() const { return std::get<Polyline>(shape); }
  const PiecewiseBezier& bezier() const { return std::get<PiecewiseBezier>(shape); }

  friend bool operator==(const MapInstance&, const MapInstance&) = default;
};

struct VectorMap {
  std::vector<MapClass> taxonomy = default_taxonomy();
  BevGridSpec grid = default_grid();
  std::vector<MapInstance> instances;

  friend bool operator==(const VectorMap&, const VectorMap&) = default;
};

inline void validate_map(const VectorMap& map) {
  validate_taxonomy(map.taxonomy);
  validate_grid(map.grid);
  for (std::size_t i = 0; i < map.instances.size(); ++i) {
    const MapInstance& ins = map.instances[i];
    if (ins.class_id < 0 || ins.class_id >= static_cast<int>(map.taxonomy.size())) {
      throw ConfigError("instance " + std::to_string(i) + ": unknown class id " +
                        std::to_string(ins.class_id));
    }
    if (ins.is_bezier()) {
      const MapClass& cls = map.taxonomy[static_cast<std::size_t>(ins.class_id)];
      const PiecewiseBezier& pb = ins.bezier();
      if (pb.degree() != cls.bezier_config.degree) {
        throw ConfigError("instance " + std::to_string(i) + ": degree " +
                          std::to_string(pb.degree()) + " does not match class '" + cls.name +
                          "' degree " + std::to_string(cls.bezier_config.degree));
      }
      if (pb.piece_count() > cls.bezier_config.max_pieces) {
        throw ConfigError("instance " + std::to_string(i) + ": " +
                          std::to_string(pb.piece_count()) + " pieces exceed class '" + cls.name +
                          "' maximum " + std::to_string(cls.bezier_config.max_pieces));
      }
    }
  }
}

}  // namespace bezmap
