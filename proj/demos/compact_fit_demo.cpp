// Fits a wiggly road boundary with a minimal-piece cubic chain and prints
// how compact the parametric form is compared with the raw annotation.

#include <cmath>
#include <fstream>
#include <iostream>
#include <vector>

#include "bezmap/bezmap.hpp"

int main() {
  using namespace bezmap;

  std::vector<Vec2> annotation;
  for (int i = 0; i < 180; ++i) {
    const double x = -22.0 + 44.0 * i / 179.0;
    annotation.push_back({x, -8.0 + 1.8 * std::sin(0.18 * x) + 0.5 * std::sin(0.55 * x + 1.0)});
  }
  const Polyline polyline(annotation);

  const GenGtConfig cfg{3, 100, 0.1, 7};
  const PiecewiseBezier curve = gen_gt(polyline, cfg, 2);

  const auto restored = restore_points(curve, 100);
  const auto resampled = resample_arc_length(annotation, 0, annotation.size() - 1, 100);
  std::cout << "annotation points : " << annotation.size() << "\n"
            << "pieces            : " << curve.piece_count() << "\n"
            << "control points    : " << curve.controls().size() << "\n"
            << "reduction         : "
            << 100.0 * (1.0 - static_cast<double>(curve.controls().size()) / annotation.size())
            << " %\n"
            << "chamfer to source : " << chamfer_distance(restored, resampled) << " m\n";

  VectorMap map;
  map.instances.push_back(MapInstance{2, curve, std::nullopt});
  VectorMap overlay;
  overlay.instances.push_back(MapInstance{2, polyline, std::nullopt});
  SvgOptions opt;
  opt.control_points = true;
  std::ofstream("compact_fit_demo.svg") << render_svg(map, map.grid, opt, &overlay);
  std::cout << "wrote compact_fit_demo.svg\n";
  return 0;
}
