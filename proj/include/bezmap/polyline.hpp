#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "bezmap/bezier.hpp"
#include "bezmap/errors.hpp"
#include "bezmap/vec2.hpp"

namespace bezmap {

// Ordered annotation points in ego-frame meters. Map curves are open;
// `closed` is kept for schema completeness and stays false. Exact
// consecutive duplicates are dropped on construction.
class Polyline {
 public:
  explicit Polyline(std::vector<Vec2> points, bool closed = false) : closed_(closed) {
    points_.reserve(points.size());
    for (const Vec2& p : points) {
      if (!is_finite(p)) throw DomainError("Polyline: non-finite point");
      if (points_.empty() || !(points_.back() == p)) points_.push_back(p);
    }
    if (points_.size() < 2) {
      throw DomainError("Polyline: fewer than 2 distinct points");
    }
  }

  const std::vector<Vec2>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool closed() const { return closed_; }

  friend bool operator==(const Polyline& a, const Polyline& b) {
    return a.closed_ == b.closed_ && a.points_ == b.points_;
  }

 private:
  std::vector<Vec2> points_;
  bool closed_{false};
};

inline double arc_length(const std::vector<Vec2>& pts) {
  double total = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) total += distance(pts[i - 1], pts[i]);
  return total;
}

// Resamples the chain pts[s..e] to m points equally spaced in arc length.
// The first/last outputs equal pts[s] and pts[e] bitwise.
inline std::vector<Vec2> resample_arc_length(const std::vector<Vec2>& pts, std::size_t s,
                                             std::size_t e, int m) {
  if (s >= e || e >= pts.size()) {
    throw DomainError("resample_arc_length: invalid span [" + std::to_string(s) + ", " +
                      std::to_string(e) + "] in chain of " + std::to_string(pts.size()));
  }
  if (m < 2) throw DomainError("resample_arc_length: m must be >= 2");

  std::vector<double> cum(e - s + 1, 0.0);
  for (std::size_t i = s + 1; i <= e; ++i) {
    cum[i - s] = cum[i - s - 1] + distance(pts[i - 1], pts[i]);
  }
  const double total = cum.back();
  if (total <= 0.0) throw DomainError("resample_arc_length: degenerate zero-length sub-curve");

  std::vector<Vec2> out(static_cast<std::size_t>(m));
  out.front() = pts[s];
  out.back() = pts[e];
  std::size_t seg = 0;
  for (int r = 1; r + 1 < m; ++r) {
    const double a = total * static_cast<double>(r) / static_cast<double>(m - 1);
    while (seg + 1 < cum.size() - 1 && cum[seg + 1] < a) ++seg;
    const double len = cum[seg + 1] - cum[seg];
    const double t = len > 0.0 ? (a - cum[seg]) / len : 0.0;
    out[static_cast<std::size_t>(r)] = lerp(pts[s + seg], pts[s + seg + 1], t);
  }
  return out;
}

// Arc-length interpolation of the (s, e) sub-curve to exactly m points.
inline Polyline curve_interpolate(const Polyline& p, std::size_t s, std::size_t e, int m) {
  return Polyline(resample_arc_length(p.points(), s, e, m), p.closed());
}

// Restores a piecewise curve to a fixed total point count: segments are
// sampled densely enough to cover the target, then resampled along arc
// length to exactly total_points.
inline std::vector<Vec2> restore_points(const PiecewiseBezier& pb, int total_points) {
  if (total_points < 2) throw DomainError("restore_points: total_points must be >= 2");
  const int k = pb.piece_count();
  const int m = (total_points - 2 + k) / k + 1;  // ceil((total-1)/k) + 1
  std::vector<Vec2> dense = restore_curve(pb, std::max(2, m));
  if (static_cast<int>(dense.size()) == total_points) return dense;
  return resample_arc_length(dense, 0, dense.size() - 1, total_points);
}

}  // namespace bezmap
