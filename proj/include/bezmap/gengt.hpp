#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bezmap/bezier.hpp"
#include "bezmap/errors.hpp"
#include "bezmap/metrics.hpp"
#include "bezmap/polyline.hpp"
#include "bezmap/vec2.hpp"

namespace bezmap {

// Parameters for ground-truth generation: curve degree n, resample length m,
// Chamfer acceptance tolerance in meters, and the maximum piece count.
struct GenGtConfig {
  int degree{3};
  int samples{100};
  double tolerance{0.1};
  int max_pieces{7};

  friend bool operator==(const GenGtConfig&, const GenGtConfig&) = default;
};

inline void validate(const GenGtConfig& cfg) {
  if (cfg.degree < 1) throw DomainError("GenGtConfig: degree must be >= 1");
  if (cfg.samples < cfg.degree + 1) {
    throw DomainError("GenGtConfig: samples must be >= degree + 1");
  }
  if (!(cfg.tolerance > 0.0)) throw DomainError("GenGtConfig: tolerance must be > 0");
  if (cfg.max_pieces < 1) throw DomainError("GenGtConfig: max_pieces must be >= 1");
}

// Fitting error between a resampled sub-curve and its restored counterpart.
inline double fit_error(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  return chamfer_distance(a, b);
}

inline double fit_error(const Polyline& a, const Polyline& b) {
  return chamfer_distance(a.points(), b.points());
}

namespace detail {

// Least-squares fit with the segment ends pinned to the sub-curve ends.
// Pinning keeps joints of consecutive accepted segments bitwise identical
// and makes the emitted curve the exact object the tolerance test saw.
// For degree 1 this reduces to the chord between the span endpoints.
inline std::vector<Vec2> fit_controls_pinned(const std::vector<Vec2>& resampled,
                                             const BernsteinMatrix& bm) {
  std::vector<Vec2> controls = fit_segment(resampled, bm).controls();
  controls.front() = resampled.front();
  controls.back() = resampled.back();
  return controls;
}

inline std::vector<Vec2> restore_with(const BernsteinMatrix& bm,
                                      const std::vector<Vec2>& controls) {
  std::vector<Vec2> out(static_cast<std::size_t>(bm.samples));
  for (int r = 0; r < bm.samples; ++r) {
    Vec2 p{0.0, 0.0};
    for (int i = 0; i <= bm.degree; ++i) p += bm.forward(r, i) * controls[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(r)] = p;
  }
  return out;
}

}  // namespace detail

// Greedy longest-first conversion of an annotated polyline into a
// minimal-piece piecewise Bezier curve. From start index s the farthest end
// e is tried first: the sub-chain is arc-length resampled to m points,
// fitted via C = B+ P, restored as P = B C, and accepted when the Chamfer
// error stays below the tolerance; otherwise e shrinks by one.
inline PiecewiseBezier gen_gt(const Polyline& p, const GenGtConfig& cfg, int class_id = -1) {
  validate(cfg);
  const std::vector<Vec2>& pts = p.points();
  const std::size_t last = pts.size() - 1;
  const BernsteinMatrix bm = bernstein_matrix(cfg.degree, cfg.samples);

  std::vector<Vec2> flat;
  std::size_t s = 0;
  int pieces = 0;
  while (s < last) {
    if (pieces == cfg.max_pieces) {
      throw CapacityError("gen_gt: curve needs more than " + std::to_string(cfg.max_pieces) +
                          " pieces");
    }
    std::size_t e = last;
    std::vector<Vec2> controls;
    for (;;) {
      const std::vector<Vec2> resampled = resample_arc_length(pts, s, e, cfg.samples);
      controls = detail::fit_controls_pinned(resampled, bm);
      const std::vector<Vec2> restored = detail::restore_with(bm, controls);
      if (chamfer_less_than(resampled, restored, cfg.tolerance)) break;
      --e;
      if (e == s) {
        throw ToleranceError("gen_gt: sub-curve at index " + std::to_string(s) +
                             " cannot meet tolerance even at minimal span");
      }
    }
    if (pieces == 0) flat.push_back(controls.front());
    for (int i = 1; i <= cfg.degree; ++i) flat.push_back(controls[static_cast<std::size_t>(i)]);
    ++pieces;
    s = e;
  }
  return PiecewiseBezier(cfg.degree, std::move(flat), class_id);
}

}  // namespace bezmap
