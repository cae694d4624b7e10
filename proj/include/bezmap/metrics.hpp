#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "bezmap/errors.hpp"
#include "bezmap/polyline.hpp"
#include "bezmap/vec2.hpp"

namespace bezmap {

namespace detail {

inline double nearest_distance(Vec2 p, const std::vector<Vec2>& set) {
  double best = std::numeric_limits<double>::infinity();
  for (const Vec2& q : set) best = std::min(best, squared_distance(p, q));
  return std::sqrt(best);
}

}  // namespace detail

// Symmetric Chamfer distance: the average of the two directed mean
// nearest-neighbor distances, CD = 1/2 (mean_a NN(a,B) + mean_b NN(b,A)).
inline double chamfer_distance(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  if (a.empty() || b.empty()) throw DomainError("chamfer_distance: empty point set");
  double sum_a = 0.0;
  for (const Vec2& p : a) sum_a += detail::nearest_distance(p, b);
  double sum_b = 0.0;
  for (const Vec2& q : b) sum_b += detail::nearest_distance(q, a);
  return 0.5 * (sum_a / static_cast<double>(a.size()) + sum_b / static_cast<double>(b.size()));
}

inline double chamfer_distance(const Polyline& a, const Polyline& b) {
  return chamfer_distance(a.points(), b.points());
}

// Decision-exact early-out form: returns true iff chamfer_distance(a, b) < bound.
// Partial sums accumulate in the same order as the full computation, so the
// verdict always matches the exact value.
inline bool chamfer_less_than(const std::vector<Vec2>& a, const std::vector<Vec2>& b,
                              double bound) {
  if (a.empty() || b.empty()) throw DomainError("chamfer_less_than: empty point set");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double sum_a = 0.0;
  for (const Vec2& p : a) {
    sum_a += detail::nearest_distance(p, b);
    if (0.5 * (sum_a / na) >= bound) return false;
  }
  double sum_b = 0.0;
  for (const Vec2& q : b) {
    sum_b += detail::nearest_distance(q, a);
    if (0.5 * (sum_a / na + sum_b / nb) >= bound) return false;
  }
  return 0.5 * (sum_a / na + sum_b / nb) < bound;
}

// Per-class evaluation under a set of Chamfer thresholds.
struct ClassEval {
  int class_id{0};
  std::string name;
  std::vector<double> ap_per_threshold;
  double ap{0.0};  // arithmetic mean over thresholds
  int gt_count{0};
  int pred_count{0};
  bool both_empty{false};  // AP defaulted to 1.0 because nothing was present
};

struct EvalReport {
  std::vector<double> thresholds;
  std::vector<ClassEval> classes;
  double map{0.0};  // mean over classes
};

using ScoredPoints = std::pair<std::vector<Vec2>, double>;

namespace detail {

struct Box {
  double min_x, min_y, max_x, max_y;
};

inline Box bounding_box(const std::vector<Vec2>& pts) {
  Box b{pts.front().x, pts.front().y, pts.front().x, pts.front().y};
  for (const Vec2& p : pts) {
    b.min_x = std::min(b.min_x, p.x);
    b.min_y = std::min(b.min_y, p.y);
    b.max_x = std::max(b.max_x, p.x);
    b.max_y = std::max(b.max_y, p.y);
  }
  return b;
}

// Lower bound on the Chamfer distance: every nearest-neighbor distance is at
// least the gap between the bounding boxes.
inline double box_gap(const Box& a, const Box& b) {
  const double dx = std::max({0.0, a.min_x - b.max_x, b.min_x - a.max_x});
  const double dy = std::max({0.0, a.min_y - b.max_y, b.min_y - a.max_y});
  return std::hypot(dx, dy);
}

}  // namespace detail

// Detection-style AP at one threshold. Predictions are visited in order of
// descending score (stable for ties); each is matched one-to-one to the
// unmatched ground truth with the smallest Chamfer distance (ties by lower
// index) and counts as a true positive only when that distance is below tau.
// The result is the area under the interpolated precision-recall curve.
inline double instance_ap(const std::vector<ScoredPoints>& preds,
                          const std::vector<std::vector<Vec2>>& gts, double tau) {
  if (gts.empty()) return preds.empty() ? 1.0 : 0.0;
  if (preds.empty()) return 0.0;
  for (const ScoredPoints& p : preds) {
    if (!std::isfinite(p.second)) throw DomainError("instance_ap: non-finite score");
  }

  std::vector<std::size_t> order(preds.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return preds[i].second > preds[j].second; });

  std::vector<detail::Box> gt_boxes;
  gt_boxes.reserve(gts.size());
  for (const auto& g : gts) gt_boxes.push_back(detail::bounding_box(g));

  std::vector<char> matched(gts.size(), 0);
  std::vector<char> is_tp;
  is_tp.reserve(preds.size());

  std::vector<std::pair<double, std::size_t>> candidates;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    const auto& pred = preds[order[rank]];
    const detail::Box pb = detail::bounding_box(pred.first);

    candidates.clear();
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (!matched[g]) candidates.emplace_back(detail::box_gap(pb, gt_boxes[g]), g);
    }
    if (candidates.empty()) {
      is_tp.push_back(0);
      continue;
    }
    std::sort(candidates.begin(), candidates.end());

    double best_cd = std::numeric_limits<double>::infinity();
    std::size_t best_g = gts.size();
    for (const auto& [gap, g] : candidates) {
      if (gap > best_cd) break;
      const double cd = chamfer_distance(pred.first, gts[g]);
      if (cd < best_cd || (cd == best_cd && g < best_g)) {
        best_cd = cd;
        best_g = g;
      }
    }
    matched[best_g] = 1;
    is_tp.push_back(best_cd < tau ? 1 : 0);
  }

  // Area under the interpolated PR curve over all operating points.
  const double gt_total = static_cast<double>(gts.size());
  std::vector<double> precision(is_tp.size());
  std::vector<double> recall(is_tp.size());
  int tp = 0;
  for (std::size_t i = 0; i < is_tp.size(); ++i) {
    tp += is_tp[i];
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
    recall[i] = static_cast<double>(tp) / gt_total;
  }
  for (std::size_t i = precision.size() - 1; i-- > 0;) {
    precision[i] = std::max(precision[i], precision[i + 1]);
  }
  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t i = 0; i < precision.size(); ++i) {
    ap += (recall[i] - prev_recall) * precision[i];
    prev_recall = recall[i];
  }
  return ap;
}

}  // namespace bezmap
