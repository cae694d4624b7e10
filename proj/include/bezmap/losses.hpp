#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "bezmap/bezier.hpp"
#include "bezmap/errors.hpp"
#include "bezmap/map_model.hpp"
#include "bezmap/vec2.hpp"

namespace bezmap {

// Loss weights (lambda_s, lambda_z, lambda_p, lambda_c, lambda_r); the
// defaults are 1, 5, 5, 10, 1.
struct LossWeights {
  double semantic{1.0};
  double instance{5.0};
  double point{5.0};
  double curve{10.0};
  double region{1.0};

  friend bool operator==(const LossWeights&, const LossWeights&) = default;
};

inline void validate(const LossWeights& w) {
  for (double v : {w.semantic, w.instance, w.point, w.curve, w.region}) {
    if (!(std::isfinite(v) && v >= 0.0)) {
      throw DomainError("LossWeights: weights must be finite and >= 0");
    }
  }
}

// Single-channel raster with values in [0,1]; cell (r,c) is the value at
// integer lattice node (r,c) in pixel coordinates.
class RasterMask {
 public:
  RasterMask(int height, int width, double fill = 0.0)
      : height_(height), width_(width), data_(checked_size(height, width), check_value(fill)) {}

  static RasterMask from_data(int height, int width, std::vector<double> data) {
    if (data.size() != checked_size(height, width)) {
      throw ShapeError("RasterMask: data size does not match height*width");
    }
    for (double v : data) check_value(v);
    RasterMask m(height, width);
    m.data_ = std::move(data);
    return m;
  }

  int height() const { return height_; }
  int width() const { return width_; }
  double at(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * static_cast<std::size_t>(width_) +
                 static_cast<std::size_t>(c)];
  }
  void set(int r, int c, double v) {
    data_[static_cast<std::size_t>(r) * static_cast<std::size_t>(width_) +
          static_cast<std::size_t>(c)] = check_value(v);
  }
  const std::vector<double>& data() const { return data_; }

 private:
  static std::size_t checked_size(int height, int width) {
    if (height < 1 || width < 1) throw ShapeError("RasterMask: non-positive dimensions");
    return static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  }
  static double check_value(double v) {
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("RasterMask: cell value outside [0,1]");
    return v;
  }

  int height_;
  int width_;
  std::vector<double> data_;
};

struct DilationSpec {
  int width{5};  // omega
};

// Mean sequential per-point L1 distance between two coordinate sequences.
inline double l_point(const std::vector<Vec2>& pred, const std::vector<Vec2>& gt) {
  if (pred.size() != gt.size()) {
    throw ShapeError("l_point: sequence lengths differ (" + std::to_string(pred.size()) +
                     " vs " + std::to_string(gt.size()) + ")");
  }
  if (pred.empty()) throw ShapeError("l_point: empty sequences");
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) sum += l1_norm(gt[i] - pred[i]);
  return sum / static_cast<double>(pred.size());
}

inline double l_point(const PiecewiseBezier& pred, const PiecewiseBezier& gt) {
  return l_point(pred.controls(), gt.controls());
}

// Restores both control sequences with m samples per segment and applies
// the sequential L1 loss to the restored curves.
inline double l_curve(const PiecewiseBezier& pred, const PiecewiseBezier& gt, int m) {
  if (pred.degree() != gt.degree() || pred.piece_count() != gt.piece_count()) {
    throw ShapeError("l_curve: curves must share <k,n>");
  }
  return l_point(restore_curve(pred, m), restore_curve(gt, m));
}

namespace detail {

// Subgradient of |v|; at an exact kink (v == 0) the zero element of the
// subdifferential is returned.
inline double l1_sign(double v) {
  if (v > 0.0) return 1.0;
  if (v < 0.0) return -1.0;
  return 0.0;
}

}  // namespace detail

// Analytic subgradient of l_point with respect to the predicted points.
inline std::vector<Vec2> grad_l_point(const std::vector<Vec2>& pred, const std::vector<Vec2>& gt) {
  if (pred.size() != gt.size() || pred.empty()) {
    throw ShapeError("grad_l_point: invalid sequence lengths");
  }
  const double scale = 1.0 / static_cast<double>(pred.size());
  std::vector<Vec2> grad(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    grad[i] = {scale * detail::l1_sign(pred[i].x - gt[i].x),
               scale * detail::l1_sign(pred[i].y - gt[i].y)};
  }
  return grad;
}

// Analytic subgradient of l_curve with respect to the predicted flat control
// sequence: the sign of the restored residual pushed back through the fixed
// Bernstein sampling weights. Joint deduplication in restore_curve keeps the
// first occurrence, so for every segment after the first the r = 0 row does
// not contribute.
inline std::vector<Vec2> grad_l_curve(const PiecewiseBezier& pred, const PiecewiseBezier& gt,
                                      int m) {
  if (pred.degree() != gt.degree() || pred.piece_count() != gt.piece_count()) {
    throw ShapeError("grad_l_curve: curves must share <k,n>");
  }
  const std::vector<Vec2> restored_pred = restore_curve(pred, m);
  const std::vector<Vec2> restored_gt = restore_curve(gt, m);
  const BernsteinMatrix bm = bernstein_matrix(pred.degree(), m);
  const int n = pred.degree();
  const int k = pred.piece_count();
  const double scale = 1.0 / static_cast<double>(restored_pred.size());

  std::vector<Vec2> grad(pred.controls().size(), Vec2{0.0, 0.0});
  for (int j = 0; j < k; ++j) {
    const std::size_t base = static_cast<std::size_t>(j) * static_cast<std::size_t>(n);
    for (int r = (j == 0 ? 0 : 1); r < m; ++r) {
      const std::size_t idx = static_cast<std::size_t>(j) * static_cast<std::size_t>(m - 1) +
                              static_cast<std::size_t>(r);
      const Vec2 sign{detail::l1_sign(restored_pred[idx].x - restored_gt[idx].x),
                      detail::l1_sign(restored_pred[idx].y - restored_gt[idx].y)};
      for (int i = 0; i <= n; ++i) {
        const double w = scale * bm.forward(r, i);
        grad[base + static_cast<std::size_t>(i)] += Vec2{w * sign.x, w * sign.y};
      }
    }
  }
  return grad;
}

// Expands each coordinate into its (2w+1)^2 integer-offset neighborhood.
// Output order is row-major per input point; duplicates are kept, so the
// output size is exactly (2w+1)^2 times the input size.
inline std::vector<PixelCoord> dilate_coords(const std::vector<PixelCoord>& points,
                                             const DilationSpec& spec) {
  if (spec.width < 0) throw DomainError("dilate_coords: width must be >= 0");
  const int w = spec.width;
  std::vector<PixelCoord> out;
  out.reserve(points.size() * static_cast<std::size_t>(2 * w + 1) *
              static_cast<std::size_t>(2 * w + 1));
  for (const PixelCoord& p : points) {
    for (int dr = -w; dr <= w; ++dr) {
      for (int dc = -w; dc <= w; ++dc) {
        out.push_back({p.row + static_cast<double>(dr), p.col + static_cast<double>(dc)});
      }
    }
  }
  return out;
}

// Bilinear readout of the mask at real-valued pixel coordinates with zero
// padding: lattice nodes outside the mask contribute 0.
inline std::vector<double> grid_sample(const RasterMask& mask,
                                       const std::vector<PixelCoord>& coords) {
  std::vector<double> out;
  out.reserve(coords.size());
  const int h = mask.height();
  const int w = mask.width();
  auto node = [&](long r, long c) -> double {
    if (r < 0 || r >= h || c < 0 || c >= w) return 0.0;
    return mask.at(static_cast<int>(r), static_cast<int>(c));
  };
  for (const PixelCoord& p : coords) {
    if (!std::isfinite(p.row) || !std::isfinite(p.col)) {
      throw DomainError("grid_sample: non-finite coordinate");
    }
    if (p.row <= -1.0 || p.row >= static_cast<double>(h) || p.col <= -1.0 ||
        p.col >= static_cast<double>(w)) {
      out.push_back(0.0);
      continue;
    }
    const double fr = std::floor(p.row);
    const double fc = std::floor(p.col);
    const long r0 = static_cast<long>(fr);
    const long c0 = static_cast<long>(fc);
    const double tr = p.row - fr;
    const double tc = p.col - fc;
    const double v = (1.0 - tr) * ((1.0 - tc) * node(r0, c0) + tc * node(r0, c0 + 1)) +
                     tr * ((1.0 - tc) * node(r0 + 1, c0) + tc * node(r0 + 1, c0 + 1));
    out.push_back(v);
  }
  return out;
}

// 1 - (2 sum(p g) + s) / (sum(p^2) + sum(g^2) + s) with smoothing s = 1.
inline double dice_loss(const std::vector<double>& pred, const std::vector<double>& gt) {
  if (pred.size() != gt.size()) throw ShapeError("dice_loss: length mismatch");
  constexpr double kSmooth = 1.0;
  double inter = 0.0;
  double pred_sq = 0.0;
  double gt_sq = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!(pred[i] >= 0.0 && pred[i] <= 1.0) || !(gt[i] >= 0.0 && gt[i] <= 1.0)) {
      throw DomainError("dice_loss: values must lie in [0,1]");
    }
    inter += pred[i] * gt[i];
    pred_sq += pred[i] * pred[i];
    gt_sq += gt[i] * gt[i];
  }
  return 1.0 - (2.0 * inter + kSmooth) / (pred_sq + gt_sq + kSmooth);
}

inline double dice_loss(const RasterMask& pred, const RasterMask& gt) {
  if (pred.height() != gt.height() || pred.width() != gt.width()) {
    throw ShapeError("dice_loss: mask shapes differ");
  }
  return dice_loss(pred.data(), gt.data());
}

// Region supervision: the predicted curve (world meters) is converted to
// pixel space, dilated, and both masks are sampled at the dilated
// coordinates; the loss is the dice between the two sample vectors.
inline double l_region(const RasterMask& pred_mask, const RasterMask& gt_mask,
                       const std::vector<Vec2>& pred_curve, const DilationSpec& spec,
                       const BevGridSpec& grid) {
  if (pred_mask.height() != gt_mask.height() || pred_mask.width() != gt_mask.width()) {
    throw ShapeError("l_region: mask shapes differ");
  }
  if (pred_curve.empty()) throw DomainError("l_region: empty curve");
  std::vector<PixelCoord> px;
  px.reserve(pred_curve.size());
  for (const Vec2& p : pred_curve) px.push_back(grid.world_to_pixel(p));
  const std::vector<PixelCoord> dilated = dilate_coords(px, spec);
  if (dilated.empty()) throw DomainError("l_region: empty dilated coordinate set");
  return dice_loss(grid_sample(pred_mask, dilated), grid_sample(gt_mask, dilated));
}

// L_PCR = lambda_p L_point + lambda_c L_curve + lambda_r L_region.
inline double pcr_loss(double point, double curve, double region, const LossWeights& w) {
  validate(w);
  for (double v : {point, curve, region}) {
    if (!std::isfinite(v)) throw DomainError("pcr_loss: non-finite component");
  }
  return w.point * point + w.curve * curve + w.region * region;
}

// Mean binary cross-entropy over cells with probabilities clamped to
// [1e-7, 1 - 1e-7]; this artifact consumes masks, not logits.
inline double binary_cross_entropy(const RasterMask& pred, const RasterMask& gt) {
  if (pred.height() != gt.height() || pred.width() != gt.width()) {
    throw ShapeError("binary_cross_entropy: mask shapes differ");
  }
  constexpr double kClamp = 1e-7;
  const std::vector<double>& p = pred.data();
  const std::vector<double>& g = gt.data();
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double q = std::clamp(p[i], kClamp, 1.0 - kClamp);
    sum -= g[i] * std::log(q) + (1.0 - g[i]) * std::log(1.0 - q);
  }
  return sum / static_cast<double>(p.size());
}

// L_AUX = lambda_s (CE + dice)(semantic) + lambda_z (CE + dice)(instance).
inline double aux_loss(const RasterMask& pred_sem, const RasterMask& gt_sem,
                       const RasterMask& pred_ins, const RasterMask& gt_ins,
                       const LossWeights& w) {
  validate(w);
  const double sem = binary_cross_entropy(pred_sem, gt_sem) + dice_loss(pred_sem, gt_sem);
  const double ins = binary_cross_entropy(pred_ins, gt_ins) + dice_loss(pred_ins, gt_ins);
  return w.semantic * sem + w.instance * ins;
}

// Minimum-cost one-to-one assignment over min(rows, cols) pairs, solved
// with the shortest-augmenting-path formulation with potentials. Returns
// (row, col) pairs ordered by row.
inline std::vector<std::pair<int, int>> hungarian_match(
    const std::vector<std::vector<double>>& cost) {
  const int rows = static_cast<int>(cost.size());
  if (rows == 0) return {};
  const int cols = static_cast<int>(cost.front().size());
  for (const auto& row : cost) {
    if (static_cast<int>(row.size()) != cols) {
      throw ShapeError("hungarian_match: ragged cost matrix");
    }
    for (double v : row) {
      if (!std::isfinite(v)) throw DomainError("hungarian_match: non-finite cost");
    }
  }
  if (cols == 0) return {};

  const bool transposed = rows > cols;
  const int n = transposed ? cols : rows;
  const int m = transposed ? rows : cols;
  auto at = [&](int i, int j) -> double {
    return transposed ? cost[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]
                      : cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  };

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(m) + 1, 0.0);
  std::vector<int> match(static_cast<std::size_t>(m) + 1, 0);  // column -> row (1-based)
  std::vector<int> way(static_cast<std::size_t>(m) + 1, 0);

  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(m) + 1, kInf);
    std::vector<char> used(static_cast<std::size_t>(m) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = match[static_cast<std::size_t>(j0)];
      double delta = kInf;
      int j1 = -1;
      for (int j = 1; j <= m; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = at(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                           v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (match[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(n));
  for (int j = 1; j <= m; ++j) {
    const int i = match[static_cast<std::size_t>(j)];
    if (i == 0) continue;
    if (transposed) {
      pairs.emplace_back(j - 1, i - 1);
    } else {
      pairs.emplace_back(i - 1, j - 1);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

}  // namespace bezmap
