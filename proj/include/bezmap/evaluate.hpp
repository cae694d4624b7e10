#pragma once

#include <utility>
#include <vector>

#include "bezmap/gengt.hpp"
#include "bezmap/map_model.hpp"
#include "bezmap/metrics.hpp"
#include "bezmap/polyline.hpp"

namespace bezmap {

// Evaluation density: instances are compared as 100-point curve samples,
// matching the m = 100 used for ground-truth generation. Annotation
// polylines are resampled along arc length to the same density so that the
// Chamfer distance measures curve against curve, independent of how many
// vertices an annotation happens to carry.
inline constexpr int kEvalPointsPerInstance = 100;

inline std::vector<Vec2> evaluation_points(const MapInstance& ins) {
  if (ins.is_bezier()) return restore_points(ins.bezier(), kEvalPointsPerInstance);
  const std::vector<Vec2>& pts = ins.polyline().points();
  return resample_arc_length(pts, 0, pts.size() - 1, kEvalPointsPerInstance);
}

inline void require_same_taxonomy(const VectorMap& a, const VectorMap& b) {
  if (!(a.taxonomy == b.taxonomy)) {
    throw ConfigError("evaluate_map: prediction and ground-truth taxonomies differ");
  }
}

// Instance-level AP per class and threshold; class AP averages thresholds,
// mAP averages classes. A class empty on both sides is scored 1.0 and
// flagged so corpus means stay well-defined.
inline EvalReport evaluate_map(const VectorMap& pred, const VectorMap& gt,
                               const std::vector<double>& thresholds) {
  require_same_taxonomy(pred, gt);
  validate_map(pred);
  validate_map(gt);
  if (thresholds.empty()) throw ConfigError("evaluate_map: no thresholds given");

  EvalReport report;
  report.thresholds = thresholds;
  double map_sum = 0.0;
  for (const MapClass& cls : gt.taxonomy) {
    std::vector<ScoredPoints> preds;
    for (const MapInstance& ins : pred.instances) {
      if (ins.class_id != cls.id) continue;
      preds.emplace_back(evaluation_points(ins), ins.score.value_or(1.0));
    }
    std::vector<std::vector<Vec2>> gts;
    for (const MapInstance& ins : gt.instances) {
      if (ins.class_id != cls.id) continue;
      gts.push_back(evaluation_points(ins));
    }

    ClassEval ce;
    ce.class_id = cls.id;
    ce.name = cls.name;
    ce.gt_count = static_cast<int>(gts.size());
    ce.pred_count = static_cast<int>(preds.size());
    ce.both_empty = preds.empty() && gts.empty();
    double sum = 0.0;
    for (double tau : thresholds) {
      const double ap = instance_ap(preds, gts, tau);
      ce.ap_per_threshold.push_back(ap);
      sum += ap;
    }
    ce.ap = sum / static_cast<double>(thresholds.size());
    map_sum += ce.ap;
    report.classes.push_back(std::move(ce));
  }
  report.map = map_sum / static_cast<double>(report.classes.size());
  return report;
}

// Corpus-level reliability check of generated ground truths: every
// annotation is converted with its class configuration, restored, and the
// restorations are evaluated as unit-score predictions against the original
// annotations. Conversion failures become missing predictions, not aborts.
inline EvalReport verify_corpus(const std::vector<std::pair<Polyline, int>>& instances,
                                const std::vector<MapClass>& taxonomy,
                                const std::vector<double>& thresholds,
                                int* failed_count = nullptr) {
  validate_taxonomy(taxonomy);
  VectorMap gt;
  gt.taxonomy = taxonomy;
  VectorMap pred;
  pred.taxonomy = taxonomy;
  int failures = 0;
  for (const auto& [polyline, class_id] : instances) {
    if (class_id < 0 || class_id >= static_cast<int>(taxonomy.size())) {
      throw ConfigError("verify_corpus: unknown class id " + std::to_string(class_id));
    }
    gt.instances.push_back(MapInstance{class_id, polyline, std::nullopt});
    try {
      PiecewiseBezier pb =
          gen_gt(polyline, taxonomy[static_cast<std::size_t>(class_id)].bezier_config, class_id);
      pred.instances.push_back(MapInstance{class_id, std::move(pb), 1.0});
    } catch (const Error&) {
      ++failures;
    }
  }
  if (failed_count != nullptr) *failed_count = failures;
  return evaluate_map(pred, gt, thresholds);
}

inline EvalReport verify_corpus(const VectorMap& annotations,
                                const std::vector<double>& thresholds,
                                int* failed_count = nullptr) {
  std::vector<std::pair<Polyline, int>> instances;
  instances.reserve(annotations.instances.size());
  for (const MapInstance& ins : annotations.instances) {
    if (!ins.is_bezier()) instances.emplace_back(ins.polyline(), ins.class_id);
  }
  return verify_corpus(instances, annotations.taxonomy, thresholds, failed_count);
}

}  // namespace bezmap
