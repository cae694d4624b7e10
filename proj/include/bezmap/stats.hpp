#pragma once

#include <map>
#include <string>
#include <vector>

#include "bezmap/errors.hpp"
#include "bezmap/map_model.hpp"

#include "json.hpp"

namespace bezmap {

// Compactness and piece-count statistics for an annotation/ground-truth
// document pair. The reduction of a pair is 1 - (n k + 1) / |polyline|.
struct ClassStats {
  int class_id{0};
  std::string name;
  int paired{0};
  int skipped{0};
  double mean_annotation_points{0.0};
  double mean_control_points{0.0};
  double mean_reduction{0.0};
  std::map<int, int> piece_histogram;
};

struct StatsReport {
  std::vector<ClassStats> classes;
};

// Instances are paired by position: annotation i against ground truth i.
// Pairs where the ground-truth side is not in Bezier form (or one side is
// missing) are reported as skipped.
inline StatsReport compute_stats(const VectorMap& annotations, const VectorMap& gt) {
  if (!(annotations.taxonomy == gt.taxonomy)) {
    throw ConfigError("compute_stats: document taxonomies differ");
  }
  StatsReport report;
  for (const MapClass& cls : annotations.taxonomy) {
    ClassStats cs;
    cs.class_id = cls.id;
    cs.name = cls.name;
    report.classes.push_back(cs);
  }

  const std::size_t paired_count = std::min(annotations.instances.size(), gt.instances.size());
  for (std::size_t i = 0; i < std::max(annotations.instances.size(), gt.instances.size()); ++i) {
    const bool in_range = i < paired_count;
    const int class_id = in_range ? gt.instances[i].class_id
                                  : (i < gt.instances.size() ? gt.instances[i].class_id
                                                             : annotations.instances[i].class_id);
    ClassStats& cs = report.classes[static_cast<std::size_t>(class_id)];
    if (!in_range || !gt.instances[i].is_bezier() || annotations.instances[i].is_bezier() ||
        annotations.instances[i].class_id != gt.instances[i].class_id) {
      ++cs.skipped;
      continue;
    }
    const PiecewiseBezier& pb = gt.instances[i].bezier();
    const double annotation_points =
        static_cast<double>(annotations.instances[i].polyline().size());
    const double control_points = static_cast<double>(pb.controls().size());
    ++cs.paired;
    cs.mean_annotation_points += annotation_points;
    cs.mean_control_points += control_points;
    cs.mean_reduction += 1.0 - control_points / annotation_points;
    ++cs.piece_histogram[pb.piece_count()];
  }

  for (ClassStats& cs : report.classes) {
    if (cs.paired > 0) {
      cs.mean_annotation_points /= cs.paired;
      cs.mean_control_points /= cs.paired;
      cs.mean_reduction /= cs.paired;
    }
  }
  return report;
}

inline nlohmann::ordered_json stats_to_json(const StatsReport& report) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json classes = nlohmann::ordered_json::array();
  for (const ClassStats& cs : report.classes) {
    nlohmann::ordered_json c;
    c["id"] = cs.class_id;
    c["name"] = cs.name;
    c["paired"] = cs.paired;
    c["skipped"] = cs.skipped;
    c["mean_annotation_points"] = cs.mean_annotation_points;
    c["mean_control_points"] = cs.mean_control_points;
    c["mean_reduction"] = cs.mean_reduction;
    nlohmann::ordered_json hist = nlohmann::ordered_json::object();
    for (const auto& [pieces, count] : cs.piece_histogram) {
      hist[std::to_string(pieces)] = count;
    }
    c["piece_histogram"] = std::move(hist);
    classes.push_back(std::move(c));
  }
  j["classes"] = std::move(classes);
  return j;
}

inline std::string write_stats(const StatsReport& report) {
  return stats_to_json(report).dump(2) + "\n";
}

}  // namespace bezmap
