#pragma once

#include <Eigen/Dense>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bezmap/bezier.hpp"
#include "bezmap/camera.hpp"
#include "bezmap/errors.hpp"
#include "bezmap/map_model.hpp"
#include "bezmap/metrics.hpp"
#include "bezmap/polyline.hpp"

#include "json.hpp"

namespace bezmap {

// Version tag of the map document schema.
inline constexpr const char* kSchemaVersion = "bezmap/1";

using Json = nlohmann::ordered_json;

namespace detail {

inline const Json& require_field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw ParseError(path + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(path + ": missing field '" + key + "'");
  return *it;
}

inline double as_number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path + ": expected a number");
  return j.get<double>();
}

inline int as_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ParseError(path + ": expected an integer");
  return j.get<int>();
}

inline std::string as_string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw ParseError(path + ": expected a string");
  return j.get<std::string>();
}

inline Vec2 as_point(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw ParseError(path + ": expected a [x, y] pair");
  return {as_number(j[0], path + "[0]"), as_number(j[1], path + "[1]")};
}

inline std::vector<Vec2> as_points(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path + ": expected an array of points");
  std::vector<Vec2> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(as_point(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

inline Json points_to_json(const std::vector<Vec2>& pts) {
  Json arr = Json::array();
  for (const Vec2& p : pts) arr.push_back(Json::array({p.x, p.y}));
  return arr;
}

}  // namespace detail

inline Json taxonomy_to_json(const std::vector<MapClass>& taxonomy) {
  Json arr = Json::array();
  for (const MapClass& cls : taxonomy) {
    Json c;
    c["id"] = cls.id;
    c["name"] = cls.name;
    c["degree"] = cls.bezier_config.degree;
    c["max_pieces"] = cls.bezier_config.max_pieces;
    c["epsilon"] = cls.bezier_config.tolerance;
    c["samples"] = cls.bezier_config.samples;
    arr.push_back(std::move(c));
  }
  return arr;
}

inline std::vector<MapClass> taxonomy_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path + ": expected an array");
  std::vector<MapClass> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    MapClass cls;
    cls.id = detail::as_int(detail::require_field(j[i], "id", p), p + ".id");
    cls.name = detail::as_string(detail::require_field(j[i], "name", p), p + ".name");
    cls.bezier_config.degree =
        detail::as_int(detail::require_field(j[i], "degree", p), p + ".degree");
    cls.bezier_config.max_pieces =
        detail::as_int(detail::require_field(j[i], "max_pieces", p), p + ".max_pieces");
    cls.bezier_config.tolerance =
        detail::as_number(detail::require_field(j[i], "epsilon", p), p + ".epsilon");
    cls.bezier_config.samples =
        detail::as_int(detail::require_field(j[i], "samples", p), p + ".samples");
    out.push_back(std::move(cls));
  }
  return out;
}

inline std::string write_map(const VectorMap& map) {
  validate_map(map);
  Json doc;
  doc["schema"] = kSchemaVersion;
  doc["taxonomy"] = taxonomy_to_json(map.taxonomy);
  Json grid;
  grid["front"] = map.grid.front;
  grid["rear"] = map.grid.rear;
  grid["left"] = map.grid.left;
  grid["right"] = map.grid.right;
  grid["resolution"] = map.grid.resolution;
  doc["grid"] = std::move(grid);
  Json instances = Json::array();
  for (const MapInstance& ins : map.instances) {
    Json item;
    item["class_id"] = ins.class_id;
    if (ins.is_bezier()) {
      const OffsetEncoding enc = encode_offsets(ins.bezier());
      Json bez;
      bez["degree"] = ins.bezier().degree();
      bez["explicit_points"] = detail::points_to_json(enc.explicit_points);
      Json offsets = Json::array();
      for (const auto& seg : enc.offsets) offsets.push_back(detail::points_to_json(seg));
      bez["offsets"] = std::move(offsets);
      item["bezier"] = std::move(bez);
    } else {
      item["polyline"] = detail::points_to_json(ins.polyline().points());
    }
    if (ins.score.has_value()) item["score"] = *ins.score;
    instances.push_back(std::move(item));
  }
  doc["instances"] = std::move(instances);
  return doc.dump(2) + "\n";
}

inline VectorMap parse_map(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("document: invalid JSON: ") + e.what());
  }
  const std::string version =
      detail::as_string(detail::require_field(doc, "schema", "document"), "document.schema");
  if (version != kSchemaVersion) {
    throw ParseError("document.schema: unsupported version '" + version + "', expected '" +
                     std::string(kSchemaVersion) + "'");
  }

  VectorMap map;
  map.taxonomy =
      taxonomy_from_json(detail::require_field(doc, "taxonomy", "document"), "document.taxonomy");
  try {
    validate_taxonomy(map.taxonomy);
  } catch (const Error& e) {
    throw ParseError(std::string("document.taxonomy: ") + e.what());
  }

  const Json& grid = detail::require_field(doc, "grid", "document");
  map.grid.front = detail::as_number(detail::require_field(grid, "front", "document.grid"),
                                     "document.grid.front");
  map.grid.rear = detail::as_number(detail::require_field(grid, "rear", "document.grid"),
                                    "document.grid.rear");
  map.grid.left = detail::as_number(detail::require_field(grid, "left", "document.grid"),
                                    "document.grid.left");
  map.grid.right = detail::as_number(detail::require_field(grid, "right", "document.grid"),
                                     "document.grid.right");
  map.grid.resolution =
      detail::as_number(detail::require_field(grid, "resolution", "document.grid"),
                        "document.grid.resolution");
  try {
    validate_grid(map.grid);
  } catch (const Error& e) {
    throw ParseError(std::string("document.grid: ") + e.what());
  }

  const Json& instances = detail::require_field(doc, "instances", "document");
  if (!instances.is_array()) throw ParseError("document.instances: expected an array");
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const std::string p = "document.instances[" + std::to_string(i) + "]";
    const Json& item = instances[i];
    MapInstance ins{0, Polyline({{0, 0}, {1, 0}}), std::nullopt};
    ins.class_id = detail::as_int(detail::require_field(item, "class_id", p), p + ".class_id");
    if (ins.class_id < 0 || ins.class_id >= static_cast<int>(map.taxonomy.size())) {
      throw ParseError(p + ".class_id: unknown class id " + std::to_string(ins.class_id));
    }
    const MapClass& cls = map.taxonomy[static_cast<std::size_t>(ins.class_id)];

    const bool has_polyline = item.is_object() && item.contains("polyline");
    const bool has_bezier = item.is_object() && item.contains("bezier");
    if (has_polyline == has_bezier) {
      throw ParseError(p + ": expected exactly one of 'polyline' or 'bezier'");
    }
    if (has_polyline) {
      try {
        ins.shape = Polyline(detail::as_points(item["polyline"], p + ".polyline"));
      } catch (const ParseError&) {
        throw;
      } catch (const Error& e) {
        throw ParseError(p + ".polyline: " + e.what());
      }
    } else {
      const Json& bez = item["bezier"];
      const std::string bp = p + ".bezier";
      const int degree = detail::as_int(detail::require_field(bez, "degree", bp), bp + ".degree");
      if (degree != cls.bezier_config.degree) {
        throw ParseError(bp + ".degree: " + std::to_string(degree) + " does not match class '" +
                         cls.name + "' degree " + std::to_string(cls.bezier_config.degree));
      }
      OffsetEncoding enc;
      enc.explicit_points = detail::as_points(detail::require_field(bez, "explicit_points", bp),
                                              bp + ".explicit_points");
      const Json& offsets = detail::require_field(bez, "offsets", bp);
      if (!offsets.is_array()) throw ParseError(bp + ".offsets: expected an array");
      for (std::size_t s = 0; s < offsets.size(); ++s) {
        enc.offsets.push_back(
            detail::as_points(offsets[s], bp + ".offsets[" + std::to_string(s) + "]"));
      }
      if (static_cast<int>(enc.explicit_points.size()) - 1 > cls.bezier_config.max_pieces) {
        throw ParseError(bp + ": " + std::to_string(enc.explicit_points.size() - 1) +
                         " pieces exceed class '" + cls.name + "' maximum " +
                         std::to_string(cls.bezier_config.max_pieces));
      }
      try {
        ins.shape = decode_offsets(enc, degree, ins.class_id);
      } catch (const Error& e) {
        throw ParseError(bp + ": " + e.what());
      }
    }
    if (item.contains("score")) {
      ins.score = detail::as_number(item["score"], p + ".score");
    }
    map.instances.push_back(std::move(ins));
  }
  try {
    validate_map(map);
  } catch (const Error& e) {
    throw ParseError(std::string("document: ") + e.what());
  }
  return map;
}

inline Json report_to_json(const EvalReport& report) {
  Json j;
  j["thresholds"] = report.thresholds;
  Json classes = Json::array();
  for (const ClassEval& ce : report.classes) {
    Json c;
    c["id"] = ce.class_id;
    c["name"] = ce.name;
    c["ap_per_threshold"] = ce.ap_per_threshold;
    c["ap"] = ce.ap;
    c["gt_count"] = ce.gt_count;
    c["pred_count"] = ce.pred_count;
    c["both_empty"] = ce.both_empty;
    classes.push_back(std::move(c));
  }
  j["classes"] = std::move(classes);
  j["map"] = report.map;
  return j;
}

inline std::string write_report(const EvalReport& report) {
  return report_to_json(report).dump(2) + "\n";
}

// Camera parameters from JSON: 'intrinsics' as a row-major 3x3 array,
// 'extrinsics' as a row-major 4x4 rigid world-to-camera transform, and an
// optional row-major 3x3 'feature_transform' (identity when absent).
inline CameraModel camera_from_json(const Json& j, const std::string& path = "camera") {
  auto mat3 = [&](const Json& arr, const std::string& p) {
    if (!arr.is_array() || arr.size() != 9) throw ParseError(p + ": expected 9 numbers");
    Eigen::Matrix3d m;
    for (int i = 0; i < 9; ++i) {
      m(i / 3, i % 3) = detail::as_number(arr[static_cast<std::size_t>(i)],
                                          p + "[" + std::to_string(i) + "]");
    }
    return m;
  };
  CameraModel cam;
  cam.intrinsics = mat3(detail::require_field(j, "intrinsics", path), path + ".intrinsics");
  const Json& ext = detail::require_field(j, "extrinsics", path);
  if (!ext.is_array() || ext.size() != 16) {
    throw ParseError(path + ".extrinsics: expected 16 numbers (row-major 4x4)");
  }
  Eigen::Matrix4d t;
  for (int i = 0; i < 16; ++i) {
    t(i / 4, i % 4) = detail::as_number(ext[static_cast<std::size_t>(i)],
                                        path + ".extrinsics[" + std::to_string(i) + "]");
  }
  cam.rotation = t.topLeftCorner<3, 3>();
  cam.translation = t.topRightCorner<3, 1>();
  if (j.is_object() && j.contains("feature_transform")) {
    cam.feature_transform = mat3(j["feature_transform"], path + ".feature_transform");
  }
  try {
    validate(cam);
  } catch (const Error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return cam;
}

inline CameraModel parse_camera(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("camera: invalid JSON: ") + e.what());
  }
  return camera_from_json(doc);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path);
  out << content;
}

}  // namespace bezmap
