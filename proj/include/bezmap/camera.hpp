#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "bezmap/errors.hpp"
#include "bezmap/vec2.hpp"

namespace bezmap {

// Pinhole camera with a rigid world-to-camera extrinsic and an invertible
// image-grid-to-feature-grid transform A. Callers holding camera-to-world
// extrinsics must invert them first.
struct CameraModel {
  Eigen::Matrix3d intrinsics = Eigen::Matrix3d::Identity();         // K
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();           // R, world -> camera
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();            // t, world -> camera
  Eigen::Matrix3d feature_transform = Eigen::Matrix3d::Identity();  // A

  // Convenience constructor for an axis-aligned image->feature scale.
  static Eigen::Matrix3d axis_scale(double su, double sv) {
    Eigen::Matrix3d a = Eigen::Matrix3d::Identity();
    a(0, 0) = su;
    a(1, 1) = sv;
    return a;
  }
};

inline void validate(const CameraModel& cam) {
  if (std::abs(cam.intrinsics.determinant()) < 1e-12) {
    throw DomainError("CameraModel: intrinsics must be invertible");
  }
  if (std::abs(cam.feature_transform.determinant()) < 1e-12) {
    throw DomainError("CameraModel: feature transform must be invertible");
  }
  const Eigen::Matrix3d rtr = cam.rotation.transpose() * cam.rotation;
  if ((rtr - Eigen::Matrix3d::Identity()).norm() > 1e-9 ||
      std::abs(cam.rotation.determinant() - 1.0) > 1e-9) {
    throw DomainError("CameraModel: extrinsic rotation is not rigid");
  }
}

// Ground intersection of a feature-grid ray. depth <= 0 marks the location
// as invalid (the ray does not hit the ground in front of the camera).
struct GroundPoint {
  Vec2 world{0.0, 0.0};
  double depth{0.0};
  bool valid() const { return depth > 0.0; }
};

// Solves d A^-1 (u,v,1)^T = K (R p + t) for p = (x, y, ground_height):
// the flat-ground inverse perspective mapping. A ray parallel to the ground
// plane yields a singular system and is reported as depth 0.
inline GroundPoint ipm_unproject(Vec2 feature_point, const CameraModel& cam,
                                 double ground_height = 0.0) {
  validate(cam);
  const Eigen::Vector3d q =
      cam.feature_transform.inverse() * Eigen::Vector3d(feature_point.x, feature_point.y, 1.0);
  Eigen::Matrix3d system;
  system.col(0) = cam.intrinsics * cam.rotation.col(0);
  system.col(1) = cam.intrinsics * cam.rotation.col(1);
  system.col(2) = -q;
  const Eigen::Vector3d rhs =
      -cam.intrinsics * (ground_height * cam.rotation.col(2) + cam.translation);

  Eigen::ColPivHouseholderQR<Eigen::Matrix3d> qr(system);
  if (qr.rank() < 3) return GroundPoint{{0.0, 0.0}, 0.0};
  const Eigen::Vector3d sol = qr.solve(rhs);
  if (!sol.allFinite()) return GroundPoint{{0.0, 0.0}, 0.0};
  return GroundPoint{{sol(0), sol(1)}, sol(2)};
}

struct FeaturePoint {
  Vec2 uv{0.0, 0.0};
  double depth{0.0};
};

// Forward direction: K, then T, then the image-to-feature mapping. The
// returned depth is the homogeneous scale solving the same equation as
// ipm_unproject; with an affine A it equals the camera-frame depth.
inline FeaturePoint project_to_feature(const Eigen::Vector3d& world, const CameraModel& cam) {
  validate(cam);
  const Eigen::Vector3d g =
      cam.feature_transform * (cam.intrinsics * (cam.rotation * world + cam.translation));
  if (!(g(2) > 0.0)) {
    throw DomainError("project_to_feature: point is behind the camera (depth " +
                      std::to_string(g(2)) + ")");
  }
  return FeaturePoint{{g(0) / g(2), g(1) / g(2)}, g(2)};
}

// Interleaved sin/cos values over geometric frequency bands; every (sin,
// cos) pair has unit square-sum.
using PositionalEmbedding = std::vector<double>;

// Standard sin-cos positional embedding. dim must be divisible by 4: each
// axis receives dim/4 (sin, cos) pairs at frequencies 10000^(2j / (dim/2)),
// x bands first, then y.
inline PositionalEmbedding sincos_embed_point(Vec2 coord, int dim) {
  if (dim < 4 || dim % 4 != 0) {
    throw ShapeError("sincos_embed: dim must be a positive multiple of 4");
  }
  const int bands = dim / 4;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(dim));
  for (double value : {coord.x, coord.y}) {
    for (int j = 0; j < bands; ++j) {
      const double freq =
          std::pow(10000.0, (2.0 * static_cast<double>(j)) / static_cast<double>(dim / 2));
      out.push_back(std::sin(value / freq));
      out.push_back(std::cos(value / freq));
    }
  }
  return out;
}

inline std::vector<PositionalEmbedding> sincos_embed(const std::vector<Vec2>& coords, int dim) {
  std::vector<PositionalEmbedding> out;
  out.reserve(coords.size());
  for (const Vec2& c : coords) out.push_back(sincos_embed_point(c, dim));
  return out;
}

}  // namespace bezmap
