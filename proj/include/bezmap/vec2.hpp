#pragma once

#include <cmath>
#include <vector>

namespace bezmap {

// 2D point/vector in ego-frame meters. x is longitudinal (front positive),
// y is lateral (left positive).
struct Vec2 {
  double x{0.0};
  double y{0.0};
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
inline Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
inline Vec2& operator+=(Vec2& a, Vec2 b) { a = a + b; return a; }
inline bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }
inline bool operator!=(Vec2 a, Vec2 b) { return !(a == b); }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double squared_norm(Vec2 a) { return a.x * a.x + a.y * a.y; }
inline double norm(Vec2 a) { return std::sqrt(squared_norm(a)); }
inline double l1_norm(Vec2 a) { return std::abs(a.x) + std::abs(a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }
inline double squared_distance(Vec2 a, Vec2 b) { return squared_norm(a - b); }
inline bool is_finite(Vec2 a) { return std::isfinite(a.x) && std::isfinite(a.y); }
inline Vec2 lerp(Vec2 a, Vec2 b, double t) { return (1.0 - t) * a + t * b; }
inline Vec2 midpoint(Vec2 a, Vec2 b) { return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; }

// Real-valued position on the BEV raster lattice. row grows toward the
// right side of the vehicle (negative y), col grows forward (positive x).
struct PixelCoord {
  double row{0.0};
  double col{0.0};
};

inline bool operator==(PixelCoord a, PixelCoord b) {
  return a.row == b.row && a.col == b.col;
}

}  // namespace bezmap
