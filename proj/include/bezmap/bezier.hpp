#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "bezmap/errors.hpp"
#include "bezmap/vec2.hpp"

namespace bezmap {

// Exact for n <= 56; curve degrees here stay in single digits.
inline double binomial(int n, int i) {
  if (i < 0 || i > n) return 0.0;
  if (i > n - i) i = n - i;
  double r = 1.0;
  for (int k = 1; k <= i; ++k) r = r * static_cast<double>(n - i + k) / static_cast<double>(k);
  return r;
}

// b_{i,n}(t) = C(n,i) t^i (1-t)^(n-i) on t in [0,1].
inline double bernstein_basis(int i, int n, double t) {
  if (n < 0 || i < 0 || i > n) {
    throw DomainError("bernstein_basis: index " + std::to_string(i) +
                      " outside [0, " + std::to_string(n) + "]");
  }
  if (!(t >= 0.0 && t <= 1.0)) {
    throw DomainError("bernstein_basis: t=" + std::to_string(t) + " outside [0,1]");
  }
  return binomial(n, i) * std::pow(t, i) * std::pow(1.0 - t, n - i);
}

// Sampling matrix of the Bernstein basis at m uniform parameters together
// with its Moore-Penrose pseudo-inverse. Row r holds the basis values at
// t = r/(m-1), so row 0 is (1,0,...,0) and row m-1 is (0,...,0,1).
struct BernsteinMatrix {
  int degree{0};
  int samples{0};
  Eigen::MatrixXd forward;  // samples x (degree+1)
  Eigen::MatrixXd pinv;     // (degree+1) x samples
};

namespace detail {

// Bernstein sampling matrices grow ill-conditioned with degree; the
// pseudo-inverse goes through a full SVD rather than normal equations.
inline Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double tol = std::numeric_limits<double>::epsilon() *
                     static_cast<double>(std::max(a.rows(), a.cols())) *
                     (sv.size() > 0 ? sv(0) : 0.0);
  Eigen::VectorXd inv = sv;
  for (Eigen::Index i = 0; i < inv.size(); ++i) inv(i) = sv(i) > tol ? 1.0 / sv(i) : 0.0;
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

}  // namespace detail

inline BernsteinMatrix bernstein_matrix(int degree, int samples) {
  if (degree < 0) throw DomainError("bernstein_matrix: negative degree");
  if (samples < degree + 1) {
    throw UnderdeterminedError("bernstein_matrix: " + std::to_string(samples) +
                               " samples underdetermine degree " + std::to_string(degree));
  }
  BernsteinMatrix bm;
  bm.degree = degree;
  bm.samples = samples;
  bm.forward.resize(samples, degree + 1);
  for (int r = 0; r < samples; ++r) {
    const double t = samples == 1 ? 0.0 : static_cast<double>(r) / static_cast<double>(samples - 1);
    for (int i = 0; i <= degree; ++i) bm.forward(r, i) = bernstein_basis(i, degree, t);
  }
  bm.pinv = detail::pseudo_inverse(bm.forward);
  return bm;
}

// One Bezier segment of degree n >= 1 with n+1 finite control points.
class BezierSegment {
 public:
  explicit BezierSegment(std::vector<Vec2> controls) : controls_(std::move(controls)) {
    if (controls_.size() < 2) {
      throw ShapeError("BezierSegment: needs at least 2 control points");
    }
    for (const Vec2& c : controls_) {
      if (!is_finite(c)) throw DomainError("BezierSegment: non-finite control point");
    }
  }

  int degree() const { return static_cast<int>(controls_.size()) - 1; }
  const std::vector<Vec2>& controls() const { return controls_; }
  Vec2 control(int i) const { return controls_.at(static_cast<std::size_t>(i)); }

  friend bool operator==(const BezierSegment& a, const BezierSegment& b) {
    return a.controls_ == b.controls_;
  }

 private:
  std::vector<Vec2> controls_;
};

// Piecewise Bezier curve <k,n>: k segments of equal degree n joined with
// positional continuity. Control points are stored flat with each joint
// held once, so adjacent segments share joints exactly by construction.
// Flat size is n*k+1; segment j reads controls [j*n, j*n+n].
class PiecewiseBezier {
 public:
  PiecewiseBezier(int degree, std::vector<Vec2> controls, int class_id = -1)
      : degree_(degree), controls_(std::move(controls)), class_id_(class_id) {
    if (degree_ < 1) throw DomainError("PiecewiseBezier: degree must be >= 1");
    const std::size_t n = static_cast<std::size_t>(degree_);
    if (controls_.size() < n + 1 || (controls_.size() - 1) % n != 0) {
      throw ShapeError("PiecewiseBezier: control count " + std::to_string(controls_.size()) +
                       " is not n*k+1 for degree " + std::to_string(degree_));
    }
    for (const Vec2& c : controls_) {
      if (!is_finite(c)) throw DomainError("PiecewiseBezier: non-finite control point");
    }
  }

  static PiecewiseBezier from_segments(const std::vector<BezierSegment>& segments,
                                       int class_id = -1) {
    if (segments.empty()) throw ShapeError("PiecewiseBezier: needs at least one segment");
    const int n = segments.front().degree();
    std::vector<Vec2> flat;
    flat.reserve(segments.size() * static_cast<std::size_t>(n) + 1);
    flat.push_back(segments.front().controls().front());
    for (std::size_t j = 0; j < segments.size(); ++j) {
      const BezierSegment& seg = segments[j];
      if (seg.degree() != n) {
        throw ShapeError("PiecewiseBezier: segment degrees differ (" + std::to_string(n) +
                         " vs " + std::to_string(seg.degree()) + ")");
      }
      if (!(seg.controls().front() == flat.back())) {
        throw ShapeError("PiecewiseBezier: segments " + std::to_string(j - 1) + " and " +
                         std::to_string(j) + " do not share their joint exactly");
      }
      for (int i = 1; i <= n; ++i) flat.push_back(seg.control(i));
    }
    return PiecewiseBezier(n, std::move(flat), class_id);
  }

  int degree() const { return degree_; }
  int piece_count() const {
    return static_cast<int>((controls_.size() - 1) / static_cast<std::size_t>(degree_));
  }
  int class_id() const { return class_id_; }
  const std::vector<Vec2>& controls() const { return controls_; }

  BezierSegment segment(int j) const {
    if (j < 0 || j >= piece_count()) {
      throw DomainError("PiecewiseBezier: segment index out of range");
    }
    const std::size_t n = static_cast<std::size_t>(degree_);
    const std::size_t base = static_cast<std::size_t>(j) * n;
    return BezierSegment(std::vector<Vec2>(controls_.begin() + static_cast<std::ptrdiff_t>(base),
                                           controls_.begin() + static_cast<std::ptrdiff_t>(base + n + 1)));
  }

  std::vector<BezierSegment> segments() const {
    std::vector<BezierSegment> out;
    out.reserve(static_cast<std::size_t>(piece_count()));
    for (int j = 0; j < piece_count(); ++j) out.push_back(segment(j));
    return out;
  }

  // Joints and endpoints: k+1 points that lie on the curve.
  std::vector<Vec2> explicit_points() const {
    std::vector<Vec2> out;
    out.reserve(static_cast<std::size_t>(piece_count()) + 1);
    for (std::size_t i = 0; i < controls_.size(); i += static_cast<std::size_t>(degree_)) {
      out.push_back(controls_[i]);
    }
    return out;
  }

  // Interior control points: n*k - k points shaping the segments.
  std::vector<Vec2> implicit_points() const {
    std::vector<Vec2> out;
    out.reserve(controls_.size() - static_cast<std::size_t>(piece_count()) - 1);
    for (std::size_t i = 0; i < controls_.size(); ++i) {
      if (i % static_cast<std::size_t>(degree_) != 0) out.push_back(controls_[i]);
    }
    return out;
  }

  friend bool operator==(const PiecewiseBezier& a, const PiecewiseBezier& b) {
    return a.degree_ == b.degree_ && a.class_id_ == b.class_id_ && a.controls_ == b.controls_;
  }

 private:
  int degree_;
  std::vector<Vec2> controls_;
  int class_id_;
};

// p(t) = sum_i b_{i,n}(t) c_i. Interpolates the endpoints exactly.
inline Vec2 eval_bezier(const BezierSegment& seg, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw DomainError("eval_bezier: t=" + std::to_string(t) + " outside [0,1]");
  }
  const int n = seg.degree();
  Vec2 p{0.0, 0.0};
  for (int i = 0; i <= n; ++i) p += bernstein_basis(i, n, t) * seg.control(i);
  return p;
}

// Samples every segment at m uniform parameters and concatenates the rows,
// keeping the first occurrence of each duplicated joint. Output length is
// k*(m-1)+1 and its ends equal the first/last explicit points exactly.
inline std::vector<Vec2> restore_curve(const PiecewiseBezier& pb, int m_per_segment) {
  if (m_per_segment < 2) throw DomainError("restore_curve: m_per_segment must be >= 2");
  const BernsteinMatrix bm = bernstein_matrix(pb.degree(), m_per_segment);
  const int n = pb.degree();
  const int k = pb.piece_count();
  const std::vector<Vec2>& flat = pb.controls();
  std::vector<Vec2> out;
  out.reserve(static_cast<std::size_t>(k) * static_cast<std::size_t>(m_per_segment - 1) + 1);
  for (int j = 0; j < k; ++j) {
    const std::size_t base = static_cast<std::size_t>(j) * static_cast<std::size_t>(n);
    for (int r = (j == 0 ? 0 : 1); r < m_per_segment; ++r) {
      Vec2 p{0.0, 0.0};
      for (int i = 0; i <= n; ++i) p += bm.forward(r, i) * flat[base + static_cast<std::size_t>(i)];
      out.push_back(p);
    }
  }
  return out;
}

// Least-squares construction C = B+ P against uniform parameters, reusing a
// precomputed Bernstein matrix.
inline BezierSegment fit_segment(const std::vector<Vec2>& points, const BernsteinMatrix& bm) {
  if (static_cast<int>(points.size()) != bm.samples) {
    throw ShapeError("fit_segment: point count " + std::to_string(points.size()) +
                     " does not match matrix with " + std::to_string(bm.samples) + " samples");
  }
  Eigen::MatrixXd p(points.size(), 2);
  for (std::size_t r = 0; r < points.size(); ++r) {
    p(static_cast<Eigen::Index>(r), 0) = points[r].x;
    p(static_cast<Eigen::Index>(r), 1) = points[r].y;
  }
  const Eigen::MatrixXd c = bm.pinv * p;
  std::vector<Vec2> controls(static_cast<std::size_t>(bm.degree) + 1);
  for (int i = 0; i <= bm.degree; ++i) controls[static_cast<std::size_t>(i)] = {c(i, 0), c(i, 1)};
  return BezierSegment(std::move(controls));
}

inline BezierSegment fit_segment(const std::vector<Vec2>& points, int degree) {
  if (static_cast<int>(points.size()) < degree + 1) {
    throw UnderdeterminedError("fit_segment: " + std::to_string(points.size()) +
                               " points underdetermine degree " + std::to_string(degree));
  }
  return fit_segment(points, bernstein_matrix(degree, static_cast<int>(points.size())));
}

// Exact re-expression as degree n+1: c'_i = (i/(n+1)) c_{i-1} + (1 - i/(n+1)) c_i.
inline BezierSegment degree_elevate(const BezierSegment& seg) {
  const int n = seg.degree();
  std::vector<Vec2> out(static_cast<std::size_t>(n) + 2);
  out.front() = seg.control(0);
  out.back() = seg.control(n);
  for (int i = 1; i <= n; ++i) {
    const double a = static_cast<double>(i) / static_cast<double>(n + 1);
    out[static_cast<std::size_t>(i)] = a * seg.control(i - 1) + (1.0 - a) * seg.control(i);
  }
  return BezierSegment(std::move(out));
}

// Compact storage form: joints plus per-segment displacements of the
// interior controls from the midpoint of that segment's two joints.
struct OffsetEncoding {
  std::vector<Vec2> explicit_points;          // k+1
  std::vector<std::vector<Vec2>> offsets;     // k lists of n-1 displacements
};

inline OffsetEncoding encode_offsets(const PiecewiseBezier& pb) {
  OffsetEncoding enc;
  enc.explicit_points = pb.explicit_points();
  const int n = pb.degree();
  const int k = pb.piece_count();
  enc.offsets.resize(static_cast<std::size_t>(k));
  const std::vector<Vec2>& flat = pb.controls();
  for (int j = 0; j < k; ++j) {
    const std::size_t base = static_cast<std::size_t>(j) * static_cast<std::size_t>(n);
    const Vec2 center = midpoint(flat[base], flat[base + static_cast<std::size_t>(n)]);
    auto& list = enc.offsets[static_cast<std::size_t>(j)];
    list.reserve(static_cast<std::size_t>(n) - 1);
    for (int i = 1; i < n; ++i) list.push_back(flat[base + static_cast<std::size_t>(i)] - center);
  }
  return enc;
}

inline PiecewiseBezier decode_offsets(const OffsetEncoding& enc, int degree, int class_id = -1) {
  if (degree < 1) throw DomainError("decode_offsets: degree must be >= 1");
  if (enc.explicit_points.size() < 2) {
    throw ShapeError("decode_offsets: needs at least 2 explicit points");
  }
  const std::size_t k = enc.explicit_points.size() - 1;
  if (enc.offsets.size() != k) {
    throw ShapeError("decode_offsets: " + std::to_string(enc.offsets.size()) +
                     " offset lists for " + std::to_string(k) + " segments");
  }
  std::vector<Vec2> flat;
  flat.reserve(k * static_cast<std::size_t>(degree) + 1);
  for (std::size_t j = 0; j < k; ++j) {
    const auto& list = enc.offsets[j];
    if (static_cast<int>(list.size()) != degree - 1) {
      throw ShapeError("decode_offsets: segment " + std::to_string(j) + " has " +
                       std::to_string(list.size()) + " offsets, expected " +
                       std::to_string(degree - 1));
    }
    flat.push_back(enc.explicit_points[j]);
    const Vec2 center = midpoint(enc.explicit_points[j], enc.explicit_points[j + 1]);
    for (const Vec2& d : list) flat.push_back(center + d);
  }
  flat.push_back(enc.explicit_points.back());
  return PiecewiseBezier(degree, std::move(flat), class_id);
}

}  // namespace bezmap
