#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "bezmap/bezier.hpp"

namespace bezmap {
namespace {

std::mt19937 rng(42);

double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::vector<Vec2> random_controls(int degree, double scale = 10.0) {
  std::vector<Vec2> c(static_cast<std::size_t>(degree) + 1);
  for (auto& p : c) p = {uniform(-scale, scale), uniform(-scale, scale)};
  return c;
}

// Independent pointwise evaluation of Eq.-style weighted sums, written
// directly against the closed form rather than through eval_bezier.
Vec2 direct_weighted_sum(const std::vector<Vec2>& controls, double t) {
  const int n = static_cast<int>(controls.size()) - 1;
  Vec2 acc{0, 0};
  for (int i = 0; i <= n; ++i) {
    acc += binomial(n, i) * std::pow(t, i) * std::pow(1 - t, n - i) *
           controls[static_cast<std::size_t>(i)];
  }
  return acc;
}

// ---------------------------------------------------------------------------
// bernstein_basis
// ---------------------------------------------------------------------------

TEST(BernsteinBasis, DegreeZeroIsConstantOne) {
  EXPECT_DOUBLE_EQ(bernstein_basis(0, 0, 0.7), 1.0);
}

TEST(BernsteinBasis, SymmetricQuadraticMidTerm) {
  EXPECT_DOUBLE_EQ(bernstein_basis(1, 2, 0.5), 0.5);
}

TEST(BernsteinBasis, ClosedFormArithmetic) {
  // C(3,2) * 0.3^2 * 0.7 = 3 * 0.09 * 0.7 = 0.189, computed independently.
  EXPECT_NEAR(bernstein_basis(2, 3, 0.3), 0.189, 1e-15);
}

TEST(BernsteinBasis, DomainErrors) {
  EXPECT_THROW(bernstein_basis(-1, 2, 0.5), DomainError);
  EXPECT_THROW(bernstein_basis(3, 2, 0.5), DomainError);
  EXPECT_THROW(bernstein_basis(0, 2, -0.1), DomainError);
  EXPECT_THROW(bernstein_basis(0, 2, 1.1), DomainError);
}

TEST(BernsteinBasis, PartitionOfUnity) {
  for (int n = 0; n <= 10; ++n) {
    for (int s = 0; s < 1000; ++s) {
      const double t = static_cast<double>(s) / 999.0;
      double sum = 0.0;
      for (int i = 0; i <= n; ++i) sum += bernstein_basis(i, n, t);
      ASSERT_LE(std::abs(sum - 1.0), 1e-12) << "n=" << n << " t=" << t;
    }
  }
}

// ---------------------------------------------------------------------------
// bernstein_matrix
// ---------------------------------------------------------------------------

TEST(BernsteinMatrix, EndpointsOnlyIsIdentity) {
  const BernsteinMatrix bm = bernstein_matrix(1, 2);
  EXPECT_DOUBLE_EQ(bm.forward(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(bm.forward(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(bm.forward(1, 0), 0.0);
  EXPECT_DOUBLE_EQ(bm.forward(1, 1), 1.0);
}

TEST(BernsteinMatrix, QuadraticMiddleRow) {
  const BernsteinMatrix bm = bernstein_matrix(2, 3);
  EXPECT_DOUBLE_EQ(bm.forward(1, 0), 0.25);
  EXPECT_DOUBLE_EQ(bm.forward(1, 1), 0.5);
  EXPECT_DOUBLE_EQ(bm.forward(1, 2), 0.25);
}

TEST(BernsteinMatrix, PinvTimesForwardIsIdentity) {
  const BernsteinMatrix bm = bernstein_matrix(3, 100);
  const Eigen::MatrixXd prod = bm.pinv * bm.forward;
  EXPECT_LE((prod - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(BernsteinMatrix, PseudoInverseProperty) {
  for (int n : {1, 2, 3, 5}) {
    const BernsteinMatrix bm = bernstein_matrix(n, 40);
    const Eigen::MatrixXd bpb = bm.forward * bm.pinv * bm.forward;
    EXPECT_LE((bpb - bm.forward).cwiseAbs().maxCoeff(), 1e-9) << "n=" << n;
  }
}

TEST(BernsteinMatrix, RowsSumToOne) {
  const BernsteinMatrix bm = bernstein_matrix(4, 25);
  for (int r = 0; r < bm.samples; ++r) {
    EXPECT_LE(std::abs(bm.forward.row(r).sum() - 1.0), 1e-12);
  }
}

TEST(BernsteinMatrix, UnderdeterminedRejected) {
  EXPECT_THROW(bernstein_matrix(3, 3), UnderdeterminedError);
}

// ---------------------------------------------------------------------------
// eval_bezier
// ---------------------------------------------------------------------------

TEST(EvalBezier, LineMidpoint) {
  const BezierSegment line({{0, 0}, {2, 2}});
  const Vec2 p = eval_bezier(line, 0.5);
  EXPECT_DOUBLE_EQ(p.x, 1.0);
  EXPECT_DOUBLE_EQ(p.y, 1.0);
}

TEST(EvalBezier, EndpointInterpolationExact) {
  for (int n : {1, 2, 3, 4, 5}) {
    const BezierSegment seg(random_controls(n));
    EXPECT_EQ(eval_bezier(seg, 0.0), seg.controls().front());
    EXPECT_EQ(eval_bezier(seg, 1.0), seg.controls().back());
  }
}

TEST(EvalBezier, QuadraticAtHalf) {
  // 0.25*c0 + 0.5*c1 + 0.25*c2 = (1, 1) for (0,0),(1,2),(2,0).
  const BezierSegment q({{0, 0}, {1, 2}, {2, 0}});
  const Vec2 p = eval_bezier(q, 0.5);
  EXPECT_NEAR(p.x, 1.0, 1e-15);
  EXPECT_NEAR(p.y, 1.0, 1e-15);
}

TEST(EvalBezier, RejectsOutOfDomain) {
  const BezierSegment line({{0, 0}, {1, 1}});
  EXPECT_THROW(eval_bezier(line, -0.01), DomainError);
  EXPECT_THROW(eval_bezier(line, 1.01), DomainError);
}

TEST(EvalBezier, ReversalSymmetry) {
  for (int rep = 0; rep < 20; ++rep) {
    const auto controls = random_controls(3);
    auto reversed = controls;
    std::reverse(reversed.begin(), reversed.end());
    const BezierSegment a(controls), b(reversed);
    for (double t : {0.0, 0.125, 0.37, 0.5, 0.81, 1.0}) {
      const Vec2 pa = eval_bezier(a, t);
      const Vec2 pb = eval_bezier(b, 1.0 - t);
      EXPECT_NEAR(pa.x, pb.x, 1e-12);
      EXPECT_NEAR(pa.y, pb.y, 1e-12);
    }
  }
}

TEST(EvalBezier, AffineEquivariance) {
  const double m00 = 1.3, m01 = -0.4, m10 = 0.7, m11 = 2.1, bx = 3.0, by = -1.5;
  auto affine = [&](Vec2 p) {
    return Vec2{m00 * p.x + m01 * p.y + bx, m10 * p.x + m11 * p.y + by};
  };
  for (int rep = 0; rep < 20; ++rep) {
    const auto controls = random_controls(4);
    std::vector<Vec2> mapped;
    for (Vec2 c : controls) mapped.push_back(affine(c));
    const BezierSegment seg(controls), mapped_seg(mapped);
    for (double t : {0.0, 0.2, 0.55, 0.9, 1.0}) {
      const Vec2 lhs = eval_bezier(mapped_seg, t);
      const Vec2 rhs = affine(eval_bezier(seg, t));
      EXPECT_NEAR(lhs.x, rhs.x, 1e-12);
      EXPECT_NEAR(lhs.y, rhs.y, 1e-12);
    }
  }
}

// ---------------------------------------------------------------------------
// PiecewiseBezier structure
// ---------------------------------------------------------------------------

TEST(PiecewiseBezierType, PointCounts) {
  // <3,3>: 10 flat controls, 4 explicit, 6 implicit.
  std::vector<Vec2> flat;
  for (int i = 0; i < 10; ++i) flat.push_back({static_cast<double>(i), 0.0});
  const PiecewiseBezier pb(3, flat, 2);
  EXPECT_EQ(pb.piece_count(), 3);
  EXPECT_EQ(pb.explicit_points().size(), 4u);
  EXPECT_EQ(pb.implicit_points().size(), 6u);
  EXPECT_EQ(pb.class_id(), 2);
}

TEST(PiecewiseBezierType, SegmentsShareJointsExactly) {
  std::vector<Vec2> flat;
  for (int i = 0; i < 7; ++i) flat.push_back({uniform(-5, 5), uniform(-5, 5)});
  const PiecewiseBezier pb(2, flat);
  for (int j = 0; j + 1 < pb.piece_count(); ++j) {
    EXPECT_EQ(pb.segment(j).controls().back(), pb.segment(j + 1).controls().front());
  }
}

TEST(PiecewiseBezierType, FromSegmentsValidatesContinuity) {
  const BezierSegment a({{0, 0}, {1, 0}, {2, 0}});
  const BezierSegment b({{2, 0}, {3, 0}, {4, 0}});
  const BezierSegment broken({{2.0000001, 0}, {3, 0}, {4, 0}});
  EXPECT_EQ(PiecewiseBezier::from_segments({a, b}).piece_count(), 2);
  EXPECT_THROW(PiecewiseBezier::from_segments({a, broken}), ShapeError);
}

TEST(PiecewiseBezierType, RejectsBadShapes) {
  EXPECT_THROW(PiecewiseBezier(2, {{0, 0}, {1, 1}}, 0), ShapeError);  // 2 != 2k+1
  EXPECT_THROW(PiecewiseBezier(0, {{0, 0}, {1, 1}}, 0), DomainError);
  const double nan = std::nan("");
  EXPECT_THROW(PiecewiseBezier(1, {{0, 0}, {nan, 1}}, 0), DomainError);
}

// ---------------------------------------------------------------------------
// restore_curve
// ---------------------------------------------------------------------------

TEST(RestoreCurve, SingleLinearSegment) {
  const PiecewiseBezier pb(1, {{0, 0}, {1, 0}});
  const auto pts = restore_curve(pb, 3);
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_EQ(pts[0], (Vec2{0, 0}));
  EXPECT_NEAR(pts[1].x, 0.5, 1e-15);
  EXPECT_EQ(pts[2], (Vec2{1, 0}));
}

TEST(RestoreCurve, JointsDeduplicated) {
  // 2-piece linear L-shape with m=2 gives exactly the 3 corners.
  const PiecewiseBezier pb(1, {{0, 0}, {1, 0}, {1, 1}});
  const auto pts = restore_curve(pb, 2);
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_EQ(pts[0], (Vec2{0, 0}));
  EXPECT_EQ(pts[1], (Vec2{1, 0}));
  EXPECT_EQ(pts[2], (Vec2{1, 1}));
}

TEST(RestoreCurve, MatchesPointwiseEvaluation) {
  std::vector<Vec2> flat;
  for (int i = 0; i < 10; ++i) flat.push_back({uniform(-10, 10), uniform(-10, 10)});
  const PiecewiseBezier pb(3, flat);
  const int m = 100;
  const auto pts = restore_curve(pb, m);
  ASSERT_EQ(pts.size(), static_cast<std::size_t>(3 * (m - 1) + 1));
  for (int j = 0; j < 3; ++j) {
    for (int r = 0; r < m; ++r) {
      const double t = static_cast<double>(r) / (m - 1);
      const Vec2 expected = direct_weighted_sum(pb.segment(j).controls(), t);
      const Vec2 got = pts[static_cast<std::size_t>(j * (m - 1) + r)];
      ASSERT_NEAR(got.x, expected.x, 1e-12);
      ASSERT_NEAR(got.y, expected.y, 1e-12);
    }
  }
}

TEST(RestoreCurve, EndsEqualExplicitPoints) {
  std::vector<Vec2> flat;
  for (int i = 0; i < 7; ++i) flat.push_back({uniform(-10, 10), uniform(-10, 10)});
  const PiecewiseBezier pb(3, flat);
  const auto pts = restore_curve(pb, 17);
  EXPECT_EQ(pts.front(), pb.explicit_points().front());
  EXPECT_EQ(pts.back(), pb.explicit_points().back());
}

// ---------------------------------------------------------------------------
// fit_segment
// ---------------------------------------------------------------------------

TEST(FitSegment, TwoPointsLinearIsExact) {
  const BezierSegment seg = fit_segment({{1, 2}, {3, 4}}, 1);
  EXPECT_NEAR(seg.control(0).x, 1.0, 1e-12);
  EXPECT_NEAR(seg.control(0).y, 2.0, 1e-12);
  EXPECT_NEAR(seg.control(1).x, 3.0, 1e-12);
  EXPECT_NEAR(seg.control(1).y, 4.0, 1e-12);
}

TEST(FitSegment, RecoversKnownCubicFromUniformSamples) {
  const std::vector<Vec2> truth = {{0, 0}, {3, 4}, {7, -2}, {10, 1}};
  const PiecewiseBezier source(3, truth);
  const auto samples = restore_curve(source, 100);
  const BezierSegment fitted = fit_segment(samples, 3);
  for (int i = 0; i <= 3; ++i) {
    EXPECT_NEAR(fitted.control(i).x, truth[static_cast<std::size_t>(i)].x, 1e-6);
    EXPECT_NEAR(fitted.control(i).y, truth[static_cast<std::size_t>(i)].y, 1e-6);
  }
}

double fit_residual(const std::vector<Vec2>& points, const std::vector<Vec2>& controls) {
  const int m = static_cast<int>(points.size());
  double sum = 0.0;
  for (int r = 0; r < m; ++r) {
    const double t = static_cast<double>(r) / (m - 1);
    const Vec2 diff = direct_weighted_sum(controls, t) - points[static_cast<std::size_t>(r)];
    sum += squared_norm(diff);
  }
  return sum;
}

TEST(FitSegment, NoisyFitBeatsPerturbationGrid) {
  // The fitted controls must sit at a local minimum of the residual: no
  // single-coordinate perturbation on a small grid may do better.
  std::vector<Vec2> noisy;
  for (int r = 0; r < 60; ++r) {
    const double t = static_cast<double>(r) / 59.0;
    noisy.push_back({10 * t + uniform(-0.05, 0.05),
                     3 * t * (1 - t) + uniform(-0.05, 0.05)});
  }
  const BezierSegment fitted = fit_segment(noisy, 2);
  const double best = fit_residual(noisy, fitted.controls());
  for (std::size_t c = 0; c < fitted.controls().size(); ++c) {
    for (double step : {-0.02, -0.002, 0.002, 0.02}) {
      for (int axis = 0; axis < 2; ++axis) {
        auto perturbed = fitted.controls();
        if (axis == 0) {
          perturbed[c].x += step;
        } else {
          perturbed[c].y += step;
        }
        EXPECT_GE(fit_residual(noisy, perturbed), best - 1e-12);
      }
    }
  }
}

TEST(FitSegment, UnderdeterminedRejected) {
  EXPECT_THROW(fit_segment({{0, 0}, {1, 1}, {2, 2}}, 3), UnderdeterminedError);
}

TEST(FitSegment, FitRestoreRoundTrip) {
  for (int n : {1, 2, 3, 4}) {
    const BezierSegment truth(random_controls(n));
    const auto samples = restore_curve(PiecewiseBezier(n, truth.controls()), 100);
    const BezierSegment fitted = fit_segment(samples, n);
    for (int i = 0; i <= n; ++i) {
      ASSERT_NEAR(fitted.control(i).x, truth.control(i).x, 1e-6) << "n=" << n;
      ASSERT_NEAR(fitted.control(i).y, truth.control(i).y, 1e-6) << "n=" << n;
    }
  }
}

// ---------------------------------------------------------------------------
// degree_elevate
// ---------------------------------------------------------------------------

TEST(DegreeElevate, LineBecomesQuadraticWithMidpoint) {
  const BezierSegment line({{0, 0}, {1, 1}});
  const BezierSegment up = degree_elevate(line);
  ASSERT_EQ(up.degree(), 2);
  EXPECT_EQ(up.control(0), (Vec2{0, 0}));
  EXPECT_NEAR(up.control(1).x, 0.5, 1e-15);
  EXPECT_NEAR(up.control(1).y, 0.5, 1e-15);
  EXPECT_EQ(up.control(2), (Vec2{1, 1}));
}

TEST(DegreeElevate, ShapeInvariance) {
  for (int n : {1, 2, 3, 4, 5}) {
    const BezierSegment seg(random_controls(n));
    const BezierSegment up = degree_elevate(seg);
    for (int s = 0; s < 1000; ++s) {
      const double t = static_cast<double>(s) / 999.0;
      const Vec2 a = eval_bezier(seg, t);
      const Vec2 b = eval_bezier(up, t);
      ASSERT_LE(std::abs(a.x - b.x), 1e-12);
      ASSERT_LE(std::abs(a.y - b.y), 1e-12);
    }
  }
}

TEST(DegreeElevate, DoubleElevationOfQuadratic) {
  const BezierSegment q(random_controls(2));
  const BezierSegment up2 = degree_elevate(degree_elevate(q));
  ASSERT_EQ(up2.degree(), 4);
  for (int s = 0; s <= 200; ++s) {
    const double t = static_cast<double>(s) / 200.0;
    const Vec2 a = eval_bezier(q, t);
    const Vec2 b = eval_bezier(up2, t);
    ASSERT_LE(std::abs(a.x - b.x), 1e-12);
    ASSERT_LE(std::abs(a.y - b.y), 1e-12);
  }
}

// ---------------------------------------------------------------------------
// offset encoding
// ---------------------------------------------------------------------------

TEST(OffsetEncoding, DegreeOneHasNoOffsets) {
  const PiecewiseBezier pb(1, {{0, 0}, {1, 0}, {2, 1}});
  const OffsetEncoding enc = encode_offsets(pb);
  ASSERT_EQ(enc.offsets.size(), 2u);
  EXPECT_TRUE(enc.offsets[0].empty());
  EXPECT_TRUE(enc.offsets[1].empty());
}

TEST(OffsetEncoding, MidpointArithmetic) {
  // Implicit (1,3) around center (1,0) encodes as offset (0,3).
  const PiecewiseBezier pb(2, {{0, 0}, {1, 3}, {2, 0}});
  const OffsetEncoding enc = encode_offsets(pb);
  ASSERT_EQ(enc.offsets.size(), 1u);
  ASSERT_EQ(enc.offsets[0].size(), 1u);
  EXPECT_DOUBLE_EQ(enc.offsets[0][0].x, 0.0);
  EXPECT_DOUBLE_EQ(enc.offsets[0][0].y, 3.0);
}

TEST(OffsetEncoding, RoundTripIdentity) {
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 1 + rep % 4;
    const int k = 1 + rep % 5;
    std::vector<Vec2> flat;
    for (int i = 0; i < n * k + 1; ++i) flat.push_back({uniform(-20, 20), uniform(-20, 20)});
    const PiecewiseBezier pb(n, flat, rep % 3);
    const PiecewiseBezier back = decode_offsets(encode_offsets(pb), n, rep % 3);
    ASSERT_EQ(back.controls().size(), pb.controls().size());
    for (std::size_t i = 0; i < flat.size(); ++i) {
      ASSERT_NEAR(back.controls()[i].x, pb.controls()[i].x, 1e-12);
      ASSERT_NEAR(back.controls()[i].y, pb.controls()[i].y, 1e-12);
    }
  }
}

TEST(OffsetEncoding, ZeroOffsetsCollinearExplicitStayCollinear) {
  OffsetEncoding enc;
  enc.explicit_points = {{0, 0}, {2, 2}, {4, 4}};
  enc.offsets = {{{0, 0}, {0, 0}}, {{0, 0}, {0, 0}}};
  const PiecewiseBezier pb = decode_offsets(enc, 3);
  for (const Vec2& c : pb.controls()) EXPECT_DOUBLE_EQ(c.y, c.x);
}

TEST(OffsetEncoding, LinearDecodePassesThroughExplicitPoints) {
  OffsetEncoding enc;
  enc.explicit_points = {{0, 0}, {1, 5}, {3, 2}, {4, 4}};
  enc.offsets = {{}, {}, {}};
  const PiecewiseBezier pb = decode_offsets(enc, 1);
  EXPECT_EQ(pb.controls(), enc.explicit_points);
}

TEST(OffsetEncoding, CountMismatchRejected) {
  OffsetEncoding enc;
  enc.explicit_points = {{0, 0}, {1, 0}};
  enc.offsets = {{{0, 1}}};  // one offset but degree 3 needs two
  EXPECT_THROW(decode_offsets(enc, 3), ShapeError);
  enc.offsets = {{{0, 1}, {0, 2}}, {{0, 1}, {0, 2}}};  // extra segment list
  EXPECT_THROW(decode_offsets(enc, 3), ShapeError);
}

TEST(OffsetEncoding, DecodeEncodeIdentityExact) {
  OffsetEncoding enc;
  enc.explicit_points = {{0, 0}, {4, 2}};
  enc.offsets = {{{0.5, 1.25}, {-0.75, 0.5}}};
  const PiecewiseBezier pb = decode_offsets(enc, 3);
  const OffsetEncoding back = encode_offsets(pb);
  ASSERT_EQ(back.explicit_points.size(), enc.explicit_points.size());
  for (std::size_t i = 0; i < enc.explicit_points.size(); ++i) {
    EXPECT_NEAR(back.explicit_points[i].x, enc.explicit_points[i].x, 1e-12);
    EXPECT_NEAR(back.explicit_points[i].y, enc.explicit_points[i].y, 1e-12);
  }
  for (std::size_t j = 0; j < enc.offsets.size(); ++j) {
    for (std::size_t i = 0; i < enc.offsets[j].size(); ++i) {
      EXPECT_NEAR(back.offsets[j][i].x, enc.offsets[j][i].x, 1e-12);
      EXPECT_NEAR(back.offsets[j][i].y, enc.offsets[j][i].y, 1e-12);
    }
  }
}

}  // namespace
}  // namespace bezmap
