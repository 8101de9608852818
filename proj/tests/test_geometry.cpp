#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <random>
#include <vector>

#include "quadwin/geometry.hpp"
#include "test_support.hpp"

using namespace quadwin;
using quadwin::testing::rect_quad;
using quadwin::testing::square;
using quadwin::testing::unit_square;

namespace {

const std::vector<Point2> kUnitSquare{{0, 0}, {1, 0}, {1, 1}, {0, 1}};

}  // namespace

TEST(PolygonArea, UnitSquare) { EXPECT_DOUBLE_EQ(polygon_area(kUnitSquare), 1.0); }

TEST(PolygonArea, Empty) { EXPECT_EQ(polygon_area(Polygon{}), 0.0); }

TEST(PolygonArea, RightTriangle) {
  // half base times height: 0.5 * 2 * 2
  const std::vector<Point2> tri{{0, 0}, {2, 0}, {0, 2}};
  EXPECT_DOUBLE_EQ(polygon_area(tri), 2.0);
}

TEST(PolygonArea, OrientationDoesNotMatter) {
  std::vector<Point2> rev(kUnitSquare.rbegin(), kUnitSquare.rend());
  EXPECT_DOUBLE_EQ(polygon_area(rev), 1.0);
  EXPECT_DOUBLE_EQ(signed_area(rev), -signed_area(kUnitSquare));
}

TEST(PointInPolygon, Basic) {
  EXPECT_TRUE(point_in_polygon({0.5, 0.5}, kUnitSquare));
  EXPECT_FALSE(point_in_polygon({1.5, 0.5}, kUnitSquare));
}

TEST(PointInPolygon, BoundaryCountsAsInside) {
  EXPECT_TRUE(point_in_polygon({0.0, 0.5}, kUnitSquare));
  EXPECT_TRUE(point_in_polygon({1.0, 0.5}, kUnitSquare));
  EXPECT_TRUE(point_in_polygon({0.5, 1.0}, kUnitSquare));
  EXPECT_TRUE(point_in_polygon({1.0, 1.0}, kUnitSquare));
  EXPECT_FALSE(point_in_polygon({1.0 + 1e-12, 0.5}, kUnitSquare));
}

TEST(PointInPolygon, AgreesWithWindingNumberOffBoundary) {
  std::mt19937_64 rng(7);
  int checked = 0;
  while (checked < 10000) {
    const auto quad = quadwin::testing::random_convex_points(rng);
    const Point2 p{quadwin::testing::uniform(rng, -12, 12), quadwin::testing::uniform(rng, -12, 12)};
    double dmin = 1e300;
    for (int i = 0; i < 4; ++i) dmin = std::min(dmin, quadwin::testing::distance_to_segment(p, quad[i], quad[(i + 1) % 4]));
    if (dmin < 1e-9) continue;
    const bool expected = quadwin::testing::winding_number(p, quad) != 0;
    ASSERT_EQ(point_in_polygon(p, quad), expected) << "point (" << p.x << ", " << p.y << ")";
    ++checked;
  }
}

TEST(IsConvex, Cases) {
  EXPECT_TRUE(is_convex(std::array<Point2, 4>{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}}));
  EXPECT_FALSE(is_convex(std::array<Point2, 4>{{{0, 0}, {1, 1}, {1, 0}, {0, 1}}}));  // bowtie
  EXPECT_FALSE(is_convex(std::array<Point2, 4>{{{0, 0}, {1, 0}, {2, 0}, {0, 1}}}));  // collinear
  EXPECT_FALSE(is_convex(std::array<Point2, 4>{{{0, 0}, {4, 0}, {1, 1}, {0, 4}}}));  // reflex vertex
}

TEST(IsConvex, InvariantUnderRotationAndReversal) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    std::array<Point2, 4> v;
    for (auto& p : v) p = {quadwin::testing::uniform(rng, 0, 1), quadwin::testing::uniform(rng, 0, 1)};
    const bool base = is_convex(v);
    for (int r = 0; r < 4; ++r) {
      std::array<Point2, 4> rot = v;
      std::rotate(rot.begin(), rot.begin() + r, rot.end());
      ASSERT_EQ(is_convex(rot), base);
      std::array<Point2, 4> rev = rot;
      std::reverse(rev.begin(), rev.end());
      ASSERT_EQ(is_convex(rev), base);
    }
  }
}

TEST(ConvexQuad, RejectsDegenerate) {
  EXPECT_THROW(ConvexQuad({{{0, 0}, {1, 1}, {1, 0}, {0, 1}}}), DegenerateInput);
  EXPECT_THROW(ConvexQuad({{{0, 0}, {1e-6, 0}, {1e-6, 1e-6}, {0, 1e-6}}}), DegenerateInput);
  EXPECT_THROW(ConvexQuad({{{0, 0}, {1, 0}, {1, std::nan("")}, {0, 1}}}), DegenerateInput);
}

TEST(CircumscribedRect, Cases) {
  EXPECT_EQ(circumscribed_rect(unit_square()), (AxisRect{0, 0, 1, 1}));
  const ConvexQuad diamond({{{1, 0}, {2, 1}, {1, 2}, {0, 1}}});
  EXPECT_EQ(circumscribed_rect(diamond), (AxisRect{0, 0, 2, 2}));
}

TEST(CircumscribedRect, ThinQuadIsNotClamped) {
  const ConvexQuad thin({{{0, 0}, {1000, 0}, {1000, 1e-8}, {0, 1e-8}}}, 0.0);
  const AxisRect r = circumscribed_rect(thin);
  EXPECT_EQ(r.height(), 1e-8);
}

TEST(CircumscribedRect, ContainsAndTouchesEverySide) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 1000; ++t) {
    const ConvexQuad q(quadwin::testing::random_convex_points(rng));
    const AxisRect r = circumscribed_rect(q);
    bool left = false, right = false, top = false, bottom = false;
    for (const auto& v : q.vertices()) {
      ASSERT_TRUE(r.contains(v));
      left = left || v.x == r.x_min;
      right = right || v.x == r.x_max;
      top = top || v.y == r.y_min;
      bottom = bottom || v.y == r.y_max;
    }
    ASSERT_TRUE(left && right && top && bottom);
  }
}

TEST(ClipConvex, Identity) { EXPECT_NEAR(clip_convex(unit_square(), unit_square()).area(), 1.0, 1e-12); }

TEST(ClipConvex, ShiftedSquares) {
  EXPECT_NEAR(clip_convex(unit_square(), square(0.5, 0, 1)).area(), 0.5, 1e-12);
}

TEST(ClipConvex, Disjoint) { EXPECT_TRUE(clip_convex(unit_square(), square(10, 10, 1)).empty()); }

TEST(ClipConvex, EdgeContactHasZeroArea) {
  EXPECT_NEAR(clip_convex(unit_square(), square(1, 0, 1)).area(), 0.0, 1e-15);
}

TEST(ClipConvex, MixedOrientation) {
  const ConvexQuad ccw({{{0, 0}, {0, 1}, {1, 1}, {1, 0}}});
  EXPECT_NEAR(clip_convex(ccw, square(0.5, 0.5, 1)).area(), 0.25, 1e-12);
  EXPECT_NEAR(clip_convex(square(0.5, 0.5, 1), ccw).area(), 0.25, 1e-12);
}

TEST(ClipConvex, DiamondInSquare) {
  const ConvexQuad diamond({{{1, 0}, {2, 1}, {1, 2}, {0, 1}}});
  EXPECT_NEAR(clip_convex(diamond, rect_quad(0, 0, 2, 2)).area(), 2.0, 1e-12);
  // The unit square [0,1]^2 keeps the triangle below the edge (1,0)-(0,1) out.
  EXPECT_NEAR(clip_convex(diamond, unit_square()).area(), 0.5, 1e-12);
}

TEST(ClipConvex, AreaBoundedAndSymmetric) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 5000; ++t) {
    const ConvexQuad a(quadwin::testing::random_convex_points(rng, {0, 0}, 10));
    const ConvexQuad b(quadwin::testing::random_convex_points(rng, {quadwin::testing::uniform(rng, -8, 8), 0}, 10));
    const double ab = clip_convex(a, b).area();
    const double ba = clip_convex(b, a).area();
    const double scale = std::max(a.area(), b.area());
    ASSERT_LE(ab, std::min(a.area(), b.area()) * (1 + 1e-12));
    ASSERT_LE(std::abs(ab - ba), 1e-9 * scale);
  }
}

TEST(RectsIntersect, Cases) {
  EXPECT_TRUE(rects_intersect({0, 0, 1, 1}, {0.5, 0.5, 2, 2}));
  EXPECT_FALSE(rects_intersect({0, 0, 1, 1}, {2, 2, 3, 3}));
  EXPECT_TRUE(rects_intersect({0, 0, 1, 1}, {1, 0, 2, 1}));
}

TEST(Line, ThroughMatchesImplicitForm) {
  const Line l = Line::through({0, 0}, {1, 1});
  EXPECT_DOUBLE_EQ(l.evaluate({1, 0}), 1.0);
  EXPECT_DOUBLE_EQ(l.evaluate({0, 1}), -1.0);
  EXPECT_DOUBLE_EQ(l.evaluate({2, 2}), 0.0);
  EXPECT_TRUE(l.valid());
}
