#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "quadwin/errors.hpp"

namespace quadwin {

// Shapes with area below this (square units) are treated as degenerate.
inline constexpr double kAreaEpsilon = 1e-9;

// Image-style frame: x grows right, y grows down.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
  friend constexpr bool operator==(Point2 a, Point2 b) = default;
};

inline constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }

inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

struct AxisRect {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  constexpr double width() const { return x_max - x_min; }
  constexpr double height() const { return y_max - y_min; }
  constexpr double area() const { return width() * height(); }
  constexpr Point2 center() const { return {0.5 * (x_min + x_max), 0.5 * (y_min + y_max)}; }
  constexpr bool contains(Point2 p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
  constexpr bool contains(const AxisRect& o) const {
    return o.x_min >= x_min && o.x_max <= x_max && o.y_min >= y_min && o.y_max <= y_max;
  }
  friend constexpr bool operator==(const AxisRect&, const AxisRect&) = default;
};

// ax + by + c = 0
struct Line {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  // Directed from `from` toward `to`; evaluate(p) is positive when p lies
  // clockwise of that direction in the y-up sense, i.e. (p - from) x (to - from) > 0.
  static constexpr Line through(Point2 from, Point2 to) {
    const double a = to.y - from.y;
    const double b = -(to.x - from.x);
    return {a, b, -(a * from.x + b * from.y)};
  }

  constexpr double evaluate(Point2 p) const { return a * p.x + b * p.y + c; }
  constexpr bool valid() const { return a != 0.0 || b != 0.0; }
};

/// Signed shoelace area; positive when the vertex order turns left in the
/// y-up sense (which reads clockwise on screen in image coordinates).
inline double signed_area(std::span<const Point2> pts) {
  const std::size_t n = pts.size();
  if (n < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    twice += cross(pts[i], pts[(i + 1) % n]);
  }
  return 0.5 * twice;
}

inline double polygon_area(std::span<const Point2> pts) { return std::abs(signed_area(pts)); }

/// True when the four points, taken in the given cyclic order, form a
/// strictly convex quad: every turn is nonzero and all turns share one sign.
inline bool is_convex(std::span<const Point2, 4> v) {
  int positive = 0;
  int negative = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    const Point2 e0 = v[(i + 1) % 4] - v[i];
    const Point2 e1 = v[(i + 2) % 4] - v[(i + 1) % 4];
    const double turn = cross(e0, e1);
    if (turn > 0.0) {
      ++positive;
    } else if (turn < 0.0) {
      ++negative;
    } else {
      return false;
    }
  }
  return positive == 4 || negative == 4;
}

inline bool is_convex(const std::array<Point2, 4>& v) { return is_convex(std::span<const Point2, 4>(v)); }

class ConvexQuad {
 public:
  /// Throws DegenerateInput unless the vertices are finite, strictly convex
  /// in the given order, and enclose more than `min_area`.
  explicit ConvexQuad(const std::array<Point2, 4>& vertices, double min_area = kAreaEpsilon)
      : v_(vertices) {
    for (const auto& p : v_) {
      if (!is_finite(p)) throw DegenerateInput("quad vertex is not finite");
    }
    if (!is_convex(v_)) throw DegenerateInput("quad is not strictly convex");
    if (polygon_area(v_) <= min_area) throw DegenerateInput("quad area is below epsilon");
  }

  const std::array<Point2, 4>& vertices() const { return v_; }
  const Point2& operator[](std::size_t i) const { return v_[i]; }
  std::span<const Point2, 4> span() const { return std::span<const Point2, 4>(v_); }

  double area() const { return polygon_area(v_); }
  double signed_area() const { return quadwin::signed_area(v_); }

  friend bool operator==(const ConvexQuad&, const ConvexQuad&) = default;

 private:
  std::array<Point2, 4> v_;
};

// Intersection results; empty denotes no overlap.
struct Polygon {
  std::vector<Point2> vertices;

  bool empty() const { return vertices.size() < 3; }
  double area() const { return polygon_area(vertices); }
};

inline double polygon_area(const Polygon& p) { return polygon_area(p.vertices); }

namespace detail {

inline bool on_segment(Point2 p, Point2 a, Point2 b) {
  if (cross(b - a, p - a) != 0.0) return false;
  return p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) && p.y >= std::min(a.y, b.y) &&
         p.y <= std::max(a.y, b.y);
}

}  // namespace detail

/// Even-odd (crossing number) test. Points exactly on an edge count as inside.
inline bool point_in_polygon(Point2 pt, std::span<const Point2> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2 a = poly[i];
    const Point2 b = poly[j];
    if (detail::on_segment(pt, a, b)) return true;
    if ((a.y > pt.y) != (b.y > pt.y)) {
      const double x_cross = a.x + (pt.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (pt.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

inline bool point_in_polygon(Point2 pt, const ConvexQuad& q) { return point_in_polygon(pt, q.span()); }
inline bool point_in_polygon(Point2 pt, const Polygon& p) { return point_in_polygon(pt, p.vertices); }

inline AxisRect bounding_rect(std::span<const Point2> pts) {
  AxisRect r{pts[0].x, pts[0].y, pts[0].x, pts[0].y};
  for (const auto& p : pts.subspan(1)) {
    r.x_min = std::min(r.x_min, p.x);
    r.y_min = std::min(r.y_min, p.y);
    r.x_max = std::max(r.x_max, p.x);
    r.y_max = std::max(r.y_max, p.y);
  }
  return r;
}

// Minimum circumscribed horizontal rectangle.
inline AxisRect circumscribed_rect(const ConvexQuad& q) { return bounding_rect(q.span()); }

// Closed-interval test: touching edges count as intersecting.
inline constexpr bool rects_intersect(const AxisRect& a, const AxisRect& b) {
  return a.x_min <= b.x_max && b.x_min <= a.x_max && a.y_min <= b.y_max && b.y_min <= a.y_max;
}

/// Sutherland-Hodgman: clips `subject` against each edge half-plane of
/// `clip`. Works for either vertex orientation of either operand.
inline Polygon clip_convex(const ConvexQuad& subject, const ConvexQuad& clip) {
  std::vector<Point2> out(subject.vertices().begin(), subject.vertices().end());
  std::vector<Point2> in;
  in.reserve(8);
  out.reserve(8);
  const double orient = clip.signed_area() > 0.0 ? 1.0 : -1.0;

  for (std::size_t e = 0; e < 4 && !out.empty(); ++e) {
    const Point2 c0 = clip[e];
    const Point2 dir = clip[(e + 1) % 4] - c0;
    in.swap(out);
    out.clear();
    const std::size_t n = in.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point2 cur = in[i];
      const Point2 prev = in[(i + n - 1) % n];
      const double d_cur = orient * cross(dir, cur - c0);
      const double d_prev = orient * cross(dir, prev - c0);
      if (d_cur >= 0.0) {
        if (d_prev < 0.0) {
          const double t = d_prev / (d_prev - d_cur);
          out.push_back(prev + t * (cur - prev));
        }
        out.push_back(cur);
      } else if (d_prev >= 0.0) {
        const double t = d_prev / (d_prev - d_cur);
        out.push_back(prev + t * (cur - prev));
      }
    }
  }

  // Collapse repeated vertices produced by contact along an edge or corner.
  std::vector<Point2> cleaned;
  cleaned.reserve(out.size());
  for (const auto& p : out) {
    if (cleaned.empty() || !(cleaned.back() == p)) cleaned.push_back(p);
  }
  while (cleaned.size() > 1 && cleaned.front() == cleaned.back()) cleaned.pop_back();
  if (cleaned.size() < 3) cleaned.clear();
  return Polygon{std::move(cleaned)};
}

}  // namespace quadwin
