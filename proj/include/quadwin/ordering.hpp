#pragma once

#include <algorithm>
#include <array>
#include <cstddef>

#include "quadwin/errors.hpp"
#include "quadwin/geometry.hpp"

namespace quadwin {

enum class Side { Bigger, Smaller, On };

inline Side middle_line_side(const Line& line, Point2 p) {
  const double v = line.evaluate(p);
  if (v > 0.0) return Side::Bigger;
  if (v < 0.0) return Side::Smaller;
  return Side::On;
}

namespace detail {

// Slope of the undirected line through two points as an extended real.
// Vertical lines compare above every finite slope. Comparison is exact
// (cross-multiplied) so no rounding enters the ordering decisions.
struct Slope {
  double dy = 0.0;
  double dx = 0.0;  // >= 0 after normalization; 0 means +infinity

  static Slope between(Point2 p, Point2 q) {
    double dx = q.x - p.x;
    double dy = q.y - p.y;
    if (dx < 0.0) {
      dx = -dx;
      dy = -dy;
    }
    return {dy, dx};
  }

  bool infinite() const { return dx == 0.0; }
};

// -1, 0, +1
inline int compare(const Slope& a, const Slope& b) {
  if (a.infinite() || b.infinite()) {
    return static_cast<int>(a.infinite()) - static_cast<int>(b.infinite());
  }
  const double lhs = a.dy * b.dx;
  const double rhs = b.dy * a.dx;
  return (lhs > rhs) - (lhs < rhs);
}

// Same sign convention as Line::through(from, to).evaluate(p), computed
// from differences so translation does not perturb it.
inline Side side_of(Point2 from, Point2 to, Point2 p) {
  const double v = cross(p - from, to - from);
  if (v > 0.0) return Side::Bigger;
  if (v < 0.0) return Side::Smaller;
  return Side::On;
}

inline bool lower_xy(Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

// Given first and third, seats the remaining two points as second (bigger
// side of the first->third line) and fourth (smaller side).
inline std::array<Point2, 4> seat(Point2 first, Point2 third, Point2 r0, Point2 r1) {
  const Side s0 = side_of(first, third, r0);
  const Side s1 = side_of(first, third, r1);
  if (s0 == Side::Bigger && s1 == Side::Smaller) return {first, r0, third, r1};
  if (s1 == Side::Bigger && s0 == Side::Smaller) return {first, r1, third, r0};
  throw DegenerateInput("points do not straddle the middle line");
}

}  // namespace detail

/// Relabels four unordered points of a strictly convex quad into the unique
/// sequence:
///   1. first = min x (ties: min y); third = endpoint of the middle-slope
///      line among the three lines leaving first;
///   2. second/fourth = bigger/smaller side of the first->third line;
///   3. between the diagonals 1-3 and 2-4, take the one with the bigger
///      signed slope (vertical counts as +inf); its smaller-x endpoint
///      (smaller y if vertical) becomes first, the other endpoint third,
///      and the remaining two are re-seated by the side test.
/// Throws DegenerateInput for coincident or collinear configurations.
inline ConvexQuad canonical_order(const std::array<Point2, 4>& pts) {
  for (std::size_t i = 0; i < 4; ++i) {
    if (!is_finite(pts[i])) throw DegenerateInput("point is not finite");
    for (std::size_t j = i + 1; j < 4; ++j) {
      if (pts[i] == pts[j]) throw DegenerateInput("coincident points");
    }
  }

  std::array<Point2, 4> p = pts;
  const auto first_it = std::min_element(p.begin(), p.end(), detail::lower_xy);
  std::iter_swap(p.begin(), first_it);
  const Point2 first = p[0];

  std::array<Point2, 3> rest{p[1], p[2], p[3]};
  auto slope_less = [&](Point2 a, Point2 b) {
    return detail::compare(detail::Slope::between(first, a), detail::Slope::between(first, b)) < 0;
  };
  std::sort(rest.begin(), rest.end(), slope_less);
  if (!slope_less(rest[0], rest[1]) || !slope_less(rest[1], rest[2])) {
    throw DegenerateInput("equal slopes from the first point");
  }

  const std::array<Point2, 4> initial = detail::seat(first, rest[1], rest[0], rest[2]);

  const detail::Slope diag13 = detail::Slope::between(initial[0], initial[2]);
  const detail::Slope diag24 = detail::Slope::between(initial[1], initial[3]);
  const int cmp = detail::compare(diag13, diag24);
  if (cmp == 0) throw DegenerateInput("parallel diagonals");

  const bool use13 = cmp > 0;
  Point2 a = use13 ? initial[0] : initial[1];
  Point2 b = use13 ? initial[2] : initial[3];
  const Point2 o0 = use13 ? initial[1] : initial[0];
  const Point2 o1 = use13 ? initial[3] : initial[2];
  const bool vertical = use13 ? diag13.infinite() : diag24.infinite();
  const bool swap_ends = vertical ? (b.y < a.y) : (b.x < a.x);
  if (swap_ends) std::swap(a, b);

  return ConvexQuad(detail::seat(a, b, o0, o1));
}

inline ConvexQuad canonical_order(const ConvexQuad& q) { return canonical_order(q.vertices()); }

}  // namespace quadwin
