#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <numbers>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "quadwin/errors.hpp"

namespace quadwin {

enum class LossKind { L2, SmoothL1, SmoothLn };

inline std::string_view to_string(LossKind k) {
  switch (k) {
    case LossKind::L2: return "l2";
    case LossKind::SmoothL1: return "smooth_l1";
    case LossKind::SmoothLn: return "smooth_ln";
  }
  return "?";
}

template <std::floating_point T>
constexpr T sign(T x) {
  return static_cast<T>((T(0) < x) - (x < T(0)));
}

// 0.5 x^2, the same coefficient smooth L1 uses inside the unit interval.
template <std::floating_point T>
constexpr T l2(T x) {
  return T(0.5) * x * x;
}

template <std::floating_point T>
constexpr T l2_deriv(T x) {
  return x;
}

template <std::floating_point T>
T smooth_l1(T x) {
  const T a = std::abs(x);
  return a < T(1) ? T(0.5) * x * x : a - T(0.5);
}

// At |x| == 1 this takes the outer branch, sign(x).
template <std::floating_point T>
T smooth_l1_deriv(T x) {
  return std::abs(x) < T(1) ? x : sign(x);
}

// (|x| + 1) ln(|x| + 1) - |x|
template <std::floating_point T>
T smooth_ln(T x) {
  const T a = std::abs(x);
  return (a + T(1)) * std::log1p(a) - a;
}

// sign(x) ln(|x| + 1)
template <std::floating_point T>
T smooth_ln_deriv(T x) {
  return sign(x) * std::log1p(std::abs(x));
}

template <std::floating_point T>
T pointwise_loss(LossKind kind, T x) {
  switch (kind) {
    case LossKind::L2: return l2(x);
    case LossKind::SmoothL1: return smooth_l1(x);
    case LossKind::SmoothLn: return smooth_ln(x);
  }
  return T(0);
}

template <std::floating_point T>
T pointwise_deriv(LossKind kind, T x) {
  switch (kind) {
    case LossKind::L2: return l2_deriv(x);
    case LossKind::SmoothL1: return smooth_l1_deriv(x);
    case LossKind::SmoothLn: return smooth_ln_deriv(x);
  }
  return T(0);
}

/// Sum of the pointwise loss over residuals weight * (p_i - p_star_i).
inline double lreg(std::span<const double> p, std::span<const double> p_star, LossKind kind,
                   double weight = 1.0) {
  if (p.size() != p_star.size()) {
    throw LengthMismatch("lreg operands differ in length: " + std::to_string(p.size()) + " vs " +
                         std::to_string(p_star.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    sum += pointwise_loss(kind, weight * (p[i] - p_star[i]));
  }
  return sum;
}

struct LossSample {
  double x = 0.0;
  double l2 = 0.0;
  double smooth_l1 = 0.0;
  double smooth_ln = 0.0;
  double l2_deriv = 0.0;
  double smooth_l1_deriv = 0.0;
  double smooth_ln_deriv = 0.0;
};

// Samples every loss and derivative on lo, lo + step, ..., hi.
inline std::vector<LossSample> loss_curve(double lo = -3.0, double hi = 3.0, double step = 0.01) {
  std::vector<LossSample> rows;
  if (!(step > 0.0) || hi < lo) return rows;
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = lo + static_cast<double>(i) * step;
    rows.push_back({x, l2(x), smooth_l1(x), smooth_ln(x), l2_deriv(x), smooth_l1_deriv(x),
                    smooth_ln_deriv(x)});
  }
  return rows;
}

struct PropertyCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace detail {

inline std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return g;
}

inline double max_adjacent_jump(const std::vector<double>& grid) {
  double worst = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    worst = std::max(worst, std::abs(smooth_ln_deriv(grid[i]) - smooth_ln_deriv(grid[i - 1])));
  }
  return worst;
}

}  // namespace detail

/// Machine-checkable forms of the robustness and stability comparison
/// between L2, smooth L1 and smooth Ln, evaluated on sampled grids.
inline std::vector<PropertyCheck> loss_table_check() {
  std::vector<PropertyCheck> out;
  const auto grid = detail::uniform_grid(-1000.0, 1000.0, 200001);

  {
    bool ok = true;
    for (double x : grid) ok = ok && std::abs(smooth_ln_deriv(x)) <= std::abs(x);
    out.push_back({"ln_deriv_bounded_by_x", ok, "|smooth_ln'(x)| <= |x| on [-1e3, 1e3]"});
  }
  {
    // ln(1 + |x|) only reaches 1 at |x| = e - 1; on [1, e - 1) it sits below smooth L1's 1.
    bool ok = true;
    const double crossover = std::numbers::e - 1.0;
    for (double x : grid) {
      if (std::abs(x) < 1.0) continue;
      const double d1 = std::abs(smooth_l1_deriv(x));
      const double dn = std::abs(smooth_ln_deriv(x));
      const double d2 = std::abs(l2_deriv(x));
      ok = ok && d1 == 1.0 && dn <= d2;
      if (std::abs(x) >= crossover) ok = ok && d1 <= dn;
    }
    out.push_back({"robustness_ordering", ok, "|l1'| = 1 <= |ln'| <= |l2'| for |x| >= e - 1"});
  }
  {
    bool ok = true;
    for (double x : grid) {
      if (x > 0.0) ok = ok && smooth_ln_deriv(x) < l2_deriv(x);
    }
    out.push_back({"ln_deriv_sublinear", ok, "ln(1 + x) < x for x in (0, 1e3]"});
  }
  {
    // ln'' = 1 / (1 + |x|) <= 1, so adjacent samples differ by at most the spacing.
    bool ok = true;
    double prev_jump = 0.0;
    std::string detail;
    for (std::size_t n : {2001u, 4001u, 8001u, 16001u}) {
      const double spacing = 20.0 / static_cast<double>(n - 1);
      const double jump = detail::max_adjacent_jump(detail::uniform_grid(-10.0, 10.0, n));
      ok = ok && jump <= 2.0 * spacing;
      if (prev_jump > 0.0) ok = ok && jump < prev_jump;
      prev_jump = jump;
      detail += "h=" + std::to_string(spacing) + " jump=" + std::to_string(jump) + "; ";
    }
    out.push_back({"ln_deriv_continuous", ok, detail});
  }
  {
    bool ok = true;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      ok = ok && smooth_ln_deriv(grid[i]) > smooth_ln_deriv(grid[i - 1]);
    }
    out.push_back({"ln_deriv_strictly_increasing", ok, "on [-1e3, 1e3]"});
  }
  {
    bool ok = true;
    const auto coarse = detail::uniform_grid(-50.0, 50.0, 1001);
    for (LossKind k : {LossKind::L2, LossKind::SmoothL1, LossKind::SmoothLn}) {
      for (std::size_t i = 0; i + 20 < coarse.size(); i += 3) {
        const double a = coarse[i];
        const double b = coarse[i + 20];
        const double mid = pointwise_loss(k, 0.5 * (a + b));
        const double chord = 0.5 * (pointwise_loss(k, a) + pointwise_loss(k, b));
        ok = ok && mid <= chord + 1e-12 * std::max(1.0, chord);
      }
    }
    out.push_back({"convexity", ok, "midpoint test for all three losses"});
  }
  {
    bool ok = true;
    for (double x : grid) {
      for (LossKind k : {LossKind::L2, LossKind::SmoothL1, LossKind::SmoothLn}) {
        ok = ok && pointwise_loss(k, -x) == pointwise_loss(k, x);
        ok = ok && pointwise_deriv(k, -x) == -pointwise_deriv(k, x);
      }
    }
    out.push_back({"parity", ok, "losses even, derivatives odd"});
  }
  return out;
}

}  // namespace quadwin
