#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "quadwin/geometry.hpp"
#include "quadwin/ordering.hpp"
#include "quadwin/overlap.hpp"
#include "quadwin/priors.hpp"
#include "quadwin/random.hpp"

namespace quadwin {

struct MatchConfig {
  double threshold = 0.5;
  // mode must be IoU or OverlapOverGT
  OverlapConfig overlap{OverlapMode::IoU, OverlapMethod::ExactClip};

  void validate() const {
    if (!(threshold > 0.0) || threshold > 1.0) throw std::invalid_argument("match threshold must be in (0, 1]");
    if (overlap.mode == OverlapMode::OverlapArea) {
      throw std::invalid_argument("matching needs a normalized overlap mode (iou or overlap_over_gt)");
    }
  }
};

struct MatchResult {
  std::vector<std::optional<std::size_t>> best_prior;  // per GT; empty when there are no priors
  std::vector<double> best_value;                      // per GT
  std::vector<std::optional<std::size_t>> prior_gt;    // per prior; set when Positive
  std::size_t matched = 0;
  double recall_at_threshold = 0.0;
};

/// A prior is Positive for the GT it overlaps most, provided that value
/// reaches the threshold (ties go to the lower GT index). Each GT also
/// records its best prior even when below threshold; a GT counts as
/// matched when that best value reaches the threshold.
inline MatchResult match(std::span<const ConvexQuad> gts, std::span<const ConvexQuad> priors,
                         const MatchConfig& cfg) {
  cfg.validate();
  MatchResult r;
  r.best_prior.assign(gts.size(), std::nullopt);
  r.best_value.assign(gts.size(), 0.0);
  r.prior_gt.assign(priors.size(), std::nullopt);
  if (gts.empty()) return r;

  std::vector<double> label_value(priors.size(), 0.0);
  const PreparedQuads pg(gts);
  const PreparedQuads pp(priors);
  for_each_overlap_row(pg, pp, cfg.overlap, [&](std::size_t g, std::span<const double> row) {
    for (std::size_t p = 0; p < row.size(); ++p) {
      const double v = row[p];
      if (!r.best_prior[g] || v > r.best_value[g]) {
        r.best_prior[g] = p;
        r.best_value[g] = v;
      }
      if (v >= cfg.threshold && (!r.prior_gt[p] || v > label_value[p])) {
        r.prior_gt[p] = g;
        label_value[p] = v;
      }
    }
  });
  for (std::size_t g = 0; g < gts.size(); ++g) {
    if (r.best_prior[g] && r.best_value[g] >= cfg.threshold) ++r.matched;
  }
  r.recall_at_threshold = static_cast<double>(r.matched) / static_cast<double>(gts.size());
  return r;
}

struct ScoredQuad {
  ConvexQuad quad;
  double score = 0.0;
};

inline double exact_iou(const ConvexQuad& a, const ConvexQuad& b) {
  if (!rects_intersect(circumscribed_rect(a), circumscribed_rect(b))) return 0.0;
  return iou(exact_overlap(a, b), a.area(), b.area());
}

/// Greedy NMS with exact quad IoU. Returns indices of kept candidates in
/// descending score order; equal scores keep input order.
inline std::vector<std::size_t> quad_nms(std::span<const ScoredQuad> candidates, double iou_threshold) {
  for (const auto& c : candidates) {
    if (!std::isfinite(c.score)) throw std::invalid_argument("nms scores must be finite");
  }
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return candidates[a].score > candidates[b].score; });
  std::vector<std::size_t> kept;
  for (std::size_t i : order) {
    const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](std::size_t k) {
      return exact_iou(candidates[i].quad, candidates[k].quad) > iou_threshold;
    });
    if (!suppressed) kept.push_back(i);
  }
  return kept;
}

struct Prf {
  double recall = 0.0;
  double precision = 0.0;
  double hmean = 0.0;
};

inline Prf prf(std::size_t matched_gts, std::size_t total_gts, std::size_t true_positive_preds,
               std::size_t total_preds) {
  if (matched_gts > total_gts || true_positive_preds > total_preds) {
    throw std::invalid_argument("matched counts exceed totals");
  }
  Prf out;
  if (total_gts > 0) out.recall = static_cast<double>(matched_gts) / static_cast<double>(total_gts);
  if (total_preds > 0) out.precision = static_cast<double>(true_positive_preds) / static_cast<double>(total_preds);
  const double sum = out.recall + out.precision;
  out.hmean = sum > 0.0 ? 2.0 * out.precision * out.recall / sum : 0.0;
  return out;
}

// Synthetic word-like quads: rotated rectangles with per-vertex jitter.
struct SynthSpec {
  std::size_t count = 1000;
  double aspect_min = 2.0;
  double aspect_max = 8.0;
  double rotation_min_deg = -45.0;
  double rotation_max_deg = 45.0;
  bool random_sign = false;  // mirror the sampled rotation with probability 1/2
  double scale_min = 0.05;   // sqrt(w*h) as a fraction of min(image_w, image_h)
  double scale_max = 0.3;
  double jitter = 0.1;  // per-vertex displacement bound, fraction of box height
  double image_w = 800.0;
  double image_h = 800.0;
  std::uint64_t seed = 1;

  void validate() const {
    if (!(aspect_min > 0.0) || aspect_max < aspect_min) throw std::invalid_argument("bad aspect range");
    if (rotation_max_deg < rotation_min_deg) throw std::invalid_argument("bad rotation range");
    if (!(scale_min > 0.0) || scale_max < scale_min) throw std::invalid_argument("bad scale range");
    if (!(jitter >= 0.0)) throw std::invalid_argument("jitter must be non-negative");
    if (!(image_w > 0.0) || !(image_h > 0.0)) throw std::invalid_argument("image size must be positive");
  }
};

/// Deterministic in `spec.seed`. Candidates that fail the convexity or
/// area check are redrawn.
inline std::vector<ConvexQuad> synth_text_quads(const SynthSpec& spec) {
  spec.validate();
  const CounterRng rng(spec.seed);
  std::uint64_t counter = 0;
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(counter++); };

  std::vector<ConvexQuad> out;
  out.reserve(spec.count);
  const double side_ref = std::min(spec.image_w, spec.image_h);
  constexpr int kMaxAttempts = 10000;
  for (std::size_t i = 0; i < spec.count; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
      const double aspect = uniform(spec.aspect_min, spec.aspect_max);
      const double side = uniform(spec.scale_min, spec.scale_max) * side_ref;
      const double w = side * std::sqrt(aspect);
      const double h = side / std::sqrt(aspect);
      double deg = uniform(spec.rotation_min_deg, spec.rotation_max_deg);
      if (spec.random_sign && uniform(0.0, 1.0) < 0.5) deg = -deg;
      const double th = deg * std::numbers::pi / 180.0;
      const double c = std::cos(th);
      const double s = std::sin(th);

      const double ext_x = 0.5 * (std::abs(w * c) + std::abs(h * s));
      const double ext_y = 0.5 * (std::abs(w * s) + std::abs(h * c));
      const double cx = ext_x * 2.0 < spec.image_w ? uniform(ext_x, spec.image_w - ext_x) : 0.5 * spec.image_w;
      const double cy = ext_y * 2.0 < spec.image_h ? uniform(ext_y, spec.image_h - ext_y) : 0.5 * spec.image_h;

      const std::array<Point2, 4> local{{{-0.5 * w, -0.5 * h}, {0.5 * w, -0.5 * h}, {0.5 * w, 0.5 * h}, {-0.5 * w, 0.5 * h}}};
      std::array<Point2, 4> v;
      for (std::size_t k = 0; k < 4; ++k) {
        double jx = 0.0;
        double jy = 0.0;
        if (spec.jitter > 0.0) {
          jx = uniform(-spec.jitter, spec.jitter) * h;
          jy = uniform(-spec.jitter, spec.jitter) * h;
        }
        v[k] = {cx + local[k].x * c - local[k].y * s + jx, cy + local[k].x * s + local[k].y * c + jy};
      }
      if (!is_convex(v)) continue;
      try {
        out.push_back(canonical_order(v));
        placed = true;
      } catch (const DegenerateInput&) {
      }
    }
    if (!placed) throw std::runtime_error("synthetic quad generation kept failing; check the synthetic ranges");
  }
  return out;
}

/// Strictly convex quad with vertices at sorted random angles around
/// `center`, radii in [radius/2, radius]. Redraws until the quad fills at
/// least `min_fill` of its circumscribed rect. `counter` advances.
inline ConvexQuad random_convex_quad(const CounterRng& rng, std::uint64_t& counter, Point2 center, double radius,
                                     double min_fill = 0.1) {
  while (true) {
    std::array<double, 4> angles;
    for (auto& a : angles) a = 2.0 * std::numbers::pi * rng.uniform(counter++);
    std::sort(angles.begin(), angles.end());
    std::array<Point2, 4> v;
    for (std::size_t k = 0; k < 4; ++k) {
      const double r = radius * (0.5 + 0.5 * rng.uniform(counter++));
      v[k] = {center.x + r * std::cos(angles[k]), center.y + r * std::sin(angles[k])};
    }
    if (!is_convex(v)) continue;
    const double area = polygon_area(v);
    if (area <= kAreaEpsilon || area < min_fill * bounding_rect(v).area()) continue;
    try {
      return canonical_order(v);
    } catch (const DegenerateInput&) {
    }
  }
}

struct RecallRow {
  double threshold = 0.0;
  double recall_quad = 0.0;
  double recall_horizontal = 0.0;
  double mean_best_iou_quad = 0.0;
  double mean_best_iou_horizontal = 0.0;
};

struct RecallComparison {
  std::vector<double> best_quad;        // per GT, best value over the full prior set
  std::vector<double> best_horizontal;  // per GT, best over horizontal priors only
  double mean_best_quad = 0.0;
  double mean_best_horizontal = 0.0;
  std::vector<RecallRow> rows;
};

inline std::vector<double> default_thresholds() {
  std::vector<double> t;
  for (int i = 1; i <= 9; ++i) t.push_back(static_cast<double>(i) / 10.0);
  return t;
}

/// Compares the full prior set against its horizontal-only subset: best
/// overlap per GT, their means, and recall at each threshold.
inline RecallComparison compare_prior_sets(std::span<const ConvexQuad> gts, std::span<const PriorWindow> priors,
                                           const OverlapConfig& overlap,
                                           std::span<const double> thresholds) {
  std::vector<ConvexQuad> all;
  std::vector<ConvexQuad> horizontal;
  all.reserve(priors.size());
  for (const auto& p : priors) {
    all.push_back(p.quad);
    if (p.family == Family::Horizontal) horizontal.push_back(p.quad);
  }
  MatchConfig cfg;
  cfg.overlap = overlap;
  RecallComparison cmp;
  cmp.best_quad = match(gts, all, cfg).best_value;
  cmp.best_horizontal = match(gts, horizontal, cfg).best_value;

  auto mean = [](const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  };
  auto recall = [&](const std::vector<double>& v, double t) {
    if (v.empty()) return 0.0;
    const auto hits = std::count_if(v.begin(), v.end(), [t](double x) { return x >= t; });
    return static_cast<double>(hits) / static_cast<double>(v.size());
  };
  cmp.mean_best_quad = mean(cmp.best_quad);
  cmp.mean_best_horizontal = mean(cmp.best_horizontal);
  for (double t : thresholds) {
    cmp.rows.push_back({t, recall(cmp.best_quad, t), recall(cmp.best_horizontal, t), cmp.mean_best_quad,
                        cmp.mean_best_horizontal});
  }
  return cmp;
}

}  // namespace quadwin
