#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <thread>
#include <vector>

#include "quadwin/errors.hpp"
#include "quadwin/geometry.hpp"
#include "quadwin/random.hpp"

namespace quadwin {

enum class SamplingStrategy { UniformRandom, StratifiedJittered };

// Points sampled once in a ground truth's circumscribed rectangle. Only the
// points inside the ground truth are kept; every window tested against this
// ground truth reuses them.
struct SampleSet {
  ConvexQuad owner;
  AxisRect rect;
  std::size_t total = 0;  // points actually drawn in `rect`
  std::uint64_t seed = 0;
  SamplingStrategy strategy = SamplingStrategy::StratifiedJittered;
  std::vector<Point2> inside_points;

  // Sampled estimate of the owner's area.
  double s_gt_estimate() const {
    return static_cast<double>(inside_points.size()) / static_cast<double>(total) * rect.area();
  }
};

// Stratified sampling draws one point per cell of a k x k grid with
// k = ceil(sqrt(requested)), so the effective total is k*k.
inline std::size_t effective_total(std::size_t requested, SamplingStrategy strategy) {
  if (strategy == SamplingStrategy::UniformRandom) return requested;
  const std::size_t k = ceil_sqrt(requested);
  return k * k;
}

inline SampleSet build_sample_set(const ConvexQuad& gt, std::size_t total, std::uint64_t seed,
                                  SamplingStrategy strategy = SamplingStrategy::StratifiedJittered) {
  if (total < 1) throw std::invalid_argument("sample total must be at least 1");
  const AxisRect rect = circumscribed_rect(gt);
  SampleSet ss{gt, rect, effective_total(total, strategy), seed, strategy, {}};
  const CounterRng rng(seed);
  const double w = rect.width();
  const double h = rect.height();

  auto keep = [&](Point2 p) {
    if (point_in_polygon(p, gt)) ss.inside_points.push_back(p);
  };

  if (strategy == SamplingStrategy::UniformRandom) {
    for (std::size_t i = 0; i < total; ++i) {
      keep({rect.x_min + rng.uniform(2 * i) * w, rect.y_min + rng.uniform(2 * i + 1) * h});
    }
  } else {
    const std::size_t k = ceil_sqrt(total);
    const double kd = static_cast<double>(k);
    for (std::size_t row = 0; row < k; ++row) {
      for (std::size_t col = 0; col < k; ++col) {
        const std::size_t cell = row * k + col;
        const double u = (static_cast<double>(col) + rng.uniform(2 * cell)) / kd;
        const double v = (static_cast<double>(row) + rng.uniform(2 * cell + 1)) / kd;
        keep({rect.x_min + u * w, rect.y_min + v * h});
      }
    }
  }
  return ss;
}

/// Shared-sample overlap estimate. Returns exactly 0 without touching the
/// samples when the circumscribed rectangles are disjoint.
inline double mc_overlap(const SampleSet& ss, const ConvexQuad& window, const AxisRect& window_rect) {
  if (!rects_intersect(ss.rect, window_rect)) return 0.0;
  std::size_t count = 0;
  for (const Point2& p : ss.inside_points) {
    if (window_rect.contains(p) && point_in_polygon(p, window)) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(ss.total) * ss.rect.area();
}

inline double mc_overlap(const SampleSet& ss, const ConvexQuad& window) {
  return mc_overlap(ss, window, circumscribed_rect(window));
}

inline double exact_overlap(const ConvexQuad& a, const ConvexQuad& b) {
  return polygon_area(clip_convex(a, b));
}

// Binomial standard error of a shared-sample overlap estimate whose true
// value is `exact` within a sampling rectangle of area `rect_area`.
inline double binomial_sigma(double exact, double rect_area, std::size_t total) {
  const double p = std::clamp(exact / rect_area, 0.0, 1.0);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(total)) * rect_area;
}

inline double iou(double overlap, double area_a, double area_b) {
  if (!(area_a > 0.0) || !(area_b > 0.0)) throw InvalidArea("iou requires positive areas");
  const double uni = area_a + area_b - overlap;
  if (!(uni > 0.0)) return 1.0;
  return std::clamp(overlap / uni, 0.0, 1.0);
}

enum class OverlapMode { OverlapArea, IoU, OverlapOverGT };
enum class OverlapMethod { MonteCarlo, ExactClip };

struct OverlapConfig {
  OverlapMode mode = OverlapMode::IoU;
  OverlapMethod method = OverlapMethod::MonteCarlo;
  std::size_t total = 10000;
  std::uint64_t seed = 0;
  SamplingStrategy strategy = SamplingStrategy::StratifiedJittered;
  unsigned workers = 1;
};

struct OverlapMatrix {
  std::size_t gt_count = 0;
  std::size_t prior_count = 0;
  std::vector<double> values;  // row-major, gt x prior
  OverlapMode mode = OverlapMode::IoU;
  OverlapMethod method = OverlapMethod::MonteCarlo;
  std::size_t total = 0;  // effective sample count; 0 for ExactClip
  std::uint64_t seed = 0;

  double at(std::size_t gt, std::size_t prior) const { return values[gt * prior_count + prior]; }
  std::span<const double> row(std::size_t gt) const {
    return std::span<const double>(values).subspan(gt * prior_count, prior_count);
  }
};

inline std::string_view to_string(OverlapMode m) {
  switch (m) {
    case OverlapMode::OverlapArea: return "area";
    case OverlapMode::IoU: return "iou";
    case OverlapMode::OverlapOverGT: return "overlap_over_gt";
  }
  return "?";
}

inline std::string_view to_string(OverlapMethod m) {
  return m == OverlapMethod::MonteCarlo ? "mc" : "exact";
}

// Seed of the sample set built for ground truth `gt_index` in a batch.
inline std::uint64_t sample_seed(std::uint64_t base_seed, std::size_t gt_index) {
  return CounterRng(base_seed).bits(gt_index);
}

// Quads with their circumscribed rects and exact areas cached.
struct PreparedQuads {
  std::vector<ConvexQuad> quads;
  std::vector<AxisRect> rects;
  std::vector<double> areas;

  PreparedQuads() = default;
  explicit PreparedQuads(std::span<const ConvexQuad> qs) : quads(qs.begin(), qs.end()) {
    rects.reserve(quads.size());
    areas.reserve(quads.size());
    for (const auto& q : quads) {
      rects.push_back(circumscribed_rect(q));
      areas.push_back(q.area());
    }
  }

  std::size_t size() const { return quads.size(); }
};

namespace detail {

inline double finish_value(OverlapMode mode, double overlap, double gt_area, double prior_area) {
  switch (mode) {
    case OverlapMode::OverlapArea: return overlap;
    case OverlapMode::IoU: return iou(overlap, gt_area, prior_area);
    case OverlapMode::OverlapOverGT:
      if (!(gt_area > 0.0)) throw InvalidArea("ground truth area must be positive");
      return std::clamp(overlap / gt_area, 0.0, 1.0);
  }
  return overlap;
}

template <typename Fn>
void parallel_chunks(std::size_t n, unsigned workers, Fn&& fn) {
  const std::size_t w = std::max<std::size_t>(1, std::min<std::size_t>(workers, n));
  if (w <= 1) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(w - 1);
  const std::size_t chunk = (n + w - 1) / w;
  for (std::size_t t = 1; t < w; ++t) {
    const std::size_t lo = std::min(n, t * chunk);
    const std::size_t hi = std::min(n, lo + chunk);
    pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
  fn(std::size_t{0}, std::min(n, chunk));
}

}  // namespace detail

/// Streams the overlap matrix one ground-truth row at a time. Each row is
/// computed from one shared SampleSet (MonteCarlo) and handed to `on_row`
/// before the next row starts. Entries depend only on their own pair, so
/// the result does not depend on `cfg.workers`.
inline void for_each_overlap_row(const PreparedQuads& gts, const PreparedQuads& priors,
                                 const OverlapConfig& cfg,
                                 const std::function<void(std::size_t, std::span<const double>)>& on_row) {
  std::vector<double> row(priors.size());
  for (std::size_t g = 0; g < gts.size(); ++g) {
    std::optional<SampleSet> ss;
    if (cfg.method == OverlapMethod::MonteCarlo) {
      ss.emplace(build_sample_set(gts.quads[g], cfg.total, sample_seed(cfg.seed, g), cfg.strategy));
    }
    detail::parallel_chunks(priors.size(), cfg.workers, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t p = lo; p < hi; ++p) {
        double overlap = 0.0;
        if (ss) {
          overlap = mc_overlap(*ss, priors.quads[p], priors.rects[p]);
        } else if (rects_intersect(gts.rects[g], priors.rects[p])) {
          overlap = exact_overlap(gts.quads[g], priors.quads[p]);
        }
        row[p] = detail::finish_value(cfg.mode, overlap, gts.areas[g], priors.areas[p]);
      }
    });
    on_row(g, row);
  }
}

inline OverlapMatrix batch_overlap(std::span<const ConvexQuad> gts, std::span<const ConvexQuad> priors,
                                   const OverlapConfig& cfg) {
  OverlapMatrix m;
  m.gt_count = gts.size();
  m.prior_count = priors.size();
  m.mode = cfg.mode;
  m.method = cfg.method;
  if (cfg.method == OverlapMethod::MonteCarlo) {
    m.total = effective_total(cfg.total, cfg.strategy);
    m.seed = cfg.seed;
  }
  m.values.resize(m.gt_count * m.prior_count);
  const PreparedQuads pg(gts);
  const PreparedQuads pp(priors);
  for_each_overlap_row(pg, pp, cfg, [&](std::size_t g, std::span<const double> row) {
    std::copy(row.begin(), row.end(), m.values.begin() + static_cast<std::ptrdiff_t>(g * m.prior_count));
  });
  return m;
}

}  // namespace quadwin
