#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <string_view>
#include <vector>

#include "quadwin/errors.hpp"
#include "quadwin/geometry.hpp"
#include "quadwin/ordering.hpp"

namespace quadwin {

enum class Family {
  Horizontal,
  RotatedSquare45Pos,
  RotatedSquare45Neg,
  LongParallelogramPos,
  LongParallelogramNeg,
  TallParallelogramPos,
  TallParallelogramNeg,
};

inline std::string_view to_string(Family f) {
  switch (f) {
    case Family::Horizontal: return "horizontal";
    case Family::RotatedSquare45Pos: return "rotated45_pos";
    case Family::RotatedSquare45Neg: return "rotated45_neg";
    case Family::LongParallelogramPos: return "long_para_pos";
    case Family::LongParallelogramNeg: return "long_para_neg";
    case Family::TallParallelogramPos: return "tall_para_pos";
    case Family::TallParallelogramNeg: return "tall_para_neg";
  }
  return "?";
}

// One feature map's layout. Cell centers sit at
// ((ix + 0.5) / map_w * image_w, (iy + 0.5) / map_h * image_h).
struct GridSpec {
  std::size_t map_w = 1;
  std::size_t map_h = 1;
  double image_w = 800.0;
  double image_h = 800.0;
  double scale = 0.1;  // box side for aspect 1, as a fraction of min(image_w, image_h)
  std::vector<double> aspect_ratios{1.0};

  void validate() const {
    if (map_w < 1 || map_h < 1) throw std::invalid_argument("grid map size must be at least 1x1");
    if (!(image_w > 0.0) || !(image_h > 0.0)) throw std::invalid_argument("image size must be positive");
    if (!(scale > 0.0) || scale > 1.0) throw std::invalid_argument("grid scale must be in (0, 1]");
    if (aspect_ratios.empty()) throw std::invalid_argument("grid needs at least one aspect ratio");
    for (double a : aspect_ratios) {
      if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("aspect ratios must be positive");
    }
  }
};

struct PriorWindow {
  ConvexQuad quad;  // canonical order
  std::size_t grid = 0;
  std::size_t ix = 0;
  std::size_t iy = 0;
  Family family = Family::Horizontal;
  double scale = 0.0;
  double aspect = 1.0;
  AxisRect parent;  // the horizontal box the quad was inscribed in
};

namespace detail {

inline bool is_square_aspect(double aspect) { return std::abs(aspect - 1.0) < 1e-12; }

// Inscribed shapes for a parent box [x0, x1] x [y0, y1].
//
// Square parent (side s): two 2:1 rectangles at +-45 degrees with every
// vertex on a side of the square, offset t = s/3 from the corners. "Pos"
// has its long axis along slope +1 in image coordinates.
//
// Long parent (w > h): parallelograms sheared by d = min(h, w/2), keeping
// the top and bottom edges. Tall parents use the transpose.
inline std::array<std::pair<Family, std::array<Point2, 4>>, 2> inscribed(const AxisRect& b) {
  const double x0 = b.x_min, y0 = b.y_min, x1 = b.x_max, y1 = b.y_max;
  const double w = b.width(), h = b.height();
  if (std::abs(w - h) <= 1e-12 * std::max(w, h)) {
    const double t = w / 3.0;
    return {{{Family::RotatedSquare45Pos, {{{x0 + t, y0}, {x1, y1 - t}, {x1 - t, y1}, {x0, y0 + t}}}},
             {Family::RotatedSquare45Neg, {{{x1 - t, y0}, {x0, y1 - t}, {x0 + t, y1}, {x1, y0 + t}}}}}};
  }
  if (w > h) {
    const double d = std::min(h, w / 2.0);
    return {{{Family::LongParallelogramPos, {{{x0 + d, y0}, {x1, y0}, {x1 - d, y1}, {x0, y1}}}},
             {Family::LongParallelogramNeg, {{{x0, y0}, {x1 - d, y0}, {x1, y1}, {x0 + d, y1}}}}}};
  }
  const double d = std::min(w, h / 2.0);
  return {{{Family::TallParallelogramPos, {{{x0, y0 + d}, {x0, y1}, {x1, y1 - d}, {x1, y0}}}},
           {Family::TallParallelogramNeg, {{{x0, y0}, {x0, y1 - d}, {x1, y1}, {x1, y0 + d}}}}}};
}

inline AxisRect parent_box(Point2 center, double side, double aspect) {
  double bw = side * std::sqrt(aspect);
  double bh = side / std::sqrt(aspect);
  if (is_square_aspect(aspect)) bw = bh = side;
  return {center.x - 0.5 * bw, center.y - 0.5 * bh, center.x + 0.5 * bw, center.y + 0.5 * bh};
}

// The horizontal box followed by its two inscribed quads.
inline std::array<std::pair<Family, std::array<Point2, 4>>, 3> cell_windows(const AxisRect& box) {
  const auto extra = inscribed(box);
  return {{{Family::Horizontal,
            {{{box.x_min, box.y_min}, {box.x_max, box.y_min}, {box.x_max, box.y_max}, {box.x_min, box.y_max}}}},
           extra[0],
           extra[1]}};
}

inline std::array<Point2, 4> clamp_to_image(std::array<Point2, 4> v, double image_w, double image_h) {
  for (auto& p : v) {
    p.x = std::clamp(p.x, 0.0, image_w);
    p.y = std::clamp(p.y, 0.0, image_h);
  }
  return v;
}

}  // namespace detail

/// The horizontal box of the given scale and aspect centered at `center`,
/// followed by its two inscribed quads (see detail::inscribed). All quads
/// are canonically ordered. Box size: side * sqrt(aspect) by
/// side / sqrt(aspect), side = scale * min(image_w, image_h).
inline std::vector<PriorWindow> generate_cell_priors(Point2 center, double scale, double aspect, double image_w,
                                                     double image_h, bool clamp = false) {
  if (center.x < 0.0 || center.x > image_w || center.y < 0.0 || center.y > image_h) {
    throw std::invalid_argument("prior center lies outside the image");
  }
  const double side = scale * std::min(image_w, image_h);
  if (!(side >= 2.0)) throw std::invalid_argument("prior box side must be at least 2 pixels");
  if (!(aspect > 0.0)) throw std::invalid_argument("aspect must be positive");

  const AxisRect box = detail::parent_box(center, side, aspect);

  std::vector<PriorWindow> out;
  out.reserve(3);
  for (auto [family, v] : detail::cell_windows(box)) {
    if (clamp) v = detail::clamp_to_image(v, image_w, image_h);
    try {
      out.push_back(PriorWindow{canonical_order(v), 0, 0, 0, family, scale, aspect, box});
    } catch (const DegenerateInput& e) {
      throw DegenerateWindow(std::string(to_string(family)) + " prior degenerates: " + e.what());
    }
  }
  return out;
}

struct PriorSet {
  std::vector<PriorWindow> priors;
  std::size_t dropped = 0;  // windows that degenerated (only possible with clamping)
};

/// Grid-major, then row-major over cells, then aspect in listed order,
/// then family.
inline PriorSet generate_all_priors(const std::vector<GridSpec>& grids, bool clamp = false) {
  if (grids.empty()) throw std::invalid_argument("at least one grid is required");
  PriorSet set;
  for (std::size_t g = 0; g < grids.size(); ++g) {
    const GridSpec& spec = grids[g];
    spec.validate();
    for (std::size_t iy = 0; iy < spec.map_h; ++iy) {
      for (std::size_t ix = 0; ix < spec.map_w; ++ix) {
        const Point2 center{(static_cast<double>(ix) + 0.5) / static_cast<double>(spec.map_w) * spec.image_w,
                            (static_cast<double>(iy) + 0.5) / static_cast<double>(spec.map_h) * spec.image_h};
        for (double aspect : spec.aspect_ratios) {
          const double side = spec.scale * std::min(spec.image_w, spec.image_h);
          const AxisRect box = detail::parent_box(center, side, aspect);
          for (auto [family, v] : detail::cell_windows(box)) {
            if (clamp) v = detail::clamp_to_image(v, spec.image_w, spec.image_h);
            try {
              set.priors.push_back({canonical_order(v), g, ix, iy, family, spec.scale, aspect, box});
            } catch (const DegenerateInput&) {
              ++set.dropped;
            }
          }
        }
      }
    }
  }
  return set;
}

// Feature-map layout for an image_w x image_h input: six maps at strides
// 8, 16, 32, 64, 128, 256 with scales spaced linearly over [0.1, 0.9].
inline std::vector<GridSpec> default_grids(double image_w = 800.0, double image_h = 800.0) {
  const std::array<double, 6> strides{8, 16, 32, 64, 128, 256};
  const std::vector<double> aspects{1.0, 2.0, 3.0, 1.0 / 2.0, 1.0 / 3.0};
  std::vector<GridSpec> grids;
  for (std::size_t i = 0; i < strides.size(); ++i) {
    GridSpec g;
    g.map_w = static_cast<std::size_t>(std::ceil(image_w / strides[i]));
    g.map_h = static_cast<std::size_t>(std::ceil(image_h / strides[i]));
    g.image_w = image_w;
    g.image_h = image_h;
    g.scale = 0.1 + 0.8 * static_cast<double>(i) / static_cast<double>(strides.size() - 1);
    g.aspect_ratios = aspects;
    grids.push_back(g);
  }
  return grids;
}

}  // namespace quadwin
