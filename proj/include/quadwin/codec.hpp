#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

#include "quadwin/errors.hpp"
#include "quadwin/geometry.hpp"

namespace quadwin {

// Lengths at or below this are treated as a collapsed circumscribed rect.
inline constexpr double kLengthEpsilon = 1e-9;

// Ten-coordinate relative form of a quad: the center of its circumscribed
// horizontal rectangle plus each vertex's signed offset from that center.
// vertex_i = (x + w[i], y + h[i]).
struct EncodedQuad {
  double x = 0.0;
  double y = 0.0;
  std::array<double, 4> w{};
  std::array<double, 4> h{};
  double w_chr = 0.0;
  double h_chr = 0.0;

  // (x, y, w1, h1, w2, h2, w3, h3, w4, h4)
  std::array<double, 10> as_array() const {
    return {x, y, w[0], h[0], w[1], h[1], w[2], h[2], w[3], h[3]};
  }
};

// Normalized regression target that morphs a prior into a ground truth.
// Components follow the same (x, y, w1, h1, ..., w4, h4) layout.
struct DeltaTarget {
  std::array<double, 10> d{};

  double dx() const { return d[0]; }
  double dy() const { return d[1]; }
  double dw(std::size_t i) const { return d[2 + 2 * i]; }
  double dh(std::size_t i) const { return d[3 + 2 * i]; }
};

/// Expects `q` in canonical order; the vertex sequence is carried through
/// unchanged. Throws DegenerateInput when the circumscribed rect collapses.
inline EncodedQuad encode(const ConvexQuad& q) {
  const AxisRect r = circumscribed_rect(q);
  EncodedQuad e;
  e.w_chr = r.width();
  e.h_chr = r.height();
  if (!(e.w_chr > kLengthEpsilon) || !(e.h_chr > kLengthEpsilon)) {
    throw DegenerateInput("circumscribed rect has no extent");
  }
  const Point2 c = r.center();
  e.x = c.x;
  e.y = c.y;
  for (std::size_t i = 0; i < 4; ++i) {
    e.w[i] = q[i].x - c.x;
    e.h[i] = q[i].y - c.y;
  }
  return e;
}

inline ConvexQuad decode_encoded(const EncodedQuad& e) {
  std::array<Point2, 4> v;
  for (std::size_t i = 0; i < 4; ++i) v[i] = {e.x + e.w[i], e.y + e.h[i]};
  try {
    return ConvexQuad(v);
  } catch (const DegenerateInput& ex) {
    throw NonConvexDecode(ex.what());
  }
}

// Both deltas and their inverse normalize by the prior's rect, so decoding
// never needs the unknown ground truth's dimensions.
inline DeltaTarget compute_deltas(const EncodedQuad& prior, const EncodedQuad& gt) {
  if (!(prior.w_chr > kLengthEpsilon) || !(prior.h_chr > kLengthEpsilon)) {
    throw DegenerateInput("prior circumscribed rect has no extent");
  }
  DeltaTarget t;
  t.d[0] = (gt.x - prior.x) / prior.w_chr;
  t.d[1] = (gt.y - prior.y) / prior.h_chr;
  for (std::size_t i = 0; i < 4; ++i) {
    t.d[2 + 2 * i] = (gt.w[i] - prior.w[i]) / prior.w_chr;
    t.d[3 + 2 * i] = (gt.h[i] - prior.h[i]) / prior.h_chr;
  }
  return t;
}

inline EncodedQuad apply_deltas_encoded(const EncodedQuad& prior, const DeltaTarget& t) {
  if (!(prior.w_chr > kLengthEpsilon) || !(prior.h_chr > kLengthEpsilon)) {
    throw DegenerateInput("prior circumscribed rect has no extent");
  }
  for (double v : t.d) {
    if (!std::isfinite(v)) throw NonConvexDecode("delta is not finite");
  }
  EncodedQuad out;
  out.x = prior.x + t.d[0] * prior.w_chr;
  out.y = prior.y + t.d[1] * prior.h_chr;
  for (std::size_t i = 0; i < 4; ++i) {
    out.w[i] = prior.w[i] + t.d[2 + 2 * i] * prior.w_chr;
    out.h[i] = prior.h[i] + t.d[3 + 2 * i] * prior.h_chr;
  }
  const auto [wx_lo, wx_hi] = std::minmax_element(out.w.begin(), out.w.end());
  const auto [hy_lo, hy_hi] = std::minmax_element(out.h.begin(), out.h.end());
  out.w_chr = *wx_hi - *wx_lo;
  out.h_chr = *hy_hi - *hy_lo;
  return out;
}

/// Inverse of compute_deltas. Throws NonConvexDecode when the adjusted
/// offsets no longer describe a strictly convex quad.
inline ConvexQuad apply_deltas(const EncodedQuad& prior, const DeltaTarget& t) {
  return decode_encoded(apply_deltas_encoded(prior, t));
}

}  // namespace quadwin
