#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "quadwin/errors.hpp"
#include "quadwin/geometry.hpp"
#include "quadwin/loss.hpp"
#include "quadwin/matcheval.hpp"
#include "quadwin/overlap.hpp"
#include "quadwin/priors.hpp"

namespace quadwin {

// Shortest representation that parses back to the same double.
inline std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

/// Parses the whole field as a finite double (surrounding blanks allowed).
inline std::optional<double> parse_double(std::string_view field) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  if (field.empty()) return std::nullopt;
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

// ---- priors ----

inline constexpr std::string_view kPriorCsvHeader = "grid,ix,iy,family,scale,aspect,x1,y1,x2,y2,x3,y3,x4,y4";

inline void write_priors_csv(std::ostream& os, std::span<const PriorWindow> priors) {
  os << kPriorCsvHeader << '\n';
  for (const auto& p : priors) {
    os << p.grid << ',' << p.ix << ',' << p.iy << ',' << to_string(p.family) << ',' << format_double(p.scale) << ','
       << format_double(p.aspect);
    for (const auto& v : p.quad.vertices()) os << ',' << format_double(v.x) << ',' << format_double(v.y);
    os << '\n';
  }
}

inline std::optional<Family> family_from_string(std::string_view s) {
  for (Family f : {Family::Horizontal, Family::RotatedSquare45Pos, Family::RotatedSquare45Neg,
                   Family::LongParallelogramPos, Family::LongParallelogramNeg, Family::TallParallelogramPos,
                   Family::TallParallelogramNeg}) {
    if (to_string(f) == s) return f;
  }
  return std::nullopt;
}

/// Reads a prior dump produced by write_priors_csv. Throws ParseError.
inline std::vector<PriorWindow> read_priors_csv(std::istream& is) {
  std::vector<PriorWindow> out;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string_view row = trim(line);
    if (row.empty()) continue;
    if (!header_seen) {
      if (row != kPriorCsvHeader) throw ParseError(lineno, "unexpected prior csv header");
      header_seen = true;
      continue;
    }
    const auto f = split(row, ',');
    if (f.size() != 14) throw ParseError(lineno, "expected 14 fields");
    auto num = [&](std::size_t i) {
      const auto v = parse_double(f[i]);
      if (!v) throw ParseError(lineno, "bad number '" + std::string(f[i]) + "'");
      return *v;
    };
    auto index = [&](std::size_t i) {
      const double v = num(i);
      if (v < 0.0 || v != std::floor(v)) throw ParseError(lineno, "bad index '" + std::string(f[i]) + "'");
      return static_cast<std::size_t>(v);
    };
    const auto family = family_from_string(trim(f[3]));
    if (!family) throw ParseError(lineno, "unknown family '" + std::string(f[3]) + "'");
    std::array<Point2, 4> v;
    for (std::size_t k = 0; k < 4; ++k) v[k] = {num(6 + 2 * k), num(7 + 2 * k)};
    try {
      ConvexQuad q(v);
      out.push_back({q, index(0), index(1), index(2), *family, num(4), num(5), circumscribed_rect(q)});
    } catch (const DegenerateInput& e) {
      throw ParseError(lineno, e.what());
    }
  }
  if (!header_seen) throw ParseError(lineno, "empty prior csv");
  return out;
}

// ---- overlap ----

inline void write_overlap_csv(std::ostream& os, const OverlapMatrix& m) {
  os << "gt_index,prior_index,value,mode,method,total,seed\n";
  const std::string suffix = "," + std::string(to_string(m.mode)) + "," + std::string(to_string(m.method)) + "," +
                             std::to_string(m.total) + "," + std::to_string(m.seed) + "\n";
  for (std::size_t g = 0; g < m.gt_count; ++g) {
    for (std::size_t p = 0; p < m.prior_count; ++p) {
      os << g << ',' << p << ',' << format_double(m.at(g, p)) << suffix;
    }
  }
}

// ---- recall curves ----

inline void write_recall_csv(std::ostream& os, std::span<const RecallRow> rows) {
  os << "threshold,recall_quad,recall_horizontal,mean_best_iou_quad,mean_best_iou_horizontal\n";
  for (const auto& r : rows) {
    os << format_double(r.threshold) << ',' << format_double(r.recall_quad) << ','
       << format_double(r.recall_horizontal) << ',' << format_double(r.mean_best_iou_quad) << ','
       << format_double(r.mean_best_iou_horizontal) << '\n';
  }
}

// ---- loss curves ----

inline void write_loss_csv(std::ostream& os, std::span<const LossSample> rows) {
  os << "x,l2,smooth_l1,smooth_ln,l2_deriv,smooth_l1_deriv,smooth_ln_deriv\n";
  for (const auto& r : rows) {
    os << format_double(r.x) << ',' << format_double(r.l2) << ',' << format_double(r.smooth_l1) << ','
       << format_double(r.smooth_ln) << ',' << format_double(r.l2_deriv) << ',' << format_double(r.smooth_l1_deriv)
       << ',' << format_double(r.smooth_ln_deriv) << '\n';
  }
}

}  // namespace quadwin
