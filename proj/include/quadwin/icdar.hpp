#pragma once

// ICDAR 2015 incidental-text ground truth: one word per line,
//   x1,y1,x2,y2,x3,y3,x4,y4,transcription
// The transcription may itself contain commas; "###" marks a don't-care
// region. Files are UTF-8, often with a byte-order mark and CRLF endings.

#include <algorithm>
#include <array>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "quadwin/csv.hpp"
#include "quadwin/errors.hpp"
#include "quadwin/geometry.hpp"
#include "quadwin/ordering.hpp"

namespace quadwin {

inline constexpr std::string_view kDontCare = "###";

struct AnnotationRecord {
  ConvexQuad quad;  // canonical order
  std::string transcription;
  bool dont_care = false;
};

struct IcdarParseResult {
  std::vector<AnnotationRecord> records;
  std::size_t skipped_nonconvex = 0;
};

/// Parses one nonblank line. Returns nullopt when the four points do not
/// form a strictly convex quad. Throws ParseError on malformed numerics.
inline std::optional<AnnotationRecord> parse_icdar_line(std::string_view line, std::size_t lineno) {
  std::array<double, 8> c{};
  std::size_t pos = 0;
  for (std::size_t i = 0; i < 8; ++i) {
    const auto comma = line.find(',', pos);
    std::string_view field;
    if (comma == std::string_view::npos) {
      if (i != 7) throw ParseError(lineno, "expected 8 coordinates, found " + std::to_string(i + 1) + " fields");
      field = line.substr(pos);
      pos = line.size();
    } else {
      field = line.substr(pos, comma - pos);
      pos = comma + 1;
    }
    const auto v = parse_double(field);
    if (!v) throw ParseError(lineno, "coordinate " + std::to_string(i + 1) + " is not a number: '" +
                                         std::string(field) + "'");
    c[i] = *v;
  }
  std::string transcription(pos <= line.size() ? line.substr(pos) : std::string_view{});

  const std::array<Point2, 4> pts{{{c[0], c[1]}, {c[2], c[3]}, {c[4], c[5]}, {c[6], c[7]}}};
  try {
    const bool dont_care = transcription == kDontCare;
    return AnnotationRecord{canonical_order(pts), std::move(transcription), dont_care};
  } catch (const DegenerateInput&) {
    return std::nullopt;
  }
}

inline IcdarParseResult parse_icdar(std::istream& is) {
  IcdarParseResult result;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string_view view(line);
    if (lineno == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    while (!view.empty() && (view.back() == '\r' || view.back() == '\n')) view.remove_suffix(1);
    if (trim(view).empty()) continue;
    if (auto rec = parse_icdar_line(view, lineno)) {
      result.records.push_back(std::move(*rec));
    } else {
      ++result.skipped_nonconvex;
    }
  }
  return result;
}

inline IcdarParseResult parse_icdar_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_icdar(in);
}

inline void write_icdar(std::ostream& os, std::span<const AnnotationRecord> records) {
  for (const auto& r : records) {
    for (const auto& v : r.quad.vertices()) os << format_double(v.x) << ',' << format_double(v.y) << ',';
    os << r.transcription << '\n';
  }
}

// Non-don't-care quads, the recall denominator.
inline std::vector<ConvexQuad> care_quads(std::span<const AnnotationRecord> records) {
  std::vector<ConvexQuad> out;
  for (const auto& r : records) {
    if (!r.dont_care) out.push_back(r.quad);
  }
  return out;
}

// ICDAR ground-truth files in a directory, sorted by name.
inline std::vector<std::filesystem::path> list_annotation_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace quadwin
