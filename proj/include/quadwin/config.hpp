#pragma once

// Line-oriented key = value configuration. '#' starts a comment.
//
// Prior layout:
//   image_width  = 800
//   image_height = 800
//   clamp        = false
//   grid = map=100x100 scale=0.1 aspects=1,2,3,1/2,1/3
//   grid = map=50x50   scale=0.26 aspects=1,2,1/2
// With no grid lines the default six-map layout is used.
//
// Synthetic ground truth (every key optional):
//   count, aspect_min, aspect_max, rotation_min_deg, rotation_max_deg,
//   random_sign, scale_min, scale_max, jitter, image_width, image_height, seed

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "quadwin/csv.hpp"
#include "quadwin/errors.hpp"
#include "quadwin/matcheval.hpp"
#include "quadwin/priors.hpp"

namespace quadwin {

struct PriorConfig {
  double image_w = 800.0;
  double image_h = 800.0;
  bool clamp = false;
  std::vector<GridSpec> grids;  // image size already applied

  // Overrides the image frame of every grid.
  void set_image_size(double w, double h) {
    image_w = w;
    image_h = h;
    for (auto& g : grids) {
      g.image_w = w;
      g.image_h = h;
    }
  }
};

namespace detail {

using KeyValueHandler = std::function<void(std::string_view key, std::string_view value, std::size_t lineno)>;

inline void for_each_key_value(std::istream& is, const KeyValueHandler& fn) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string_view view(line);
    if (lineno == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) throw ParseError(lineno, "expected 'key = value'");
    fn(trim(view.substr(0, eq)), trim(view.substr(eq + 1)), lineno);
  }
}

inline double number_or_fraction(std::string_view s, std::size_t lineno) {
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const auto num = parse_double(s.substr(0, slash));
    const auto den = parse_double(s.substr(slash + 1));
    if (!num || !den || *den == 0.0) throw ParseError(lineno, "bad fraction '" + std::string(s) + "'");
    return *num / *den;
  }
  const auto v = parse_double(s);
  if (!v) throw ParseError(lineno, "bad number '" + std::string(s) + "'");
  return *v;
}

inline bool parse_bool(std::string_view s, std::size_t lineno) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ParseError(lineno, "bad boolean '" + std::string(s) + "'");
}

inline std::size_t parse_count(std::string_view s, std::size_t lineno) {
  const double v = number_or_fraction(s, lineno);
  if (v < 0.0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
    throw ParseError(lineno, "bad count '" + std::string(s) + "'");
  }
  return static_cast<std::size_t>(v);
}

inline GridSpec parse_grid(std::string_view value, std::size_t lineno) {
  GridSpec g;
  bool have_map = false;
  bool have_scale = false;
  for (std::string_view tok : split(value, ' ')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    const auto eq = tok.find('=');
    if (eq == std::string_view::npos) throw ParseError(lineno, "grid token '" + std::string(tok) + "' lacks '='");
    const auto key = tok.substr(0, eq);
    const auto val = tok.substr(eq + 1);
    if (key == "map") {
      const auto x = val.find('x');
      if (x == std::string_view::npos) throw ParseError(lineno, "map must be WxH");
      g.map_w = parse_count(val.substr(0, x), lineno);
      g.map_h = parse_count(val.substr(x + 1), lineno);
      have_map = true;
    } else if (key == "scale") {
      g.scale = number_or_fraction(val, lineno);
      have_scale = true;
    } else if (key == "aspects") {
      g.aspect_ratios.clear();
      for (auto a : split(val, ',')) g.aspect_ratios.push_back(number_or_fraction(trim(a), lineno));
    } else {
      throw ParseError(lineno, "unknown grid key '" + std::string(key) + "'");
    }
  }
  if (!have_map || !have_scale) throw ParseError(lineno, "grid needs map= and scale=");
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(lineno, e.what());
  }
  return g;
}

}  // namespace detail

inline PriorConfig parse_prior_config(std::istream& is) {
  PriorConfig cfg;
  detail::for_each_key_value(is, [&](std::string_view key, std::string_view value, std::size_t lineno) {
    if (key == "image_width") {
      cfg.image_w = detail::number_or_fraction(value, lineno);
    } else if (key == "image_height") {
      cfg.image_h = detail::number_or_fraction(value, lineno);
    } else if (key == "clamp") {
      cfg.clamp = detail::parse_bool(value, lineno);
    } else if (key == "grid") {
      cfg.grids.push_back(detail::parse_grid(value, lineno));
    } else {
      throw ParseError(lineno, "unknown key '" + std::string(key) + "'");
    }
  });
  if (!(cfg.image_w > 0.0) || !(cfg.image_h > 0.0)) throw ParseError(0, "image size must be positive");
  if (cfg.grids.empty()) cfg.grids = default_grids(cfg.image_w, cfg.image_h);
  cfg.set_image_size(cfg.image_w, cfg.image_h);
  return cfg;
}

inline PriorConfig load_prior_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_prior_config(in);
}

inline PriorConfig default_prior_config() {
  PriorConfig cfg;
  cfg.grids = default_grids(cfg.image_w, cfg.image_h);
  return cfg;
}

inline SynthSpec parse_synth_spec(std::istream& is) {
  SynthSpec s;
  detail::for_each_key_value(is, [&](std::string_view key, std::string_view value, std::size_t lineno) {
    auto num = [&] { return detail::number_or_fraction(value, lineno); };
    if (key == "count") {
      s.count = detail::parse_count(value, lineno);
    } else if (key == "aspect_min") {
      s.aspect_min = num();
    } else if (key == "aspect_max") {
      s.aspect_max = num();
    } else if (key == "rotation_min_deg") {
      s.rotation_min_deg = num();
    } else if (key == "rotation_max_deg") {
      s.rotation_max_deg = num();
    } else if (key == "random_sign") {
      s.random_sign = detail::parse_bool(value, lineno);
    } else if (key == "scale_min") {
      s.scale_min = num();
    } else if (key == "scale_max") {
      s.scale_max = num();
    } else if (key == "jitter") {
      s.jitter = num();
    } else if (key == "image_width") {
      s.image_w = num();
    } else if (key == "image_height") {
      s.image_h = num();
    } else if (key == "seed") {
      s.seed = static_cast<std::uint64_t>(detail::parse_count(value, lineno));
    } else {
      throw ParseError(lineno, "unknown key '" + std::string(key) + "'");
    }
  });
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, e.what());
  }
  return s;
}

// Named presets: "default" (rotation in [-45, 45]) and "oriented"
// (rotation magnitude in [20, 45], either sign).
inline std::optional<SynthSpec> synth_preset(std::string_view name) {
  if (name == "default") return SynthSpec{};
  if (name == "oriented") {
    SynthSpec s;
    s.rotation_min_deg = 20.0;
    s.rotation_max_deg = 45.0;
    s.random_sign = true;
    return s;
  }
  return std::nullopt;
}

}  // namespace quadwin
