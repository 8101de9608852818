// quadwin command-line front end.
//
// Exit codes: 0 success, 1 usage or validation error, 2 parse error.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "quadwin/quadwin.hpp"

namespace fs = std::filesystem;
using namespace quadwin;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitParse = 2;

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// "-" writes to stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path != "-") {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw ValidationError("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::pair<double, double> parse_image_size(const std::string& s) {
  const auto x = s.find('x');
  const auto w = parse_double(x == std::string::npos ? s : s.substr(0, x));
  const auto h = parse_double(x == std::string::npos ? s : s.substr(x + 1));
  if (!w || !h || *w <= 0.0 || *h <= 0.0) throw ValidationError("bad --image-size '" + s + "'");
  return {*w, *h};
}

PriorConfig load_config(const std::string& path, const std::string& image_size) {
  PriorConfig cfg = path.empty() ? default_prior_config() : load_prior_config(path);
  if (!image_size.empty()) {
    const auto [w, h] = parse_image_size(image_size);
    if (path.empty()) {
      cfg = PriorConfig{w, h, cfg.clamp, default_grids(w, h)};
    } else {
      cfg.set_image_size(w, h);
    }
  }
  return cfg;
}

PriorSet build_priors(const PriorConfig& cfg) {
  PriorSet set = generate_all_priors(cfg.grids, cfg.clamp);
  if (set.dropped > 0) std::cerr << "warning: dropped " << set.dropped << " degenerate prior windows\n";
  return set;
}

std::vector<AnnotationRecord> load_annotations(const fs::path& path) {
  IcdarParseResult parsed = parse_icdar_file(path);
  if (parsed.skipped_nonconvex > 0) {
    std::cerr << "warning: " << path.string() << ": skipped " << parsed.skipped_nonconvex
              << " non-convex annotations\n";
  }
  return std::move(parsed.records);
}

std::vector<fs::path> annotation_inputs(const std::string& path) {
  if (fs::is_directory(path)) return list_annotation_files(path);
  if (fs::is_regular_file(path)) return {path};
  throw ValidationError("no such file or directory: " + path);
}

OverlapMethod method_from(const std::string& s) {
  return s == "mc" ? OverlapMethod::MonteCarlo : OverlapMethod::ExactClip;
}

OverlapMode mode_from(const std::string& s) {
  if (s == "area") return OverlapMode::OverlapArea;
  if (s == "iou") return OverlapMode::IoU;
  return OverlapMode::OverlapOverGT;
}

SamplingStrategy strategy_from(const std::string& s) {
  return s == "uniform" ? SamplingStrategy::UniformRandom : SamplingStrategy::StratifiedJittered;
}

struct OverlapOptions {
  std::string method = "exact";
  std::string mode = "iou";
  std::string strategy = "stratified";
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  unsigned workers = 1;

  OverlapConfig config() const {
    return {mode_from(mode), method_from(method), samples, seed, strategy_from(strategy), workers};
  }
};

void add_overlap_options(CLI::App* cmd, OverlapOptions& o) {
  cmd->add_option("--method", o.method, "Overlap method")->check(CLI::IsMember({"mc", "exact"}))->capture_default_str();
  cmd->add_option("--mode", o.mode, "Overlap normalization")
      ->check(CLI::IsMember({"area", "iou", "overlap_over_gt"}))
      ->capture_default_str();
  cmd->add_option("--strategy", o.strategy, "Monte-Carlo sampling strategy")
      ->check(CLI::IsMember({"stratified", "uniform"}))
      ->capture_default_str();
  cmd->add_option("--samples", o.samples, "Monte-Carlo samples per ground truth")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "Sampling seed")->capture_default_str();
  cmd->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
}

// ---- subcommands ----

int cmd_priors_generate(const std::string& config, const std::string& image_size, const std::string& out) {
  const PriorSet set = build_priors(load_config(config, image_size));
  Output o(out);
  write_priors_csv(o.stream(), set.priors);
  std::cerr << set.priors.size() << " priors\n";
  return kExitOk;
}

int cmd_overlap(const std::string& gt, const std::string& priors_csv, OverlapOptions opts, const std::string& out) {
  const auto records = load_annotations(gt);
  std::ifstream in(priors_csv);
  if (!in) throw ValidationError("cannot open " + priors_csv);
  const auto priors = read_priors_csv(in);
  std::vector<ConvexQuad> gts;
  for (const auto& r : records) gts.push_back(r.quad);
  std::vector<ConvexQuad> pq;
  for (const auto& p : priors) pq.push_back(p.quad);
  const OverlapMatrix m = batch_overlap(gts, pq, opts.config());
  Output o(out);
  write_overlap_csv(o.stream(), m);
  return kExitOk;
}

int cmd_match(const std::string& gt, const std::string& config, const std::string& image_size, double threshold,
              OverlapOptions opts, const std::string& out) {
  const PriorSet set = build_priors(load_config(config, image_size));
  std::vector<ConvexQuad> pq;
  for (const auto& p : set.priors) pq.push_back(p.quad);
  MatchConfig mc;
  mc.threshold = threshold;
  mc.overlap = opts.config();
  mc.validate();

  Output o(out);
  o.stream() << "file,gt_index,best_prior,best_value,matched\n";
  std::size_t total = 0;
  std::size_t matched = 0;
  for (const auto& file : annotation_inputs(gt)) {
    const auto records = load_annotations(file);
    const auto gts = care_quads(records);
    const MatchResult r = match(gts, pq, mc);
    for (std::size_t g = 0; g < gts.size(); ++g) {
      const bool hit = r.best_prior[g] && r.best_value[g] >= threshold;
      o.stream() << file.filename().string() << ',' << g << ','
                 << (r.best_prior[g] ? std::to_string(*r.best_prior[g]) : std::string("-1")) << ','
                 << format_double(r.best_value[g]) << ',' << (hit ? 1 : 0) << '\n';
    }
    total += gts.size();
    matched += r.matched;
  }
  const Prf score = prf(matched, total, 0, 0);
  std::cerr << "matched " << matched << " / " << total << " ground truths, recall " << format_double(score.recall)
            << "\n";
  return kExitOk;
}

int cmd_recall_curve(const std::string& synthetic, const std::string& gt, const std::string& config,
                     const std::string& image_size, std::optional<std::uint64_t> seed, OverlapOptions opts,
                     const std::string& out) {
  const PriorConfig pcfg = load_config(config, image_size);
  std::vector<ConvexQuad> gts;
  if (!synthetic.empty()) {
    SynthSpec spec;
    if (auto preset = synth_preset(synthetic)) {
      spec = *preset;
    } else {
      std::ifstream in(synthetic);
      if (!in) throw ValidationError("unknown synthetic preset or file: " + synthetic);
      spec = parse_synth_spec(in);
    }
    spec.image_w = pcfg.image_w;
    spec.image_h = pcfg.image_h;
    if (seed) spec.seed = *seed;
    gts = synth_text_quads(spec);
  } else {
    for (const auto& file : annotation_inputs(gt)) {
      const auto q = care_quads(load_annotations(file));
      gts.insert(gts.end(), q.begin(), q.end());
    }
  }
  const PriorSet set = build_priors(pcfg);
  const auto thresholds = default_thresholds();
  OverlapConfig ocfg = opts.config();
  if (ocfg.mode == OverlapMode::OverlapArea) throw ValidationError("recall-curve needs --mode iou or overlap_over_gt");
  const RecallComparison cmp = compare_prior_sets(gts, set.priors, ocfg, thresholds);
  Output o(out);
  write_recall_csv(o.stream(), cmp.rows);
  std::cerr << gts.size() << " ground truths, " << set.priors.size() << " priors; mean best overlap quad "
            << format_double(cmp.mean_best_quad) << " vs horizontal " << format_double(cmp.mean_best_horizontal)
            << " (gap " << format_double(cmp.mean_best_quad - cmp.mean_best_horizontal) << ")\n";
  return kExitOk;
}

int cmd_bench_overlap(std::size_t pairs, std::size_t samples, std::uint64_t seed, const std::string& strategy) {
  const CounterRng rng(seed);
  std::uint64_t counter = 0;
  std::vector<std::pair<ConvexQuad, ConvexQuad>> work;
  work.reserve(pairs);
  for (std::size_t i = 0; i < pairs; ++i) {
    const Point2 c{400.0, 400.0};
    const ConvexQuad a = random_convex_quad(rng, counter, c, 100.0);
    const Point2 off{(rng.uniform(counter++) - 0.5) * 200.0, (rng.uniform(counter++) - 0.5) * 200.0};
    const ConvexQuad b = random_convex_quad(rng, counter, c + off, 100.0);
    work.emplace_back(a, b);
  }

  using clock = std::chrono::steady_clock;
  std::vector<double> exact(pairs);
  auto t0 = clock::now();
  for (std::size_t i = 0; i < pairs; ++i) exact[i] = exact_overlap(work[i].first, work[i].second);
  const double exact_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();

  std::size_t within = 0;
  double abs_err = 0.0;
  const SamplingStrategy strat = strategy_from(strategy);
  t0 = clock::now();
  for (std::size_t i = 0; i < pairs; ++i) {
    const SampleSet ss = build_sample_set(work[i].first, samples, sample_seed(seed, i), strat);
    const double mc = mc_overlap(ss, work[i].second);
    const double err = std::abs(mc - exact[i]);
    abs_err += err;
    if (err <= 3.0 * binomial_sigma(exact[i], ss.rect.area(), ss.total)) ++within;
  }
  const double mc_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();

  std::cout << "pairs," << pairs << "\nsamples," << effective_total(samples, strat) << "\nstrategy," << strategy
            << "\nexact_ms," << format_double(exact_ms) << "\nmc_ms," << format_double(mc_ms)
            << "\nmean_abs_error," << format_double(pairs ? abs_err / static_cast<double>(pairs) : 0.0)
            << "\nwithin_3sigma," << format_double(pairs ? static_cast<double>(within) / static_cast<double>(pairs) : 0.0)
            << "\n";
  return kExitOk;
}

int cmd_loss_table(double lo, double hi, double step, const std::string& out) {
  if (!(step > 0.0) || hi < lo) throw ValidationError("loss-table needs --step > 0 and --max >= --min");
  Output o(out);
  write_loss_csv(o.stream(), loss_curve(lo, hi, step));
  bool all = true;
  for (const auto& check : loss_table_check()) {
    std::cerr << (check.passed ? "pass " : "FAIL ") << check.name << "\n";
    all = all && check.passed;
  }
  return all ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadrilateral prior windows, shared Monte-Carlo overlap, and quad regression tools"};
  app.require_subcommand(1);

  std::string out = "-";
  std::string config;
  std::string image_size;

  auto* priors = app.add_subcommand("priors", "Prior window generation");
  priors->require_subcommand(1);
  auto* priors_gen = priors->add_subcommand("generate", "Write the prior set as CSV");
  priors_gen->add_option("--config", config, "Prior layout config file (default layout when omitted)");
  priors_gen->add_option("--image-size", image_size, "Image frame, N or WxH (default 800x800)");
  priors_gen->add_option("--out", out, "Output CSV ('-' for stdout)")->capture_default_str();

  std::string gt;
  std::string priors_csv;
  OverlapOptions overlap_opts;
  overlap_opts.mode = "area";
  auto* overlap = app.add_subcommand("overlap", "Overlap matrix between ICDAR ground truth and a prior CSV");
  overlap->add_option("--gt", gt, "ICDAR ground-truth file")->required();
  overlap->add_option("--priors", priors_csv, "Prior CSV from 'priors generate'")->required();
  add_overlap_options(overlap, overlap_opts);
  overlap->add_option("--out", out, "Output CSV")->capture_default_str();

  double threshold = 0.5;
  OverlapOptions match_opts;
  auto* match_cmd = app.add_subcommand("match", "Match ICDAR ground truth against the prior set");
  match_cmd->add_option("--gt", gt, "ICDAR ground-truth file or directory")->required();
  match_cmd->add_option("--config", config, "Prior layout config file");
  match_cmd->add_option("--image-size", image_size, "Image frame, N or WxH");
  match_cmd->add_option("--threshold", threshold, "Positive overlap threshold")->capture_default_str();
  add_overlap_options(match_cmd, match_opts);
  match_cmd->add_option("--out", out, "Output CSV")->capture_default_str();

  std::string synthetic;
  std::optional<std::uint64_t> seed;
  OverlapOptions recall_opts;
  auto* recall = app.add_subcommand("recall-curve", "Recall of quad priors vs horizontal-only priors");
  auto* synth_opt = recall->add_option("--synthetic", synthetic, "Preset (default, oriented) or spec file");
  auto* gt_opt = recall->add_option("--gt", gt, "ICDAR ground-truth file or directory");
  synth_opt->excludes(gt_opt);
  recall->add_option("--config", config, "Prior layout config file");
  recall->add_option("--image-size", image_size, "Image frame, N or WxH");
  recall->add_option("--synthetic-seed", seed, "Override the synthetic spec's seed");
  add_overlap_options(recall, recall_opts);
  recall->add_option("--out", out, "Output CSV")->capture_default_str();

  std::size_t pairs = 1000;
  std::size_t samples = 10000;
  std::uint64_t bench_seed = 1;
  std::string bench_strategy = "stratified";
  auto* bench = app.add_subcommand("bench", "Benchmarks");
  bench->require_subcommand(1);
  auto* bench_overlap = bench->add_subcommand("overlap", "Monte-Carlo vs exact overlap on random quad pairs");
  bench_overlap->add_option("--pairs", pairs, "Number of quad pairs")->capture_default_str();
  bench_overlap->add_option("--samples", samples, "Samples per ground truth")->check(CLI::PositiveNumber)->capture_default_str();
  bench_overlap->add_option("--seed", bench_seed, "Seed")->capture_default_str();
  bench_overlap->add_option("--strategy", bench_strategy, "Sampling strategy")
      ->check(CLI::IsMember({"stratified", "uniform"}))
      ->capture_default_str();

  double lo = -3.0;
  double hi = 3.0;
  double step = 0.01;
  auto* loss = app.add_subcommand("loss-table", "Sampled L2 / smooth L1 / smooth Ln curves and derivatives");
  loss->add_option("--min", lo, "First x")->capture_default_str();
  loss->add_option("--max", hi, "Last x")->capture_default_str();
  loss->add_option("--step", step, "Spacing")->capture_default_str();
  loss->add_option("--out", out, "Output CSV")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitValidation;
  }

  try {
    if (priors_gen->parsed()) return cmd_priors_generate(config, image_size, out);
    if (overlap->parsed()) return cmd_overlap(gt, priors_csv, overlap_opts, out);
    if (match_cmd->parsed()) return cmd_match(gt, config, image_size, threshold, match_opts, out);
    if (recall->parsed()) {
      if (synthetic.empty() && gt.empty()) throw ValidationError("recall-curve needs --synthetic or --gt");
      return cmd_recall_curve(synthetic, gt, config, image_size, seed, recall_opts, out);
    }
    if (bench_overlap->parsed()) return cmd_bench_overlap(pairs, samples, bench_seed, bench_strategy);
    if (loss->parsed()) return cmd_loss_table(lo, hi, step, out);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  std::cerr << app.help();
  return kExitValidation;
}
