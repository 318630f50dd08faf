#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rtsbs/experiment.hpp"
#include "rtsbs/optimize.hpp"
#include "rtsbs/synth.hpp"

namespace fs = std::filesystem;
using namespace rtsbs;

namespace {

// Pipeline flags, kept as raw strings and fed through the config parser so the
// command line and config files accept exactly the same values.
struct ConfigFlags {
  std::optional<fs::path> config_file;
  std::vector<std::pair<std::string, std::optional<std::string>>> values;
  bool feedback = false;
  bool post_filter = false;

  void add_to(CLI::App& app, bool with_mode = true) {
    app.add_option("--config", config_file, "Pipeline config file (key = value lines)");
    values = {{"mode", {}},        {"tau_bg", {}}, {"tau_fg", {}},      {"tau_star_bg", {}},
              {"tau_star_fg", {}}, {"x", {}},      {"schedule", {}},    {"avail_dir", {}},
              {"semantic_feedback", {}}, {"phi_s", {}}, {"seed", {}},   {"n", {}},
              {"r", {}},           {"min_matches", {}}, {"phi", {}},    {"metric", {}}};
    for (auto& [key, value] : values) {
      if (key == "mode" && !with_mode) continue;
      if (key == "x" && !with_mode) continue;
      std::string flag = "--" + key;
      for (auto& ch : flag) {
        if (ch == '_') ch = '-';
      }
      app.add_option(flag, value, "Override config key '" + key + "'");
    }
    app.add_flag("--feedback", feedback, "Drive the background model update with the fused output");
    app.add_flag("--post-filter", post_filter, "3x3 median filter on emitted masks");
  }

  PipelineConfig build() const {
    PipelineConfig c;
    c.x = 0;  // unset until a file or flag provides it
    if (config_file) c = load_config(*config_file, c);
    for (const auto& [key, value] : values) {
      if (value) apply_setting(c, key, *value);
    }
    // SBS reads a map on every frame unless a rate is requested.
    if (c.x == 0) c.x = c.mode == FusionMode::Sbs ? 1 : PipelineConfig{}.x;
    if (feedback) c.feedback = true;
    if (post_filter) c.post_filter = true;
    c.validate();
    return c;
  }
};

std::vector<SequenceDescriptor> discover(const fs::path& root) {
  auto seqs = discover_dataset(root);
  if (seqs.empty()) throw LayoutError("no sequences found under " + root.string());
  return seqs;
}

void print_report(std::ostream& out, const std::vector<VideoScore>& scores) {
  write_video_csv(out, scores);
  out << "overall_f1," << format_score(make_report(scores).overall) << '\n';
}

void write_report_file(const fs::path& path, const std::vector<VideoScore>& scores) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write " + path.string());
  write_video_csv(f, scores);
}

template <typename T>
std::vector<T> split_list(const std::string& s, T (*parse)(const std::string&)) {
  std::vector<T> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse(item));
  }
  return out;
}

int parse_x(const std::string& s) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size() || v < 1) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid X value '" + s + "'");
  }
}

Variant parse_variant_item(const std::string& s) { return parse_variant(s); }

// ---- subcommands ----

struct SynthArgs {
  fs::path out;
  SuiteOptions suite;
};

int cmd_synth(const SynthArgs& a) {
  if (a.suite.videos < 1) throw ConfigError("--videos must be >= 1");
  if (a.suite.videos == 1) {
    const auto specs = suite_specs(a.suite);
    synth(specs.front().second, a.out, suite_render_seed(a.suite, 0));
  } else {
    write_suite(a.suite, a.out);
  }
  std::cout << "wrote " << a.suite.videos << " sequence(s) to " << a.out.string() << '\n';
  return 0;
}

struct RunArgs {
  fs::path data;
  fs::path out;
  int parallel = 1;
  ConfigFlags flags;
};

int cmd_run(const RunArgs& a) {
  const PipelineConfig config = a.flags.build();
  const auto seqs = discover(a.data);
  fs::create_directories(a.out);
  const auto runs = run_all(seqs, config, a.parallel, a.out);

  std::vector<VideoScore> scores;
  int frames = 0;
  double compute = 0.0;
  double io = 0.0;
  for (const auto& r : runs) {
    scores.push_back(r.score);
    frames += r.frames;
    compute += r.compute_seconds;
    io += r.io_seconds;
  }
  write_report_file(a.out / "report.csv", scores);
  print_report(std::cout, scores);

  std::printf("frames,%d\ncompute_seconds,%.3f\ncompute_fps,%.1f\nio_seconds,%.3f\n", frames, compute,
              compute > 0.0 ? frames / compute : 0.0, io);
  for (const auto& r : runs) {
    std::printf("video_fps,%s,%.1f,io_seconds,%.3f\n", r.score.name.c_str(), r.compute_fps(), r.io_seconds);
  }
  return 0;
}

struct EvalArgs {
  fs::path data;
  fs::path masks;
  std::optional<fs::path> report;
};

int cmd_eval(const EvalArgs& a) {
  const auto seqs = discover(a.data);
  std::vector<VideoScore> scores;
  for (const auto& s : seqs) scores.push_back(evaluate_masks(s, a.masks / mask_subdir(s)));
  if (a.report) write_report_file(*a.report, scores);
  print_report(std::cout, scores);
  return 0;
}

struct SweepArgs {
  fs::path data;
  std::string modes = "vibe,sbs,rtsbs,rtsbs-fb,never,always";
  std::string xs = "1,2,5,10,25";
  std::optional<fs::path> out;
  int parallel = 1;
  ConfigFlags flags;
};

int cmd_sweep(const SweepArgs& a) {
  const PipelineConfig base = a.flags.build();
  const auto variants = split_list<Variant>(a.modes, parse_variant_item);
  const auto xs = split_list<int>(a.xs, parse_x);
  if (variants.empty() || xs.empty()) throw ConfigError("sweep needs at least one mode and one X");
  const auto seqs = load_dataset(a.data);
  if (seqs.empty()) throw LayoutError("no sequences found under " + a.data.string());

  const auto rows = sweep(seqs, base, variants, xs, a.parallel);
  if (a.out) {
    std::ofstream f(*a.out);
    if (!f) throw IoError("cannot write " + a.out->string());
    write_sweep_csv(f, rows);
  }
  write_sweep_csv(std::cout, rows);
  return 0;
}

struct OptimizeArgs {
  fs::path data;
  fs::path out;
  int budget = 50;
  std::uint64_t search_seed = 0;
  int rounds = 4;
  int steps = 2;
  bool scene_specific = false;
  int parallel = 1;
  ConfigFlags flags;
};

void save_trials(const fs::path& path, const std::vector<Trial>& trials) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write " + path.string());
  write_trial_csv(f, trials);
}

int cmd_optimize(const OptimizeArgs& a) {
  const PipelineConfig base = a.flags.build();
  const auto seqs = load_dataset(a.data);
  if (seqs.empty()) throw LayoutError("no sequences found under " + a.data.string());
  fs::create_directories(a.out);

  OptimizeOptions options;
  options.budget = a.budget;
  options.seed = a.search_seed;
  options.refine.rounds = a.rounds;
  options.refine.steps_per_axis = a.steps;

  const Thresholds defaults = thresholds_of(base);
  const SearchResult global = optimize(make_objective(seqs, base, a.parallel), options, defaults);
  save_trials(a.out / "trials.csv", global.trials);
  save_config(a.out / "best.cfg", with_thresholds(base, global.best.params));
  std::cout << "default_f1," << format_score(global.trials.front().score) << '\n'
            << "best_f1," << format_score(global.best.score) << '\n'
            << "trials," << global.trials.size() << '\n';

  if (!a.scene_specific) return 0;

  const PipelineConfig tuned = with_thresholds(base, global.best.params);
  const auto per_video = scene_specific(seqs, tuned, options, global.best.params);
  std::vector<NamedScore> global_scores;
  std::vector<NamedScore> scene_scores;
  std::ofstream summary(a.out / "scene_specific.csv");
  if (!summary) throw IoError("cannot write scene_specific.csv");
  summary << "video,global_f1,scene_f1\n";
  for (const auto& seq : seqs) {
    const auto& d = seq.descriptor;
    const SearchResult& r = per_video.at(d.name);
    const fs::path dir = a.out / "scene" / mask_subdir(d);
    fs::create_directories(dir);
    save_trials(dir / "trials.csv", r.trials);
    save_config(dir / "best.cfg", with_thresholds(base, r.best.params));
    global_scores.push_back({d.name, d.category, r.trials.front().score});
    scene_scores.push_back({d.name, d.category, r.best.score});
    summary << d.name << ',' << format_score(r.trials.front().score) << ',' << format_score(r.best.score) << '\n';
  }
  std::cout << "scene_specific_f1," << format_score(make_report(scene_scores).overall) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Real-time semantic background subtraction"};
  app.require_subcommand(1);

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "Generate synthetic sequences with oracle semantics");
  synth_cmd->add_option("--out", synth_args.out, "Output directory")->required();
  synth_cmd->add_option("--videos", synth_args.suite.videos, "Number of sequences")->capture_default_str();
  synth_cmd->add_option("--seed", synth_args.suite.seed, "Generator seed")->capture_default_str();
  synth_cmd->add_option("--width", synth_args.suite.width)->capture_default_str();
  synth_cmd->add_option("--height", synth_args.suite.height)->capture_default_str();
  synth_cmd->add_option("--frames", synth_args.suite.frames)->capture_default_str();
  synth_cmd->add_option("--objects", synth_args.suite.objects)->capture_default_str();
  synth_cmd->add_option("--noise", synth_args.suite.noise_sigma, "Per-channel noise sigma")->capture_default_str();
  synth_cmd->add_option("--fidelity", synth_args.suite.fidelity, "Semantic fidelity")->capture_default_str();
  synth_cmd->add_option("--drift", synth_args.suite.drift_amplitude, "Brightness drift amplitude")
      ->capture_default_str();

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Run the pipeline, write masks and a per-video report");
  run_cmd->add_option("--data", run_args.data, "Sequence, suite or CDNet root")->required();
  run_cmd->add_option("--out", run_args.out, "Output directory")->required();
  run_cmd->add_option("--parallel-videos", run_args.parallel, "Videos processed concurrently")
      ->capture_default_str();
  run_args.flags.add_to(*run_cmd);

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "Score stored masks against ground truth");
  eval_cmd->add_option("--data", eval_args.data, "Sequence, suite or CDNet root")->required();
  eval_cmd->add_option("--masks", eval_args.masks, "Mask root written by run")->required();
  eval_cmd->add_option("--report", eval_args.report, "Also write the per-video CSV here");

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "Overall F1 per method and semantic frame rate");
  sweep_cmd->add_option("--data", sweep_args.data)->required();
  sweep_cmd->add_option("--modes", sweep_args.modes, "Comma-separated variants")->capture_default_str();
  sweep_cmd->add_option("--x", sweep_args.xs, "Comma-separated X values")->capture_default_str();
  sweep_cmd->add_option("--out", sweep_args.out, "CSV output file");
  sweep_cmd->add_option("--parallel-videos", sweep_args.parallel)->capture_default_str();
  sweep_args.flags.add_to(*sweep_cmd, false);

  OptimizeArgs opt_args;
  auto* opt_cmd = app.add_subcommand("optimize", "Search the four thresholds for the best overall F1");
  opt_cmd->add_option("--data", opt_args.data)->required();
  opt_cmd->add_option("--out", opt_args.out, "Directory for trial logs and best configs")->required();
  opt_cmd->add_option("--budget", opt_args.budget, "Random samples before refinement")->capture_default_str();
  opt_cmd->add_option("--search-seed", opt_args.search_seed)->capture_default_str();
  opt_cmd->add_option("--rounds", opt_args.rounds, "Refinement rounds")->capture_default_str();
  opt_cmd->add_option("--steps", opt_args.steps, "Refinement steps per axis")->capture_default_str();
  opt_cmd->add_flag("--scene-specific", opt_args.scene_specific, "Also search per video");
  opt_cmd->add_option("--parallel-videos", opt_args.parallel)->capture_default_str();
  opt_args.flags.add_to(*opt_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*synth_cmd) return cmd_synth(synth_args);
    if (*run_cmd) return cmd_run(run_args);
    if (*eval_cmd) return cmd_eval(eval_args);
    if (*sweep_cmd) return cmd_sweep(sweep_args);
    if (*opt_cmd) return cmd_optimize(opt_args);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
