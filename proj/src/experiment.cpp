#include "rtsbs/experiment.hpp"

#include <atomic>
#include <chrono>
#include <mutex>
#include <ostream>
#include <thread>

namespace rtsbs {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Frame checked_frame(const FrameEntry& entry, std::optional<Size> expected) {
  Frame f = load_frame(entry.path);
  f.index = entry.index;
  if (expected && f.size() != *expected) {
    throw FormatError(entry.path.string() + ": frame is " + to_string(f.size()) + ", sequence is " +
                      to_string(*expected));
  }
  return f;
}

// The shared frame loop. `source` supplies frames, ground truth and semantic
// maps by position; the streaming and in-memory variants differ only there.
template <typename Source>
SequenceRun run_loop(const SequenceDescriptor& d, const PipelineConfig& config, const RunOptions& options,
                     Source& source) {
  SequenceRun run;
  run.score.name = d.name;
  run.score.category = d.category;
  if (d.frames.empty()) return run;

  if (options.mask_dir) std::filesystem::create_directories(*options.mask_dir);

  auto io_start = Clock::now();
  const Frame* first = source.frame(0);
  run.io_seconds += seconds_since(io_start);

  auto compute_start = Clock::now();
  Pipeline pipeline(config, *first);
  run.compute_seconds += seconds_since(compute_start);

  const bool uses_semantics = config.mode != FusionMode::PureBgs;
  FrameResult result;
  for (std::size_t k = 0; k < d.frames.size(); ++k) {
    const int t = d.frames[k].index;
    io_start = Clock::now();
    const Frame* frame = k == 0 ? first : source.frame(k);
    run.io_seconds += seconds_since(io_start);

    compute_start = Clock::now();
    AvailabilityMask avail = uses_semantics ? pipeline.availability(t) : AvailabilityMask(pipeline.size(), 0);
    run.compute_seconds += seconds_since(compute_start);

    const SemanticMap* map = nullptr;
    if (any_available(avail)) {
      io_start = Clock::now();
      map = source.semantic(k, pipeline.size());
      run.io_seconds += seconds_since(io_start);
      // A missing map is a legal schedule: nothing is available this frame.
      if (map == nullptr) avail.fill(0);
    }

    compute_start = Clock::now();
    pipeline.process_into(*frame, map, avail, t, result);
    run.compute_seconds += seconds_since(compute_start);

    io_start = Clock::now();
    if (d.in_temporal_roi(t)) {
      if (const GroundTruthMask* gt = source.ground_truth(k)) accumulate(run.score.confusion, result.output_mask, *gt);
    }
    if (options.mask_dir) write_mask(*options.mask_dir / numbered_name("bin", t, ".pgm"), result.output_mask);
    run.io_seconds += seconds_since(io_start);
    ++run.frames;
  }
  return run;
}

struct MemorySource {
  const LoadedSequence& seq;

  const Frame* frame(std::size_t k) const { return &seq.frames[k]; }
  const SemanticMap* semantic(std::size_t k, Size) const {
    return k < seq.semantics.size() && seq.semantics[k] ? &*seq.semantics[k] : nullptr;
  }
  const GroundTruthMask* ground_truth(std::size_t k) const {
    return k < seq.ground_truth.size() && seq.ground_truth[k] ? &*seq.ground_truth[k] : nullptr;
  }
};

struct DiskSource {
  const SequenceDescriptor& d;
  std::optional<Size> size;
  Frame current;
  SemanticMap map;
  GroundTruthMask gt;

  const Frame* frame(std::size_t k) {
    current = checked_frame(d.frames[k], size);
    size = current.size();
    return &current;
  }
  const SemanticMap* semantic(std::size_t k, Size expected) {
    const auto p = d.semantic_path(d.frames[k].index);
    if (!p) return nullptr;
    map = load_semantic_map(*p, expected);
    map.index = d.frames[k].index;
    return &map;
  }
  const GroundTruthMask* ground_truth(std::size_t k) {
    const auto p = d.gt_path(d.frames[k].index);
    if (!p) return nullptr;
    gt = load_ground_truth(*p);
    return &gt;
  }
};

}  // namespace

LoadedSequence load_sequence(const SequenceDescriptor& descriptor, bool with_semantics) {
  LoadedSequence seq;
  seq.descriptor = descriptor;
  std::optional<Size> size;
  for (const auto& entry : descriptor.frames) {
    seq.frames.push_back(checked_frame(entry, size));
    size = seq.frames.back().size();
    const int t = entry.index;

    std::optional<GroundTruthMask> gt;
    if (auto p = descriptor.gt_path(t)) {
      gt = load_ground_truth(*p);
      require_same_size(gt->size(), *size, "ground truth");
    }
    seq.ground_truth.push_back(std::move(gt));

    std::optional<SemanticMap> map;
    if (with_semantics) {
      if (auto p = descriptor.semantic_path(t)) {
        map = load_semantic_map(*p, *size);
        map->index = t;
      }
    }
    seq.semantics.push_back(std::move(map));
  }
  return seq;
}

std::vector<LoadedSequence> load_dataset(const std::filesystem::path& root, bool with_semantics) {
  std::vector<LoadedSequence> out;
  for (const auto& d : discover_dataset(root)) out.push_back(load_sequence(d, with_semantics));
  return out;
}

SequenceRun run_sequence(const LoadedSequence& seq, const PipelineConfig& config, const RunOptions& options) {
  MemorySource source{seq};
  return run_loop(seq.descriptor, config, options, source);
}

SequenceRun run_sequence(const SequenceDescriptor& seq, const PipelineConfig& config, const RunOptions& options) {
  DiskSource source{seq, std::nullopt, {}, {}, {}};
  return run_loop(seq, config, options, source);
}

namespace {

// Calls fn(i) for i in [0, n) on up to `parallel` threads; the first
// exception is rethrown after all workers finish.
template <typename Fn>
void parallel_for(std::size_t n, int parallel, Fn fn) {
  if (parallel <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(parallel), n);
  for (std::size_t i = 0; i < k; ++i) pool.emplace_back(worker);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::vector<SequenceRun> run_all(const std::vector<LoadedSequence>& seqs, const PipelineConfig& config,
                                 int parallel) {
  std::vector<SequenceRun> runs(seqs.size());
  parallel_for(seqs.size(), parallel, [&](std::size_t i) { runs[i] = run_sequence(seqs[i], config); });
  return runs;
}

std::vector<SequenceRun> run_all(const std::vector<SequenceDescriptor>& seqs, const PipelineConfig& config,
                                 int parallel, const std::optional<std::filesystem::path>& mask_root) {
  std::vector<SequenceRun> runs(seqs.size());
  parallel_for(seqs.size(), parallel, [&](std::size_t i) {
    RunOptions options;
    if (mask_root) options.mask_dir = *mask_root / mask_subdir(seqs[i]);
    runs[i] = run_sequence(seqs[i], config, options);
  });
  return runs;
}

std::filesystem::path mask_subdir(const SequenceDescriptor& seq) {
  return seq.category.empty() ? std::filesystem::path(seq.name) : std::filesystem::path(seq.category) / seq.name;
}

ScoreReport evaluate(const std::vector<LoadedSequence>& seqs, const PipelineConfig& config, int parallel) {
  std::vector<VideoScore> scores;
  for (auto& r : run_all(seqs, config, parallel)) scores.push_back(std::move(r.score));
  return make_report(scores);
}

VideoScore evaluate_masks(const SequenceDescriptor& seq, const std::filesystem::path& mask_dir) {
  VideoScore score{seq.name, seq.category, {}};
  for (const auto& entry : seq.frames) {
    const int t = entry.index;
    if (!seq.in_temporal_roi(t)) continue;
    const auto gt_path = seq.gt_path(t);
    if (!gt_path) continue;
    const auto mask_path = mask_dir / numbered_name("bin", t, ".pgm");
    std::error_code ec;
    if (!std::filesystem::is_regular_file(mask_path, ec)) throw IoError("missing result mask " + mask_path.string());
    accumulate(score.confusion, load_mask(mask_path), load_ground_truth(*gt_path));
  }
  return score;
}

Variant parse_variant(const std::string& name) {
  Variant v;
  v.name = name;
  std::string base = name;
  const std::string suffix = "-fb";
  if (base.size() > suffix.size() && base.compare(base.size() - suffix.size(), suffix.size(), suffix) == 0) {
    v.feedback = true;
    base.resize(base.size() - suffix.size());
  }
  v.mode = parse_fusion_mode(base);
  return v;
}

PipelineConfig configure_variant(PipelineConfig base, const Variant& variant, int x) {
  base.mode = variant.mode;
  base.feedback = variant.feedback;
  base.schedule = ScheduleKind::Subsample;
  base.x = x;
  return base;
}

std::vector<SweepRow> sweep(const std::vector<LoadedSequence>& seqs, const PipelineConfig& base,
                            const std::vector<Variant>& variants, const std::vector<int>& xs, int parallel) {
  std::vector<SweepRow> rows;
  for (const auto& v : variants) {
    for (int x : xs) {
      if (x < 1) throw ConfigError("sweep: X values must be >= 1");
      rows.push_back({v.name, x, evaluate(seqs, configure_variant(base, v, x), parallel).overall});
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "mode,X,overall_f1\n";
  for (const auto& r : rows) out << r.mode << ',' << r.x << ',' << format_score(r.overall_f1) << '\n';
}

}  // namespace rtsbs
