#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rtsbs/eval.hpp"
#include "rtsbs/frame_io.hpp"
#include "rtsbs/fusion.hpp"

namespace rtsbs {

// A sequence held in memory, for runs that revisit the same data many times.
struct LoadedSequence {
  SequenceDescriptor descriptor;
  std::vector<Frame> frames;
  std::vector<std::optional<GroundTruthMask>> ground_truth;
  std::vector<std::optional<SemanticMap>> semantics;
};

LoadedSequence load_sequence(const SequenceDescriptor& descriptor, bool with_semantics = true);
std::vector<LoadedSequence> load_dataset(const std::filesystem::path& root, bool with_semantics = true);

struct SequenceRun {
  VideoScore score;
  int frames = 0;
  double compute_seconds = 0.0;  // pipeline only
  double io_seconds = 0.0;       // decoding inputs and writing masks

  double compute_fps() const { return compute_seconds > 0.0 ? frames / compute_seconds : 0.0; }
};

struct RunOptions {
  std::optional<std::filesystem::path> mask_dir;  // binNNNNNN.pgm per frame when set
};

SequenceRun run_sequence(const LoadedSequence& seq, const PipelineConfig& config, const RunOptions& options = {});

// Streams frames from disk; I/O time is itemized separately from compute.
SequenceRun run_sequence(const SequenceDescriptor& seq, const PipelineConfig& config,
                         const RunOptions& options = {});

// Runs every sequence with the same configuration, up to `parallel` at a time.
// Results keep the input order.
std::vector<SequenceRun> run_all(const std::vector<LoadedSequence>& seqs, const PipelineConfig& config,
                                 int parallel = 1);
// Streaming variant. With a mask root, masks of each video go to
// mask_root / mask_subdir(video).
std::vector<SequenceRun> run_all(const std::vector<SequenceDescriptor>& seqs, const PipelineConfig& config,
                                 int parallel = 1,
                                 const std::optional<std::filesystem::path>& mask_root = std::nullopt);

// "<video>" for flat suites, "<category>/<video>" for CDNet trees.
std::filesystem::path mask_subdir(const SequenceDescriptor& seq);

ScoreReport evaluate(const std::vector<LoadedSequence>& seqs, const PipelineConfig& config, int parallel = 1);

// Scores stored masks (binNNNNNN.pgm) against ground truth.
VideoScore evaluate_masks(const SequenceDescriptor& seq, const std::filesystem::path& mask_dir);

// Named method variants used by the sweep: vibe, sbs, rtsbs, never, always,
// each optionally suffixed with "-fb" to turn semantic feedback on.
struct Variant {
  std::string name;
  FusionMode mode = FusionMode::RtSbs;
  bool feedback = false;
};

Variant parse_variant(const std::string& name);
PipelineConfig configure_variant(PipelineConfig base, const Variant& variant, int x);

struct SweepRow {
  std::string mode;
  int x = 1;
  std::optional<double> overall_f1;
};

std::vector<SweepRow> sweep(const std::vector<LoadedSequence>& seqs, const PipelineConfig& base,
                            const std::vector<Variant>& variants, const std::vector<int>& xs, int parallel = 1);

// "mode,X,overall_f1"
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace rtsbs
