#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rtsbs/experiment.hpp"
#include "rtsbs/rng.hpp"
#include "rtsbs/types.hpp"

namespace rtsbs {

// Axis-aligned rectangle moving at constant velocity; positions wrap around
// the frame borders.
struct SynthObject {
  int width = 32;
  int height = 24;
  double x0 = 0.0;  // top-left at frame 1
  double y0 = 0.0;
  double vx = 2.0;  // px/frame
  double vy = 0.0;
  Rgb color{200, 40, 40};
};

enum class SynthBackground : std::uint8_t { Constant, Gradient };

struct SynthSpec {
  int width = 320;
  int height = 240;
  int num_frames = 100;
  std::vector<SynthObject> objects;

  SynthBackground background = SynthBackground::Gradient;
  Rgb background_a{90, 110, 100};   // left edge, or the constant color
  Rgb background_b{140, 150, 120};  // right edge of the gradient
  double drift_amplitude = 0.0;     // brightness offset amplitude, gray levels
  double drift_period = 200.0;      // frames per drift cycle

  double noise_sigma = 0.0;         // per-channel additive Gaussian noise
  double semantic_fidelity = 0.9;   // object pixels score near this, background near 1 - this

  void validate() const;
};

// The default suite layout: random rectangles over a random gradient.
SynthSpec random_synth_spec(std::uint64_t seed, int num_objects = 2, int width = 320, int height = 240,
                            int num_frames = 100);

// Renders frame t (1-based) into a frame, its ground truth and its oracle
// semantic map. `rng` supplies pixel and semantic noise.
void render_synth_frame(const SynthSpec& spec, int t, Rng& rng, Frame& frame, GroundTruthMask& gt,
                        SemanticMap& semantic);

// Whole sequence in memory, laid out like a loaded CDNet sequence.
LoadedSequence synth_sequence(const SynthSpec& spec, std::uint64_t seed, const std::string& name = "synth");

// Writes input/inNNNNNN.ppm, groundtruth/gtNNNNNN.pgm, semantic/semNNNNNN.pgm
// and temporalROI.txt under out_dir.
void synth(const SynthSpec& spec, const std::filesystem::path& out_dir, std::uint64_t seed);

// A flat suite of random sequences named synth01, synth02, ...
struct SuiteOptions {
  int videos = 6;
  std::uint64_t seed = 100;
  int width = 320;
  int height = 240;
  int frames = 100;
  int objects = 2;
  double noise_sigma = 8.0;
  double fidelity = 0.9;
  double drift_amplitude = 0.0;
};

std::vector<std::pair<std::string, SynthSpec>> suite_specs(const SuiteOptions& options);
std::uint64_t suite_render_seed(const SuiteOptions& options, int video);
std::vector<LoadedSequence> synth_suite(const SuiteOptions& options);
void write_suite(const SuiteOptions& options, const std::filesystem::path& out_dir);

}  // namespace rtsbs
