#include "rtsbs/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "rtsbs/frame_io.hpp"

namespace rtsbs {

namespace {

std::uint8_t to_byte(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

int wrap(long v, int n) {
  const long m = v % n;
  return static_cast<int>(m < 0 ? m + n : m);
}

}  // namespace

void SynthSpec::validate() const {
  if (width <= 0 || height <= 0) throw ConfigError("synth: dimensions must be positive");
  if (num_frames < 1) throw ConfigError("synth: need at least one frame");
  if (noise_sigma < 0.0) throw ConfigError("synth: noise_sigma must be >= 0");
  if (semantic_fidelity < 0.0 || semantic_fidelity > 1.0) throw ConfigError("synth: fidelity must lie in [0, 1]");
  if (drift_period <= 0.0) throw ConfigError("synth: drift_period must be positive");
  for (const auto& o : objects) {
    if (o.width <= 0 || o.height <= 0 || o.width > width || o.height > height) {
      throw ConfigError("synth: object size must fit inside the frame");
    }
  }
}

SynthSpec random_synth_spec(std::uint64_t seed, int num_objects, int width, int height, int num_frames) {
  SynthSpec spec;
  spec.width = width;
  spec.height = height;
  spec.num_frames = num_frames;
  Rng rng(mix_seed(seed, 7));
  auto color = [&](int lo, int hi) {
    return Rgb{static_cast<std::uint8_t>(rng.between(lo, hi)), static_cast<std::uint8_t>(rng.between(lo, hi)),
               static_cast<std::uint8_t>(rng.between(lo, hi))};
  };
  spec.background_a = color(40, 200);
  spec.background_b = color(40, 200);
  for (int i = 0; i < num_objects; ++i) {
    SynthObject o;
    o.width = std::max(2, rng.between(width / 10, width / 5));
    o.height = std::max(2, rng.between(height / 10, height / 4));
    o.x0 = rng.between(0, width - 1);
    o.y0 = rng.between(0, height - 1);
    const double speed = 1.0 + 3.0 * rng.uniform();
    const double angle = 2.0 * std::numbers::pi * rng.uniform();
    o.vx = speed * std::cos(angle);
    o.vy = speed * std::sin(angle);
    o.color = color(0, 255);
    spec.objects.push_back(o);
  }
  return spec;
}

void render_synth_frame(const SynthSpec& spec, int t, Rng& rng, Frame& frame, GroundTruthMask& gt,
                        SemanticMap& semantic) {
  const int w = spec.width;
  const int h = spec.height;
  if (frame.size() != Size{w, h} || frame.data.size() != frame.pixel_count() * 3) frame = Frame(w, h);
  frame.index = t;
  gt.width = semantic.width = w;
  gt.height = semantic.height = h;
  gt.labels.assign(static_cast<std::size_t>(w) * h, gt::kStatic);
  semantic.probs.assign(static_cast<std::size_t>(w) * h, 0);
  semantic.index = t;

  const double drift = spec.drift_amplitude * std::sin(2.0 * std::numbers::pi * (t - 1) / spec.drift_period);

  // Background first, objects painted over in order.
  std::vector<Rgb> color(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double a = spec.background == SynthBackground::Gradient && w > 1 ? static_cast<double>(x) / (w - 1) : 0.0;
      auto mix = [&](std::uint8_t p, std::uint8_t q) { return to_byte(p + a * (q - p) + drift); };
      color[static_cast<std::size_t>(y) * w + x] = {mix(spec.background_a.r, spec.background_b.r),
                                                    mix(spec.background_a.g, spec.background_b.g),
                                                    mix(spec.background_a.b, spec.background_b.b)};
    }
  }
  for (const auto& o : spec.objects) {
    const long left = std::lround(std::floor(o.x0 + o.vx * (t - 1)));
    const long top = std::lround(std::floor(o.y0 + o.vy * (t - 1)));
    for (int dy = 0; dy < o.height; ++dy) {
      const int y = wrap(top + dy, h);
      for (int dx = 0; dx < o.width; ++dx) {
        const int x = wrap(left + dx, w);
        const std::size_t i = static_cast<std::size_t>(y) * w + x;
        color[i] = o.color;
        gt.labels[i] = gt::kMoving;
      }
    }
  }

  const double sem_sigma = spec.noise_sigma / 255.0;
  for (std::size_t i = 0; i < color.size(); ++i) {
    const Rgb c = color[i];
    if (spec.noise_sigma > 0.0) {
      frame.set(i, {to_byte(c.r + spec.noise_sigma * rng.normal()), to_byte(c.g + spec.noise_sigma * rng.normal()),
                    to_byte(c.b + spec.noise_sigma * rng.normal())});
    } else {
      frame.set(i, c);
    }
    double p = gt.labels[i] == gt::kMoving ? spec.semantic_fidelity : 1.0 - spec.semantic_fidelity;
    if (sem_sigma > 0.0) p += sem_sigma * rng.normal();
    semantic.probs[i] = to_byte(255.0 * std::clamp(p, 0.0, 1.0));
  }
}

LoadedSequence synth_sequence(const SynthSpec& spec, std::uint64_t seed, const std::string& name) {
  spec.validate();
  LoadedSequence seq;
  seq.descriptor.name = name;
  seq.descriptor.temporal_roi = TemporalRoi{1, spec.num_frames};
  Rng rng(seed);
  for (int t = 1; t <= spec.num_frames; ++t) {
    Frame f;
    GroundTruthMask gt;
    SemanticMap sem;
    render_synth_frame(spec, t, rng, f, gt, sem);
    seq.descriptor.frames.push_back({t, {}});
    seq.frames.push_back(std::move(f));
    seq.ground_truth.emplace_back(std::move(gt));
    seq.semantics.emplace_back(std::move(sem));
  }
  return seq;
}

void synth(const SynthSpec& spec, const std::filesystem::path& out_dir, std::uint64_t seed) {
  spec.validate();
  namespace fs = std::filesystem;
  std::error_code ec;
  for (const char* sub : {"input", "groundtruth", "semantic"}) {
    fs::create_directories(out_dir / sub, ec);
    if (ec) throw IoError("cannot create " + (out_dir / sub).string() + ": " + ec.message());
  }
  Rng rng(seed);
  Frame f;
  GroundTruthMask gt;
  SemanticMap sem;
  const Size size{spec.width, spec.height};
  for (int t = 1; t <= spec.num_frames; ++t) {
    render_synth_frame(spec, t, rng, f, gt, sem);
    write_ppm(out_dir / "input" / numbered_name("in", t, ".ppm"), f);
    write_pgm(out_dir / "groundtruth" / numbered_name("gt", t, ".pgm"), size, gt.labels);
    write_pgm(out_dir / "semantic" / numbered_name("sem", t, ".pgm"), size, sem.probs);
  }
  std::ofstream roi(out_dir / "temporalROI.txt");
  if (!roi) throw IoError("cannot write temporalROI.txt in " + out_dir.string());
  roi << 1 << ' ' << spec.num_frames << '\n';
}

std::vector<std::pair<std::string, SynthSpec>> suite_specs(const SuiteOptions& o) {
  std::vector<std::pair<std::string, SynthSpec>> out;
  for (int i = 0; i < o.videos; ++i) {
    SynthSpec spec = random_synth_spec(o.seed + static_cast<std::uint64_t>(i), o.objects, o.width, o.height, o.frames);
    spec.noise_sigma = o.noise_sigma;
    spec.semantic_fidelity = o.fidelity;
    spec.drift_amplitude = o.drift_amplitude;
    char name[32];
    std::snprintf(name, sizeof name, "synth%02d", i + 1);
    out.emplace_back(name, std::move(spec));
  }
  return out;
}

std::uint64_t suite_render_seed(const SuiteOptions& o, int video) {
  return mix_seed(o.seed, static_cast<std::uint64_t>(video) + 1000);
}

std::vector<LoadedSequence> synth_suite(const SuiteOptions& o) {
  std::vector<LoadedSequence> out;
  int i = 0;
  for (const auto& [name, spec] : suite_specs(o)) out.push_back(synth_sequence(spec, suite_render_seed(o, i++), name));
  return out;
}

void write_suite(const SuiteOptions& o, const std::filesystem::path& out_dir) {
  int i = 0;
  for (const auto& [name, spec] : suite_specs(o)) synth(spec, out_dir / name, suite_render_seed(o, i++));
}

}  // namespace rtsbs
