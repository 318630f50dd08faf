#pragma once

#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "rtsbs/experiment.hpp"
#include "rtsbs/rng.hpp"
#include "rtsbs/synth.hpp"
#include "rtsbs/vibe.hpp"

namespace testing {

namespace fs = std::filesystem;
using namespace rtsbs;

// Scratch directory removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "rtsbs") {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            (tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& s) const { return path_ / s; }

 private:
  fs::path path_;
};

inline std::vector<char> read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_bytes(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
}

inline Frame random_frame(Rng& rng, int w, int h, int t = 1) {
  Frame f(w, h, t);
  for (auto& v : f.data) v = static_cast<std::uint8_t>(rng.below(256));
  return f;
}

inline SemanticMap random_map(Rng& rng, int w, int h, int t = 1) {
  SemanticMap m{w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h), t};
  for (auto& v : m.probs) v = static_cast<std::uint8_t>(rng.below(256));
  return m;
}

inline Mask random_mask(Rng& rng, int w, int h) {
  Mask m(w, h);
  for (auto& v : m.pixels()) v = rng.below(2) ? Label::FG : Label::BG;
  return m;
}

// Small noisy sequence used by the equivalence checks.
inline LoadedSequence small_sequence(std::uint64_t seed, int w = 64, int h = 48, int frames = 30) {
  SynthSpec spec = random_synth_spec(seed, 2, w, h, frames);
  spec.noise_sigma = 8.0;
  spec.semantic_fidelity = 0.9;
  return synth_sequence(spec, mix_seed(seed, 99), "seq" + std::to_string(seed));
}

inline std::vector<Mask> pipeline_masks(const LoadedSequence& seq, const PipelineConfig& config) {
  std::vector<Mask> out;
  Pipeline p(config, seq.frames.front());
  for (std::size_t k = 0; k < seq.frames.size(); ++k) {
    const int t = seq.frames[k].index;
    const AvailabilityMask avail = p.availability(t);
    const SemanticMap* map = any_available(avail) ? &*seq.semantics[k] : nullptr;
    out.push_back(p.process_frame(seq.frames[k], map, avail, t).output_mask);
  }
  return out;
}

// ---- independent reference fusions ----
//
// These re-derive the behavior of the fused detector from the verbal rules
// rather than from the lookup tables: a determinate semantic decision
// overrides the background subtractor, "?" defers to it. They share only the
// ViBe model with the library.

enum class RefPolicy { Sbs, NeverRepeat, AlwaysRepeat };

struct RefBaseline {
  std::vector<std::uint8_t> m;
  std::vector<bool> seen;
};

inline int ref_decision(std::uint8_t p, std::uint8_t m, double tau_bg, double tau_fg) {
  const double ps = p / 255.0;
  if (ps <= tau_bg) return 0;
  if (ps - m / 255.0 >= tau_fg) return 1;
  return 2;
}

inline Label ref_override(Label b, int s) {
  if (s == 0) return Label::BG;
  if (s == 1) return Label::FG;
  return b;
}

inline std::vector<Mask> reference_masks(const LoadedSequence& seq, const PipelineConfig& c, RefPolicy policy) {
  const Frame& first = seq.frames.front();
  const std::size_t n = first.pixel_count();
  VibeModel vibe(first, c.vibe, c.seed);
  Rng sem_rng(mix_seed(c.seed, 1));
  RefBaseline base{std::vector<std::uint8_t>(n, 0), std::vector<bool>(n, false)};
  std::vector<int> cached(n, 2);
  std::vector<Mask> out;
  const int x = policy == RefPolicy::Sbs ? 1 : c.x;
  const auto phi_s = static_cast<std::uint32_t>(c.semantic_subsample());

  for (std::size_t k = 0; k < seq.frames.size(); ++k) {
    const Frame& f = seq.frames[k];
    const int t = f.index;
    const bool fresh = (t - 1) % x == 0;
    const Mask b = vibe.classify(f);
    Mask d = b;
    if (fresh) {
      const SemanticMap& map = *seq.semantics[k];
      for (std::size_t i = 0; i < n; ++i) {
        if (!base.seen[i]) {
          base.m[i] = map.probs[i];
          base.seen[i] = true;
        }
        cached[i] = ref_decision(map.probs[i], base.m[i], c.semantic.tau_bg, c.semantic.tau_fg);
        d[i] = ref_override(b[i], cached[i]);
      }
    } else if (policy == RefPolicy::AlwaysRepeat) {
      for (std::size_t i = 0; i < n; ++i) d[i] = ref_override(b[i], cached[i]);
    }
    vibe.update(f, c.feedback ? d : b);
    if (fresh) {
      const SemanticMap& map = *seq.semantics[k];
      const Mask& labels = c.feedback && c.semantic_feedback ? d : b;
      for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] == Label::BG && sem_rng.below(phi_s) == 0) base.m[i] = map.probs[i];
      }
    }
    out.push_back(d);
  }
  return out;
}

}  // namespace testing
