#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "rtsbs/rng.hpp"
#include "rtsbs/types.hpp"

namespace rtsbs {

struct SemanticParams {
  double tau_bg = 0.3;  // p_S at or below this => BG
  double tau_fg = 0.3;  // p_S - M at or above this => FG

  void validate() const;
  friend bool operator==(const SemanticParams&, const SemanticParams&) = default;
};

// Three-class decision from the semantic probability and its per-pixel
// baseline. The BG rule takes precedence when both rules hold.
constexpr SemanticDecision classify_semantic(double p, double baseline, const SemanticParams& params) {
  if (p <= params.tau_bg) return SemanticDecision::BG;
  if (p - baseline >= params.tau_fg) return SemanticDecision::FG;
  return SemanticDecision::DontKnow;
}

// Per-pixel semantic baseline M, stored with the same 8-bit quantization as the
// maps. A pixel's baseline is seeded from its first available observation.
class SemanticModel {
 public:
  explicit SemanticModel(Size size);

  Size size() const { return size_; }
  bool initialized(std::size_t i) const { return initialized_[i] != 0; }
  std::uint8_t baseline(std::size_t i) const { return baseline_[i]; }
  double baseline_prob(std::size_t i) const { return baseline_[i] / 255.0; }

  // Seeds M from p_S at available pixels that have never been observed.
  void seed_missing(const SemanticMap& map, const AvailabilityMask& availability);

  // Decisions at available pixels; unavailable pixels receive DontKnow.
  void classify(const SemanticMap& map, const AvailabilityMask& availability, const SemanticParams& params,
                SemanticMask& out) const;

  // Conservative update: at available pixels labeled BG, with probability 1/phi,
  // M <- p_S. FG pixels are never touched.
  void update(const SemanticMap& map, const Mask& labels, const AvailabilityMask& availability, int phi, Rng& rng);
  void update(const SemanticMap& map, const Mask& labels, int phi, Rng& rng);

  friend bool operator==(const SemanticModel&, const SemanticModel&) = default;

 private:
  Size size_;
  std::vector<std::uint8_t> baseline_;
  std::vector<std::uint8_t> initialized_;
};

struct CacheEntry {
  static constexpr std::int32_t kEmpty = -1;

  std::int32_t t_star = kEmpty;
  Rgb color{};
  SemanticDecision decision = SemanticDecision::DontKnow;

  constexpr bool empty() const { return t_star == kEmpty; }
  friend bool operator==(const CacheEntry&, const CacheEntry&) = default;
};

// The last semantic decision seen at each pixel, with the time and color at
// which it was taken.
class PixelSemanticCache {
 public:
  explicit PixelSemanticCache(Size size);

  Size size() const { return size_; }
  const CacheEntry& operator[](std::size_t i) const { return entries_[i]; }
  const CacheEntry& at(int x, int y) const { return entries_[static_cast<std::size_t>(y) * size_.width + x]; }

  void refresh(int t, const Frame& frame, const SemanticMask& decisions, const AvailabilityMask& availability);

  friend bool operator==(const PixelSemanticCache&, const PixelSemanticCache&) = default;

 private:
  Size size_;
  std::vector<CacheEntry> entries_;
};

// When semantic information exists for a frame, and for which pixels.
class AvailabilitySchedule {
 public:
  enum class Kind { FrameSubsample, ExplicitMask, Never };
  using Provider = std::function<AvailabilityMask(int t, Size size)>;

  // Frames 1, 1+X, 1+2X, ... carry semantics.
  static AvailabilitySchedule every(int x);
  static AvailabilitySchedule never();
  static AvailabilitySchedule explicit_masks(Provider provider);
  // Reads availNNNNNN.pgm (0 = unavailable, 255 = available); a missing file
  // means nothing is available for that frame.
  static AvailabilitySchedule from_directory(const std::filesystem::path& dir);

  Kind kind() const { return kind_; }
  int x() const { return x_; }

  AvailabilityMask at(int t, Size size) const;

 private:
  AvailabilitySchedule(Kind kind, int x, Provider provider) : kind_(kind), x_(x), provider_(std::move(provider)) {}

  Kind kind_;
  int x_;
  Provider provider_;
};

bool any_available(const AvailabilityMask& m);

}  // namespace rtsbs
