#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "rtsbs/rng.hpp"
#include "rtsbs/types.hpp"

namespace rtsbs {

enum class ColorMetric : std::uint8_t {
  L1,  // sum of absolute channel differences, compared against R
  L2,  // Euclidean over RGB, compared against R
};

struct VibeParams {
  int num_samples = 20;
  int match_radius = 20;
  int min_matches = 2;
  int subsample = 16;  // update probability is 1/subsample
  ColorMetric metric = ColorMetric::L1;

  void validate() const;
  friend bool operator==(const VibeParams&, const VibeParams&) = default;
};

// Sample-based background model with conservative, spatially propagated updates.
//
// Each pixel keeps num_samples RGB samples. A pixel is background when at least
// min_matches samples lie within match_radius of its color. Only pixels labeled
// background write into the model: into their own sample set and into one of an
// 8-neighbor's, each with probability 1/subsample. Labels come from the caller,
// which lets the fused output drive the update instead of the raw classification.
class VibeModel {
 public:
  // Samples are drawn uniformly, with replacement, from the clamped 3x3
  // neighborhood of each pixel in first_frame.
  VibeModel(const Frame& first_frame, const VibeParams& params, std::uint64_t seed);

  Mask classify(const Frame& frame) const;
  void classify_into(const Frame& frame, Mask& out) const;

  void update(const Frame& frame, const Mask& labels);

  // classify followed by update with its own labels; returns the pre-update mask.
  Mask step(const Frame& frame);

  const VibeParams& params() const { return params_; }
  Size size() const { return size_; }
  std::span<const std::uint8_t> samples() const { return samples_; }
  Rgb sample(int x, int y, int k) const;

  // Raw little-endian dump: "VIBE1", width, height, N as uint32, then samples
  // row-major (pixel, sample, channel).
  void write_snapshot(std::ostream& out) const;
  static std::vector<std::uint8_t> read_snapshot(std::istream& in, Size& size, int& num_samples);

  friend bool operator==(const VibeModel& a, const VibeModel& b) {
    return a.params_ == b.params_ && a.size_ == b.size_ && a.samples_ == b.samples_ && a.rng_ == b.rng_;
  }

 private:
  bool is_background(const std::uint8_t* px, const std::uint8_t* samples) const;

  VibeParams params_;
  Size size_;
  std::vector<std::uint8_t> samples_;
  Rng rng_;
};

// Majority vote over the clamped 3x3 neighborhood; the binary-mask median.
Mask median_filter_3x3(const Mask& mask);

}  // namespace rtsbs
