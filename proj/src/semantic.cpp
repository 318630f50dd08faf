#include "rtsbs/semantic.hpp"

#include <algorithm>
#include <cmath>

#include "rtsbs/frame_io.hpp"

namespace rtsbs {

namespace {

void check_map(const SemanticMap& map, Size expected) {
  require_same_size(map.size(), expected, "semantic map");
  if (map.probs.size() != expected.area()) throw DimensionError("semantic map: buffer size mismatch");
}

}  // namespace

void SemanticParams::validate() const {
  if (!(tau_bg >= 0.0 && tau_bg <= 1.0)) throw ConfigError("semantic: tau_bg must lie in [0, 1]");
  if (!(tau_fg >= -1.0 && tau_fg <= 1.0)) throw ConfigError("semantic: tau_fg must lie in [-1, 1]");
}

SemanticModel::SemanticModel(Size size) : size_(size), baseline_(size.area(), 0), initialized_(size.area(), 0) {
  if (size.width <= 0 || size.height <= 0) throw DimensionError("semantic model: empty size");
}

void SemanticModel::seed_missing(const SemanticMap& map, const AvailabilityMask& availability) {
  check_map(map, size_);
  require_same_size(availability.size(), size_, "semantic availability");
  for (std::size_t i = 0; i < baseline_.size(); ++i) {
    if (availability[i] && !initialized_[i]) {
      baseline_[i] = map.probs[i];
      initialized_[i] = 1;
    }
  }
}

void SemanticModel::classify(const SemanticMap& map, const AvailabilityMask& availability,
                             const SemanticParams& params, SemanticMask& out) const {
  check_map(map, size_);
  require_same_size(availability.size(), size_, "semantic availability");
  if (out.size() != size_) out = SemanticMask(size_);
  for (std::size_t i = 0; i < baseline_.size(); ++i) {
    out[i] = availability[i] ? classify_semantic(map.prob(i), baseline_prob(i), params) : SemanticDecision::DontKnow;
  }
}

void SemanticModel::update(const SemanticMap& map, const Mask& labels, const AvailabilityMask& availability,
                           int phi, Rng& rng) {
  check_map(map, size_);
  require_same_size(labels.size(), size_, "semantic update labels");
  require_same_size(availability.size(), size_, "semantic availability");
  if (phi < 1) throw ConfigError("semantic: phi_s must be >= 1");
  const auto n = static_cast<std::uint32_t>(phi);
  for (std::size_t i = 0; i < baseline_.size(); ++i) {
    if (!availability[i] || labels[i] != Label::BG) continue;
    if (rng.below(n) == 0) {
      baseline_[i] = map.probs[i];
      initialized_[i] = 1;
    }
  }
}

void SemanticModel::update(const SemanticMap& map, const Mask& labels, int phi, Rng& rng) {
  update(map, labels, AvailabilityMask(size_, 1), phi, rng);
}

PixelSemanticCache::PixelSemanticCache(Size size) : size_(size), entries_(size.area()) {
  if (size.width <= 0 || size.height <= 0) throw DimensionError("semantic cache: empty size");
}

void PixelSemanticCache::refresh(int t, const Frame& frame, const SemanticMask& decisions,
                                 const AvailabilityMask& availability) {
  require_same_size(frame.size(), size_, "cache frame");
  require_same_size(decisions.size(), size_, "cache decisions");
  require_same_size(availability.size(), size_, "cache availability");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!availability[i]) continue;
    CacheEntry& e = entries_[i];
    e.t_star = t;
    e.color = frame.at(i);
    e.decision = decisions[i];
  }
}

AvailabilitySchedule AvailabilitySchedule::every(int x) {
  if (x < 1) throw ConfigError("schedule: X must be >= 1");
  return AvailabilitySchedule(Kind::FrameSubsample, x, {});
}

AvailabilitySchedule AvailabilitySchedule::never() { return AvailabilitySchedule(Kind::Never, 0, {}); }

AvailabilitySchedule AvailabilitySchedule::explicit_masks(Provider provider) {
  if (!provider) throw ConfigError("schedule: explicit mask provider is empty");
  return AvailabilitySchedule(Kind::ExplicitMask, 0, std::move(provider));
}

AvailabilitySchedule AvailabilitySchedule::from_directory(const std::filesystem::path& dir) {
  return explicit_masks([dir](int t, Size size) {
    const auto path = dir / numbered_name("avail", t, ".pgm");
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) return AvailabilityMask(size, 0);
    return load_availability_mask(path, size);
  });
}

AvailabilityMask AvailabilitySchedule::at(int t, Size size) const {
  switch (kind_) {
    case Kind::FrameSubsample: {
      const bool on = ((t - 1) % x_ + x_) % x_ == 0;
      return AvailabilityMask(size, on ? 1 : 0);
    }
    case Kind::ExplicitMask: {
      AvailabilityMask m = provider_(t, size);
      require_same_size(m.size(), size, "availability provider");
      return m;
    }
    case Kind::Never:
      break;
  }
  return AvailabilityMask(size, 0);
}

bool any_available(const AvailabilityMask& m) {
  const auto px = m.pixels();
  return std::any_of(px.begin(), px.end(), [](std::uint8_t v) { return v != 0; });
}

}  // namespace rtsbs
