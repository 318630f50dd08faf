#pragma once

#include <cstdlib>

#include "rtsbs/semantic.hpp"
#include "rtsbs/types.hpp"

namespace rtsbs {

inline constexpr int kMaxColorDistance = 765;

// Thresholds on the L1 color distance since t*, selected by the cached
// decision. A negative threshold makes every determinate entry read as
// Change; a threshold >= kMaxColorDistance makes every entry read as NoChange.
struct ChangeParams {
  int tau_star_bg = 80;
  int tau_star_fg = 80;

  friend bool operator==(const ChangeParams&, const ChangeParams&) = default;
};

constexpr int abs_diff(int a, int b) { return a < b ? b - a : a - b; }

constexpr int l1_distance(Rgb a, Rgb b) {
  return abs_diff(a.r, b.r) + abs_diff(a.g, b.g) + abs_diff(a.b, b.b);
}

constexpr ChangeVerdict detect(Rgb current, const CacheEntry& entry, const ChangeParams& params) {
  if (entry.empty() || entry.decision == SemanticDecision::DontKnow) return ChangeVerdict::DontCare;
  const int tau = entry.decision == SemanticDecision::BG ? params.tau_star_bg : params.tau_star_fg;
  return l1_distance(current, entry.color) <= tau ? ChangeVerdict::NoChange : ChangeVerdict::Change;
}

}  // namespace rtsbs
