#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rtsbs/experiment.hpp"
#include "rtsbs/fusion.hpp"
#include "rtsbs/rng.hpp"

namespace rtsbs {

// The four tunable thresholds of the fused detector.
struct Thresholds {
  double tau_bg = 0.0;
  double tau_fg = 0.0;
  int tau_star_bg = 0;
  int tau_star_fg = 0;

  friend bool operator==(const Thresholds&, const Thresholds&) = default;
};

Thresholds thresholds_of(const PipelineConfig& config);
PipelineConfig with_thresholds(PipelineConfig config, const Thresholds& t);

// Integer lattice over the thresholds. The probability thresholds move in
// steps of 1/100; the color-distance thresholds are integers.
struct SearchSpace {
  int tau_bg_min = 0, tau_bg_max = 100;    // hundredths
  int tau_fg_min = 0, tau_fg_max = 100;    // hundredths
  int star_bg_min = -1, star_bg_max = kMaxColorDistance;
  int star_fg_min = -1, star_fg_max = kMaxColorDistance;

  using Point = std::array<int, 4>;

  bool contains(const Point& p) const;
  bool contains(const Thresholds& t) const { return contains(to_point(t)); }
  Point sample(Rng& rng) const;
  int lower(std::size_t axis) const;
  int upper(std::size_t axis) const;

  static Point to_point(const Thresholds& t);
  static Thresholds to_thresholds(const Point& p);
};

struct Trial {
  Thresholds params;
  std::optional<double> score;
  std::uint64_t seed = 0;
  int budget_id = 0;  // position in the trial sequence
};

// Higher defined score wins; undefined loses to anything defined.
bool better(const std::optional<double>& a, const std::optional<double>& b);

using Objective = std::function<std::optional<double>(const Thresholds&)>;

struct SearchResult {
  Trial best;
  std::vector<Trial> trials;
};

// `budget` uniform samples from the space. A baseline, when given, is
// evaluated first as trial 0, so the result never scores below it. Ties keep
// the earliest trial.
SearchResult random_search(const Objective& objective, const SearchSpace& space, int budget, std::uint64_t seed,
                           const std::optional<Thresholds>& baseline = std::nullopt);

struct RefineOptions {
  int steps_per_axis = 2;
  int rounds = 4;
  std::array<int, 4> initial_stride{5, 5, 32, 32};  // lattice units per step
  int first_trial_id = -1;                            // -1: continue after the start trial
};

// Coordinate hill climbing from `start`: each round visits the four axes in
// turn and moves to the best strictly improving neighbor. A round without
// improvement halves the strides; at unit strides it ends the search.
SearchResult coordinate_refine(const Objective& objective, const SearchSpace& space, const Trial& start,
                               const RefineOptions& options);

struct OptimizeOptions {
  SearchSpace space;
  int budget = 50;
  RefineOptions refine;
  std::uint64_t seed = 0;
};

// Random search followed by coordinate refinement; the log holds every trial.
SearchResult optimize(const Objective& objective, const OptimizeOptions& options,
                      const std::optional<Thresholds>& baseline = std::nullopt);

// Overall F1 over the sequences, with the pipeline seed held fixed.
Objective make_objective(const std::vector<LoadedSequence>& seqs, const PipelineConfig& base, int parallel = 1);

// One independent search per video. `baseline` (typically the global optimum)
// is injected into every per-video search.
std::map<std::string, SearchResult> scene_specific(const std::vector<LoadedSequence>& seqs,
                                                   const PipelineConfig& base, const OptimizeOptions& options,
                                                   const std::optional<Thresholds>& baseline = std::nullopt);

// "trial,tau_bg,tau_fg,tau_star_bg,tau_star_fg,f1"
void write_trial_csv(std::ostream& out, const std::vector<Trial>& trials);

}  // namespace rtsbs
