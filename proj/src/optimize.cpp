#include "rtsbs/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace rtsbs {

Thresholds thresholds_of(const PipelineConfig& c) {
  return {c.semantic.tau_bg, c.semantic.tau_fg, c.change.tau_star_bg, c.change.tau_star_fg};
}

PipelineConfig with_thresholds(PipelineConfig c, const Thresholds& t) {
  c.semantic.tau_bg = t.tau_bg;
  c.semantic.tau_fg = t.tau_fg;
  c.change.tau_star_bg = t.tau_star_bg;
  c.change.tau_star_fg = t.tau_star_fg;
  return c;
}

int SearchSpace::lower(std::size_t axis) const {
  switch (axis) {
    case 0: return tau_bg_min;
    case 1: return tau_fg_min;
    case 2: return star_bg_min;
    default: return star_fg_min;
  }
}

int SearchSpace::upper(std::size_t axis) const {
  switch (axis) {
    case 0: return tau_bg_max;
    case 1: return tau_fg_max;
    case 2: return star_bg_max;
    default: return star_fg_max;
  }
}

bool SearchSpace::contains(const Point& p) const {
  for (std::size_t a = 0; a < 4; ++a) {
    if (p[a] < lower(a) || p[a] > upper(a)) return false;
  }
  return true;
}

SearchSpace::Point SearchSpace::sample(Rng& rng) const {
  Point p{};
  for (std::size_t a = 0; a < 4; ++a) p[a] = rng.between(lower(a), upper(a));
  return p;
}

SearchSpace::Point SearchSpace::to_point(const Thresholds& t) {
  return {static_cast<int>(std::lround(t.tau_bg * 100.0)), static_cast<int>(std::lround(t.tau_fg * 100.0)),
          t.tau_star_bg, t.tau_star_fg};
}

Thresholds SearchSpace::to_thresholds(const Point& p) {
  return {p[0] / 100.0, p[1] / 100.0, p[2], p[3]};
}

bool better(const std::optional<double>& a, const std::optional<double>& b) {
  return a && (!b || *a > *b);
}

SearchResult random_search(const Objective& objective, const SearchSpace& space, int budget, std::uint64_t seed,
                           const std::optional<Thresholds>& baseline) {
  if (budget < 1) throw ConfigError("random_search: budget must be >= 1");
  SearchResult result;
  auto record = [&](const Thresholds& params) {
    Trial trial{params, objective(params), seed, static_cast<int>(result.trials.size())};
    if (result.trials.empty() || better(trial.score, result.best.score)) result.best = trial;
    result.trials.push_back(trial);
  };

  if (baseline) record(*baseline);
  Rng rng(seed);
  for (int i = 0; i < budget; ++i) record(SearchSpace::to_thresholds(space.sample(rng)));
  return result;
}

SearchResult coordinate_refine(const Objective& objective, const SearchSpace& space, const Trial& start,
                               const RefineOptions& options) {
  SearchResult result;
  result.best = start;
  SearchSpace::Point current = SearchSpace::to_point(start.params);
  if (!space.contains(current)) throw ConfigError("coordinate_refine: start lies outside the search space");

  const int first_id = options.first_trial_id >= 0 ? options.first_trial_id : start.budget_id + 1;
  std::map<SearchSpace::Point, std::optional<double>> seen{{current, start.score}};
  auto evaluate = [&](const SearchSpace::Point& p) {
    if (auto it = seen.find(p); it != seen.end()) return it->second;
    const Thresholds params = SearchSpace::to_thresholds(p);
    Trial trial{params, objective(params), start.seed, first_id + static_cast<int>(result.trials.size())};
    result.trials.push_back(trial);
    seen.emplace(p, trial.score);
    return trial.score;
  };

  std::array<int, 4> stride = options.initial_stride;
  for (auto& s : stride) s = std::max(1, s);

  for (int round = 0; round < options.rounds; ++round) {
    bool improved = false;
    for (std::size_t axis = 0; axis < 4; ++axis) {
      SearchSpace::Point best_point = current;
      std::optional<double> best_score = result.best.score;
      for (int k = 1; k <= options.steps_per_axis; ++k) {
        for (int sign : {-1, 1}) {
          SearchSpace::Point p = current;
          p[axis] += sign * k * stride[axis];
          if (!space.contains(p)) continue;
          const auto score = evaluate(p);
          if (better(score, best_score)) {
            best_score = score;
            best_point = p;
          }
        }
      }
      if (best_point != current) {
        current = best_point;
        const Thresholds params = SearchSpace::to_thresholds(current);
        auto it = std::find_if(result.trials.begin(), result.trials.end(),
                               [&](const Trial& t) { return t.params == params; });
        result.best = *it;
        improved = true;
      }
    }
    if (!improved) {
      if (std::all_of(stride.begin(), stride.end(), [](int s) { return s == 1; })) break;
      for (auto& s : stride) s = std::max(1, s / 2);
    }
  }
  return result;
}

SearchResult optimize(const Objective& objective, const OptimizeOptions& options,
                      const std::optional<Thresholds>& baseline) {
  SearchResult global = random_search(objective, options.space, options.budget, options.seed, baseline);
  RefineOptions refine = options.refine;
  refine.first_trial_id = static_cast<int>(global.trials.size());
  SearchResult refined = coordinate_refine(objective, options.space, global.best, refine);
  global.best = refined.best;
  global.trials.insert(global.trials.end(), refined.trials.begin(), refined.trials.end());
  return global;
}

Objective make_objective(const std::vector<LoadedSequence>& seqs, const PipelineConfig& base, int parallel) {
  return [&seqs, base, parallel](const Thresholds& t) { return evaluate(seqs, with_thresholds(base, t), parallel).overall; };
}

std::map<std::string, SearchResult> scene_specific(const std::vector<LoadedSequence>& seqs,
                                                   const PipelineConfig& base, const OptimizeOptions& options,
                                                   const std::optional<Thresholds>& baseline) {
  std::map<std::string, SearchResult> out;
  for (const auto& seq : seqs) {
    Objective objective = [&seq, &base](const Thresholds& t) {
      return run_sequence(seq, with_thresholds(base, t)).score.f1();
    };
    out[seq.descriptor.name] = optimize(objective, options, baseline);
  }
  return out;
}

void write_trial_csv(std::ostream& out, const std::vector<Trial>& trials) {
  out << "trial,tau_bg,tau_fg,tau_star_bg,tau_star_fg,f1\n";
  char buf[64];
  for (const auto& t : trials) {
    std::snprintf(buf, sizeof buf, "%.2f,%.2f", t.params.tau_bg, t.params.tau_fg);
    out << t.budget_id << ',' << buf << ',' << t.params.tau_star_bg << ',' << t.params.tau_star_fg << ','
        << format_score(t.score) << '\n';
  }
}

}  // namespace rtsbs
