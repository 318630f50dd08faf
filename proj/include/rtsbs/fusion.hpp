#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "rtsbs/change_detect.hpp"
#include "rtsbs/semantic.hpp"
#include "rtsbs/types.hpp"
#include "rtsbs/vibe.hpp"

namespace rtsbs {

enum class FusionMode : std::uint8_t { PureBgs, Sbs, RtSbs, HeuristicNeverRepeat, HeuristicAlwaysRepeat };

const char* to_string(FusionMode m);
FusionMode parse_fusion_mode(const std::string& name);

namespace tables {

// SBS decision table, indexed [B][S]; rows L1..L6 in reading order.
inline constexpr std::array<std::array<Label, 3>, 2> kSbs{{
    // S = BG     S = FG     S = ?
    {Label::BG, Label::FG, Label::BG},  // B = BG: L2, L3, L1
    {Label::BG, Label::FG, Label::FG},  // B = FG: L5, L6, L4
}};

// RT-SBS decision table, indexed [B][S*][C]. Rows whose change verdict is
// irrelevant repeat the same output for all three verdicts.
inline constexpr std::array<std::array<std::array<Label, 3>, 3>, 2> kRtSbs{{
    {{
        // C = NoChange  C = Change  C = DontCare
        {Label::BG, Label::BG, Label::BG},  // B=BG S*=BG  L2
        {Label::FG, Label::BG, Label::BG},  // B=BG S*=FG  L3, L4
        {Label::BG, Label::BG, Label::BG},  // B=BG S*=?   L1
    }},
    {{
        {Label::BG, Label::FG, Label::FG},  // B=FG S*=BG  L6, L7
        {Label::FG, Label::FG, Label::FG},  // B=FG S*=FG  L8
        {Label::FG, Label::FG, Label::FG},  // B=FG S*=?   L5
    }},
}};

}  // namespace tables

constexpr Label combine_sbs(Label b, SemanticDecision s) {
  return tables::kSbs[static_cast<std::size_t>(b)][static_cast<std::size_t>(s)];
}

// A DontCare verdict on a row where the verdict matters (B disagrees with a
// determinate S*) has no table entry; it is resolved to the BGS label.
constexpr Label combine_rtsbs(Label b, SemanticDecision s, ChangeVerdict c) {
  return tables::kRtSbs[static_cast<std::size_t>(b)][static_cast<std::size_t>(s)][static_cast<std::size_t>(c)];
}

enum class ScheduleKind : std::uint8_t { Subsample, Never, Mask };

struct PipelineConfig {
  FusionMode mode = FusionMode::RtSbs;
  VibeParams vibe;
  SemanticParams semantic;
  ChangeParams change;

  ScheduleKind schedule = ScheduleKind::Subsample;
  int x = 5;
  std::filesystem::path availability_dir;  // used with ScheduleKind::Mask

  bool feedback = false;           // D_t instead of B_t drives the ViBe update
  bool semantic_feedback = true;   // with feedback on, D_t also drives the update of M
  std::optional<int> phi_s;        // defaults to vibe.subsample
  std::uint64_t seed = 0;
  bool post_filter = false;        // 3x3 median on the emitted mask only

  void validate() const;
  int semantic_subsample() const { return phi_s.value_or(vibe.subsample); }

  // Change thresholds after the heuristic modes force theirs.
  ChangeParams effective_change() const;
  AvailabilitySchedule make_schedule() const;

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

// Recognized keys: mode, tau_bg, tau_fg, tau_star_bg, tau_star_fg, X, schedule,
// avail_dir, feedback, semantic_feedback, phi_s, seed, N, R, min_matches, phi,
// metric, post_filter. Throws ConfigError on unknown keys or bad values.
void apply_setting(PipelineConfig& config, const std::string& key, const std::string& value);
void read_config(std::istream& in, PipelineConfig& config);
PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base = {});
void write_config(std::ostream& out, const PipelineConfig& config);
void save_config(const std::filesystem::path& path, const PipelineConfig& config);

struct FrameResult {
  Mask bgs_mask;             // B_t
  SemanticMask semantic_mask;  // decision in force this frame, fresh or cached
  ChangeMask change_mask;    // C_t
  Mask output_mask;          // D_t, after the optional post filter
};

// One video's processing state: ViBe model, semantic baseline and cache.
// Per frame: classify with ViBe, refresh semantics where available, run the
// change detector on stale cache entries, fuse, then update ViBe (with D_t
// under feedback, B_t otherwise) and finally the semantic baseline.
class Pipeline {
 public:
  Pipeline(PipelineConfig config, const Frame& first_frame);

  const PipelineConfig& config() const { return config_; }
  Size size() const { return size_; }

  // Availability comes from the configured schedule. A semantic map must be
  // supplied exactly when some pixel is available.
  FrameResult process_frame(const Frame& frame, const SemanticMap* map, int t);
  FrameResult process_frame(const Frame& frame, const SemanticMap* map, const AvailabilityMask& availability, int t);
  void process_into(const Frame& frame, const SemanticMap* map, const AvailabilityMask& availability, int t,
                    FrameResult& out);

  AvailabilityMask availability(int t) const { return schedule_.at(t, size_); }

  const VibeModel& vibe() const { return vibe_; }
  const SemanticModel& semantic_model() const { return semantic_model_; }
  const PixelSemanticCache& cache() const { return cache_; }

 private:
  PipelineConfig config_;
  ChangeParams change_;
  Size size_;
  AvailabilitySchedule schedule_;
  VibeModel vibe_;
  SemanticModel semantic_model_;
  PixelSemanticCache cache_;
  Rng semantic_rng_;
  SemanticMask fresh_;
  Mask raw_output_;
};

}  // namespace rtsbs
