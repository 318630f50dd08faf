#include "rtsbs/fusion.hpp"

namespace rtsbs {

const char* to_string(FusionMode m) {
  switch (m) {
    case FusionMode::PureBgs: return "vibe";
    case FusionMode::Sbs: return "sbs";
    case FusionMode::RtSbs: return "rtsbs";
    case FusionMode::HeuristicNeverRepeat: return "never";
    case FusionMode::HeuristicAlwaysRepeat: return "always";
  }
  return "invalid";
}

FusionMode parse_fusion_mode(const std::string& name) {
  if (name == "vibe" || name == "bgs" || name == "purebgs") return FusionMode::PureBgs;
  if (name == "sbs") return FusionMode::Sbs;
  if (name == "rtsbs") return FusionMode::RtSbs;
  if (name == "never") return FusionMode::HeuristicNeverRepeat;
  if (name == "always") return FusionMode::HeuristicAlwaysRepeat;
  throw ConfigError("unknown fusion mode '" + name + "'");
}

void PipelineConfig::validate() const {
  vibe.validate();
  semantic.validate();
  if (schedule == ScheduleKind::Subsample && x < 1) throw ConfigError("X must be >= 1");
  if (schedule == ScheduleKind::Mask && availability_dir.empty()) {
    throw ConfigError("mask schedule requires avail_dir");
  }
  if (phi_s && *phi_s < 1) throw ConfigError("phi_s must be >= 1");
}

ChangeParams PipelineConfig::effective_change() const {
  switch (mode) {
    case FusionMode::HeuristicNeverRepeat: return {-1, -1};
    case FusionMode::HeuristicAlwaysRepeat: return {kMaxColorDistance, kMaxColorDistance};
    default: return change;
  }
}

AvailabilitySchedule PipelineConfig::make_schedule() const {
  switch (schedule) {
    case ScheduleKind::Subsample: return AvailabilitySchedule::every(x);
    case ScheduleKind::Mask: return AvailabilitySchedule::from_directory(availability_dir);
    case ScheduleKind::Never: break;
  }
  return AvailabilitySchedule::never();
}

Pipeline::Pipeline(PipelineConfig config, const Frame& first_frame)
    : config_(std::move(config)),
      change_(config_.effective_change()),
      size_(first_frame.size()),
      schedule_((config_.validate(), config_.make_schedule())),
      vibe_(first_frame, config_.vibe, config_.seed),
      semantic_model_(size_),
      cache_(size_),
      semantic_rng_(mix_seed(config_.seed, 1)),
      fresh_(size_, SemanticDecision::DontKnow),
      raw_output_(size_) {}

FrameResult Pipeline::process_frame(const Frame& frame, const SemanticMap* map, int t) {
  return process_frame(frame, map, availability(t), t);
}

FrameResult Pipeline::process_frame(const Frame& frame, const SemanticMap* map, const AvailabilityMask& availability,
                                    int t) {
  FrameResult out;
  process_into(frame, map, availability, t, out);
  return out;
}

void Pipeline::process_into(const Frame& frame, const SemanticMap* map, const AvailabilityMask& availability, int t,
                            FrameResult& out) {
  require_same_size(frame.size(), size_, "pipeline frame");
  require_same_size(availability.size(), size_, "pipeline availability");
  if (out.bgs_mask.size() != size_) out.bgs_mask = Mask(size_);
  if (out.semantic_mask.size() != size_) out.semantic_mask = SemanticMask(size_);
  if (out.change_mask.size() != size_) out.change_mask = ChangeMask(size_);
  if (out.output_mask.size() != size_) out.output_mask = Mask(size_);

  const std::size_t n = size_.area();
  Mask& b = out.bgs_mask;
  Mask& d = raw_output_;
  vibe_.classify_into(frame, b);

  if (config_.mode == FusionMode::PureBgs) {
    out.semantic_mask.fill(SemanticDecision::DontKnow);
    out.change_mask.fill(ChangeVerdict::DontCare);
    d = b;
    vibe_.update(frame, b);
    out.output_mask = config_.post_filter ? median_filter_3x3(d) : d;
    return;
  }

  const bool available = any_available(availability);
  if (available && map == nullptr) throw ScheduleError("frame " + std::to_string(t) + ": semantics scheduled but no map");
  if (!available && map != nullptr) throw ScheduleError("frame " + std::to_string(t) + ": map supplied but not scheduled");

  if (available) {
    semantic_model_.seed_missing(*map, availability);
    semantic_model_.classify(*map, availability, config_.semantic, fresh_);
    cache_.refresh(t, frame, fresh_, availability);
  }

  if (config_.mode == FusionMode::Sbs) {
    for (std::size_t i = 0; i < n; ++i) {
      const SemanticDecision s = availability[i] ? fresh_[i] : SemanticDecision::DontKnow;
      out.semantic_mask[i] = s;
      out.change_mask[i] = ChangeVerdict::DontCare;
      d[i] = combine_sbs(b[i], s);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const CacheEntry& e = cache_[i];
      const SemanticDecision s = e.decision;
      ChangeVerdict c = ChangeVerdict::DontCare;
      const bool agree = static_cast<std::uint8_t>(s) == static_cast<std::uint8_t>(b[i]);
      if (s != SemanticDecision::DontKnow && !agree) {
        // Semantics computed for this very frame cannot have drifted.
        c = e.t_star == t ? ChangeVerdict::NoChange : detect(frame.at(i), e, change_);
      }
      out.semantic_mask[i] = s;
      out.change_mask[i] = c;
      d[i] = combine_rtsbs(b[i], s, c);
    }
  }

  vibe_.update(frame, config_.feedback ? d : b);

  if (available) {
    const Mask& labels = config_.feedback && config_.semantic_feedback ? d : b;
    semantic_model_.update(*map, labels, availability, config_.semantic_subsample(), semantic_rng_);
  }

  if (config_.post_filter) {
    out.output_mask = median_filter_3x3(d);
  } else {
    out.output_mask = d;
  }
}

}  // namespace rtsbs
