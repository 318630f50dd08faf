#include "rtsbs/eval.hpp"

#include <cstdio>
#include <ostream>

namespace rtsbs {

void accumulate(Confusion& conf, const Mask& predicted, const GroundTruthMask& gt) {
  require_same_size(predicted.size(), gt.size(), "accumulate");
  if (gt.labels.size() != predicted.pixel_count()) throw DimensionError("accumulate: ground truth buffer size");
  Confusion local;
  for (std::size_t i = 0; i < gt.labels.size(); ++i) {
    const std::uint8_t g = gt.labels[i];
    const bool fg = predicted[i] == Label::FG;
    if (g == gt::kMoving) {
      fg ? ++local.tp : ++local.fn;
    } else if (g == gt::kStatic || g == gt::kShadow) {
      fg ? ++local.fp : ++local.tn;
    }
  }
  conf += local;
}

void accumulate(Confusion& conf, const Mask& predicted, const GroundTruthMask& gt, int t,
                const std::optional<TemporalRoi>& roi) {
  if (roi && !roi->contains(t)) return;
  accumulate(conf, predicted, gt);
}

std::optional<double> f1(const Confusion& c) {
  const double denom = 2.0 * static_cast<double>(c.tp) + static_cast<double>(c.fp) + static_cast<double>(c.fn);
  if (denom == 0.0) return std::nullopt;
  return 2.0 * static_cast<double>(c.tp) / denom;
}

std::optional<double> precision(const Confusion& c) {
  if (c.tp + c.fp == 0) return std::nullopt;
  return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
}

std::optional<double> recall(const Confusion& c) {
  if (c.tp + c.fn == 0) return std::nullopt;
  return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

ScoreReport make_report(const std::vector<VideoScore>& videos) {
  std::vector<NamedScore> named;
  for (const auto& v : videos) named.push_back({v.name, v.category, v.f1()});
  return make_report(named);
}

ScoreReport make_report(const std::vector<NamedScore>& videos) {
  ScoreReport r;
  std::map<std::string, std::pair<double, int>> sums;
  for (const auto& v : videos) {
    const auto score = v.f1;
    r.per_video[v.name] = score;
    auto& s = sums[v.category];
    if (score) {
      s.first += *score;
      ++s.second;
    }
  }
  double total = 0.0;
  int defined = 0;
  for (const auto& [cat, s] : sums) {
    if (s.second == 0) {
      r.per_category[cat] = std::nullopt;
      continue;
    }
    const double mean = s.first / s.second;
    r.per_category[cat] = mean;
    total += mean;
    ++defined;
  }
  if (defined > 0) r.overall = total / defined;
  return r;
}

std::string format_score(const std::optional<double>& v) {
  if (!v) return {};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", *v);
  return buf;
}

void write_video_csv(std::ostream& out, const std::vector<VideoScore>& videos) {
  out << "video,tp,fp,fn,tn,f1\n";
  for (const auto& v : videos) {
    const auto& c = v.confusion;
    out << v.name << ',' << c.tp << ',' << c.fp << ',' << c.fn << ',' << c.tn << ',' << format_score(v.f1()) << '\n';
  }
}

}  // namespace rtsbs
