#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rtsbs/frame_io.hpp"
#include "rtsbs/types.hpp"

namespace rtsbs {

struct Confusion {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  Confusion& operator+=(const Confusion& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    tn += o.tn;
    return *this;
  }
  friend Confusion operator+(Confusion a, const Confusion& b) { return a += b; }
  friend bool operator==(const Confusion&, const Confusion&) = default;
};

// CDNet convention: 85 (outside ROI) and 170 (unknown motion) are skipped,
// 0 and 50 (hard shadow) are negatives, 255 is positive.
void accumulate(Confusion& conf, const Mask& predicted, const GroundTruthMask& gt);

// Same, but frames outside the temporal ROI contribute nothing.
void accumulate(Confusion& conf, const Mask& predicted, const GroundTruthMask& gt, int t,
                const std::optional<TemporalRoi>& roi);

// 2tp / (2tp + fp + fn); empty when the denominator is zero.
std::optional<double> f1(const Confusion& c);
std::optional<double> precision(const Confusion& c);
std::optional<double> recall(const Confusion& c);

struct VideoScore {
  std::string name;
  std::string category;
  Confusion confusion;

  std::optional<double> f1() const { return rtsbs::f1(confusion); }
};

struct ScoreReport {
  std::map<std::string, std::optional<double>> per_video;
  std::map<std::string, std::optional<double>> per_category;
  std::optional<double> overall;  // mean over categories of the mean over their videos
};

// Undefined video scores are left out of the means. Videos without a category
// share the empty category, so a flat suite averages over videos directly.
ScoreReport make_report(const std::vector<VideoScore>& videos);

// Same aggregation over scores that were computed elsewhere.
struct NamedScore {
  std::string name;
  std::string category;
  std::optional<double> f1;
};
ScoreReport make_report(const std::vector<NamedScore>& videos);

// "video,tp,fp,fn,tn,f1"; an undefined F1 is written as an empty field.
void write_video_csv(std::ostream& out, const std::vector<VideoScore>& videos);

std::string format_score(const std::optional<double>& v);

}  // namespace rtsbs
