#include "rtsbs/types.hpp"

namespace rtsbs {

const char* to_string(Label v) { return v == Label::BG ? "BG" : "FG"; }

const char* to_string(SemanticDecision v) {
  switch (v) {
    case SemanticDecision::BG: return "BG";
    case SemanticDecision::FG: return "FG";
    case SemanticDecision::DontKnow: return "?";
  }
  return "invalid";
}

const char* to_string(ChangeVerdict v) {
  switch (v) {
    case ChangeVerdict::NoChange: return "NoChange";
    case ChangeVerdict::Change: return "Change";
    case ChangeVerdict::DontCare: return "DontCare";
  }
  return "invalid";
}

std::string to_string(Size s) { return std::to_string(s.width) + "x" + std::to_string(s.height); }

Frame::Frame(int w, int h, int t) : width(w), height(h), index(t) {
  if (w <= 0 || h <= 0) throw DimensionError("frame dimensions must be positive");
  data.assign(pixel_count() * 3, 0);
}

}  // namespace rtsbs
