#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rtsbs {

// Error hierarchy. Every failure raised by the library derives from Error so
// callers (the CLI in particular) can map categories to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error { using Error::Error; };
class FormatError : public Error { using Error::Error; };
class LayoutError : public Error { using Error::Error; };
class DimensionError : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };
class ScheduleError : public Error { using Error::Error; };
class ObjectiveError : public Error { using Error::Error; };

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

enum class Label : std::uint8_t { BG = 0, FG = 1 };

enum class SemanticDecision : std::uint8_t { BG = 0, FG = 1, DontKnow = 2 };

enum class ChangeVerdict : std::uint8_t { NoChange = 0, Change = 1, DontCare = 2 };

const char* to_string(Label v);
const char* to_string(SemanticDecision v);
const char* to_string(ChangeVerdict v);

struct Size {
  int width = 0;
  int height = 0;

  std::size_t area() const { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }
  friend bool operator==(const Size&, const Size&) = default;
};

std::string to_string(Size s);

inline void require_same_size(Size a, Size b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimension mismatch " + to_string(a) + " vs " + to_string(b));
  }
}

// Dense single-channel raster, row-major.
template <typename T>
class Raster {
 public:
  Raster() = default;
  Raster(int width, int height, T fill = T{}) : size_{width, height}, data_(size_.area(), fill) {
    if (width <= 0 || height <= 0) throw DimensionError("raster dimensions must be positive");
  }
  explicit Raster(Size s, T fill = T{}) : Raster(s.width, s.height, fill) {}

  int width() const { return size_.width; }
  int height() const { return size_.height; }
  Size size() const { return size_; }
  std::size_t pixel_count() const { return data_.size(); }

  T& operator()(int x, int y) { return data_[index(x, y)]; }
  const T& operator()(int x, int y) const { return data_[index(x, y)]; }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::span<T> pixels() { return data_; }
  std::span<const T> pixels() const { return data_; }

  void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(size_.width) + static_cast<std::size_t>(x);
  }

  Size size_{};
  std::vector<T> data_;
};

using Mask = Raster<Label>;
using SemanticMask = Raster<SemanticDecision>;
using ChangeMask = Raster<ChangeVerdict>;
using AvailabilityMask = Raster<std::uint8_t>;  // 0 = unavailable, nonzero = available

// One video timestep: 8-bit RGB, row-major, interleaved.
struct Frame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;
  int index = 0;  // 1-based frame number

  Frame() = default;
  Frame(int w, int h, int t = 0);

  Size size() const { return {width, height}; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }

  Rgb at(std::size_t i) const { return {data[3 * i], data[3 * i + 1], data[3 * i + 2]}; }
  Rgb at(int x, int y) const { return at(static_cast<std::size_t>(y) * width + x); }
  void set(std::size_t i, Rgb c) {
    data[3 * i] = c.r;
    data[3 * i + 1] = c.g;
    data[3 * i + 2] = c.b;
  }
  void set(int x, int y, Rgb c) { set(static_cast<std::size_t>(y) * width + x, c); }

  friend bool operator==(const Frame&, const Frame&) = default;
};

// Per-pixel probability of belonging to a movable-object class, quantized as v/255.
struct SemanticMap {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> probs;
  int index = 0;

  Size size() const { return {width, height}; }
  double prob(std::size_t i) const { return probs[i] / 255.0; }
};

// CDNet ground-truth codes.
namespace gt {
inline constexpr std::uint8_t kStatic = 0;
inline constexpr std::uint8_t kShadow = 50;
inline constexpr std::uint8_t kOutsideRoi = 85;
inline constexpr std::uint8_t kUnknown = 170;
inline constexpr std::uint8_t kMoving = 255;

inline constexpr bool is_valid(std::uint8_t v) {
  return v == kStatic || v == kShadow || v == kOutsideRoi || v == kUnknown || v == kMoving;
}
}  // namespace gt

struct GroundTruthMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> labels;

  Size size() const { return {width, height}; }
};

}  // namespace rtsbs
