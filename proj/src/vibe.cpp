#include "rtsbs/vibe.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <string>

namespace rtsbs {

namespace {

constexpr std::array<int, 8> kNeighborDx{-1, 0, 1, -1, 1, -1, 0, 1};
constexpr std::array<int, 8> kNeighborDy{-1, -1, -1, 0, 0, 1, 1, 1};

void check_frame(const Frame& f, Size expected) {
  require_same_size(f.size(), expected, "vibe");
  if (f.data.size() != f.pixel_count() * 3) throw DimensionError("vibe: frame buffer size mismatch");
}

void put_u32(std::ostream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                     static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
  out.write(b, 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw FormatError("vibe snapshot: truncated header");
  return std::uint32_t{b[0]} | (std::uint32_t{b[1]} << 8) | (std::uint32_t{b[2]} << 16) | (std::uint32_t{b[3]} << 24);
}

}  // namespace

void VibeParams::validate() const {
  if (num_samples < 1) throw ConfigError("vibe: N must be >= 1");
  if (min_matches < 1 || min_matches > num_samples) throw ConfigError("vibe: min_matches must lie in [1, N]");
  if (subsample < 1) throw ConfigError("vibe: phi must be >= 1");
  if (match_radius < 0) throw ConfigError("vibe: R must be >= 0");
}

VibeModel::VibeModel(const Frame& first, const VibeParams& params, std::uint64_t seed)
    : params_(params), size_(first.size()), rng_(seed) {
  params_.validate();
  if (first.width <= 0 || first.height <= 0) throw DimensionError("vibe: empty first frame");
  check_frame(first, size_);

  const int w = size_.width;
  const int h = size_.height;
  const auto n = static_cast<std::size_t>(params_.num_samples);
  samples_.resize(size_.area() * n * 3);
  std::uint8_t* out = samples_.data();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (std::size_t k = 0; k < n; ++k) {
        const int sx = std::clamp(x + rng_.between(-1, 1), 0, w - 1);
        const int sy = std::clamp(y + rng_.between(-1, 1), 0, h - 1);
        const Rgb c = first.at(sx, sy);
        *out++ = c.r;
        *out++ = c.g;
        *out++ = c.b;
      }
    }
  }
}

bool VibeModel::is_background(const std::uint8_t* px, const std::uint8_t* s) const {
  const int n = params_.num_samples;
  const int need = params_.min_matches;
  const int r = params_.match_radius;
  int matches = 0;
  if (params_.metric == ColorMetric::L1) {
    for (int k = 0; k < n; ++k, s += 3) {
      const int d = std::abs(px[0] - s[0]) + std::abs(px[1] - s[1]) + std::abs(px[2] - s[2]);
      if (d <= r && ++matches >= need) return true;
    }
  } else {
    const int r2 = r * r;
    for (int k = 0; k < n; ++k, s += 3) {
      const int d0 = px[0] - s[0];
      const int d1 = px[1] - s[1];
      const int d2 = px[2] - s[2];
      if (d0 * d0 + d1 * d1 + d2 * d2 <= r2 && ++matches >= need) return true;
    }
  }
  return false;
}

void VibeModel::classify_into(const Frame& frame, Mask& out) const {
  check_frame(frame, size_);
  if (out.size() != size_) out = Mask(size_);
  const std::size_t stride = static_cast<std::size_t>(params_.num_samples) * 3;
  const std::uint8_t* px = frame.data.data();
  const std::uint8_t* s = samples_.data();
  const std::size_t count = size_.area();
  for (std::size_t i = 0; i < count; ++i, px += 3, s += stride) {
    out[i] = is_background(px, s) ? Label::BG : Label::FG;
  }
}

Mask VibeModel::classify(const Frame& frame) const {
  Mask out(size_);
  classify_into(frame, out);
  return out;
}

void VibeModel::update(const Frame& frame, const Mask& labels) {
  check_frame(frame, size_);
  require_same_size(labels.size(), size_, "vibe update labels");

  const int w = size_.width;
  const int h = size_.height;
  const auto n = static_cast<std::uint32_t>(params_.num_samples);
  const auto phi = static_cast<std::uint32_t>(params_.subsample);
  const std::size_t stride = static_cast<std::size_t>(n) * 3;

  auto write = [&](std::size_t pixel, std::uint32_t k, const std::uint8_t* c) {
    std::uint8_t* dst = samples_.data() + pixel * stride + static_cast<std::size_t>(k) * 3;
    dst[0] = c[0];
    dst[1] = c[1];
    dst[2] = c[2];
  };

  std::size_t i = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x, ++i) {
      if (labels[i] != Label::BG) continue;
      const std::uint8_t* c = frame.data.data() + i * 3;
      if (rng_.below(phi) == 0) write(i, rng_.below(n), c);
      if (rng_.below(phi) == 0) {
        const std::uint32_t j = rng_.below(8);
        const int nx = std::clamp(x + kNeighborDx[j], 0, w - 1);
        const int ny = std::clamp(y + kNeighborDy[j], 0, h - 1);
        write(static_cast<std::size_t>(ny) * w + nx, rng_.below(n), c);
      }
    }
  }
}

Mask VibeModel::step(const Frame& frame) {
  Mask labels = classify(frame);
  update(frame, labels);
  return labels;
}

Rgb VibeModel::sample(int x, int y, int k) const {
  const std::size_t off = ((static_cast<std::size_t>(y) * size_.width + x) * params_.num_samples + k) * 3;
  return {samples_[off], samples_[off + 1], samples_[off + 2]};
}

void VibeModel::write_snapshot(std::ostream& out) const {
  out.write("VIBE1", 5);
  put_u32(out, static_cast<std::uint32_t>(size_.width));
  put_u32(out, static_cast<std::uint32_t>(size_.height));
  put_u32(out, static_cast<std::uint32_t>(params_.num_samples));
  out.write(reinterpret_cast<const char*>(samples_.data()), static_cast<std::streamsize>(samples_.size()));
  if (!out) throw IoError("vibe snapshot: write failure");
}

std::vector<std::uint8_t> VibeModel::read_snapshot(std::istream& in, Size& size, int& num_samples) {
  char magic[5];
  if (!in.read(magic, 5) || std::string(magic, 5) != "VIBE1") throw FormatError("vibe snapshot: bad magic");
  size.width = static_cast<int>(get_u32(in));
  size.height = static_cast<int>(get_u32(in));
  num_samples = static_cast<int>(get_u32(in));
  if (size.width <= 0 || size.height <= 0 || num_samples <= 0) throw FormatError("vibe snapshot: bad header");
  std::vector<std::uint8_t> samples(size.area() * static_cast<std::size_t>(num_samples) * 3);
  if (!in.read(reinterpret_cast<char*>(samples.data()), static_cast<std::streamsize>(samples.size()))) {
    throw FormatError("vibe snapshot: truncated samples");
  }
  return samples;
}

Mask median_filter_3x3(const Mask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  Mask out(mask.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int fg = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        const int yy = std::clamp(y + dy, 0, h - 1);
        for (int dx = -1; dx <= 1; ++dx) {
          const int xx = std::clamp(x + dx, 0, w - 1);
          fg += mask(xx, yy) == Label::FG;
        }
      }
      out(x, y) = fg >= 5 ? Label::FG : Label::BG;
    }
  }
  return out;
}

}  // namespace rtsbs
