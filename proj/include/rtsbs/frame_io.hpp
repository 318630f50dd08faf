#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rtsbs/types.hpp"

namespace rtsbs {

namespace fs = std::filesystem;

// Single-channel 8-bit image as decoded from disk.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  Size size() const { return {width, height}; }
};

// Binary Netpbm (P5/P6, maxval 255) is always supported. PNG/JPEG go through
// OpenCV when the library was built with it; otherwise they raise FormatError.
Frame load_frame(const fs::path& path);
GrayImage load_gray(const fs::path& path);

SemanticMap load_semantic_map(const fs::path& path, Size expected);
GroundTruthMask load_ground_truth(const fs::path& path);

// Binary mask as written by write_mask: values >= 128 read as FG.
Mask load_mask(const fs::path& path);
AvailabilityMask load_availability_mask(const fs::path& path, Size expected);

void write_pgm(const fs::path& path, Size size, std::span<const std::uint8_t> data);
void write_ppm(const fs::path& path, const Frame& frame);
void write_mask(const fs::path& path, const Mask& mask);

struct FrameEntry {
  int index = 0;
  fs::path path;
};

struct TemporalRoi {
  int first = 0;
  int last = 0;

  bool contains(int t) const { return t >= first && t <= last; }
};

struct SequenceDescriptor {
  std::string name;
  std::string category;
  fs::path root;
  fs::path frames_dir;
  std::optional<fs::path> gt_dir;
  std::optional<fs::path> semantic_dir;
  std::optional<TemporalRoi> temporal_roi;
  std::vector<FrameEntry> frames;  // strictly increasing index

  // Frames outside the temporal ROI are not evaluated.
  bool in_temporal_roi(int t) const { return !temporal_roi || temporal_roi->contains(t); }
  std::optional<fs::path> gt_path(int t) const;
  std::optional<fs::path> semantic_path(int t) const;
};

// Reads the CDNet layout: input/inNNNNNN.*, optional groundtruth/gtNNNNNN.*,
// semantic/semNNNNNN.pgm and temporalROI.txt.
SequenceDescriptor discover_cdnet_sequence(const fs::path& root, std::string category = {});

// A directory that is itself a sequence, a flat directory of sequences, or a
// CDNet tree of category directories holding sequences.
std::vector<SequenceDescriptor> discover_dataset(const fs::path& root);

std::string numbered_name(const std::string& prefix, int index, const std::string& ext);

}  // namespace rtsbs
