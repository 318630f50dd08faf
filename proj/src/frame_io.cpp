#include "rtsbs/frame_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#ifdef RTSBS_HAVE_OPENCV
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#endif

namespace rtsbs {

namespace {

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failure on " + path.string());
  if (bytes.empty()) throw IoError("empty file " + path.string());
  return bytes;
}

struct Netpbm {
  int channels = 0;
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;
};

bool looks_like_netpbm(const std::vector<std::uint8_t>& bytes) {
  return bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] >= '1' && bytes[1] <= '7';
}

// Binary P5/P6 decoder. Header tokens are separated by whitespace and may be
// interleaved with '#' comments; exactly one whitespace byte precedes the raster.
Netpbm decode_netpbm(const std::vector<std::uint8_t>& bytes, const fs::path& path) {
  Netpbm img;
  if (bytes[1] == '5') {
    img.channels = 1;
  } else if (bytes[1] == '6') {
    img.channels = 3;
  } else {
    throw FormatError(path.string() + ": only binary P5/P6 Netpbm is supported");
  }

  std::size_t pos = 2;
  auto next_int = [&](const char* what) -> long {
    for (;;) {
      while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
      if (pos < bytes.size() && bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n' && bytes[pos] != '\r') ++pos;
        continue;
      }
      break;
    }
    if (pos >= bytes.size() || !std::isdigit(bytes[pos])) {
      throw FormatError(path.string() + ": malformed header (" + what + ")");
    }
    long v = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
      v = v * 10 + (bytes[pos] - '0');
      if (v > (1L << 30)) throw FormatError(path.string() + ": header value out of range");
      ++pos;
    }
    return v;
  };

  const long w = next_int("width");
  const long h = next_int("height");
  const long maxval = next_int("maxval");
  if (w <= 0 || h <= 0) throw FormatError(path.string() + ": non-positive dimensions");
  if (maxval > 255) throw FormatError(path.string() + ": 16-bit samples are not supported");
  if (maxval != 255) throw FormatError(path.string() + ": maxval must be 255");
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
    throw FormatError(path.string() + ": missing separator after header");
  }
  ++pos;

  img.width = static_cast<int>(w);
  img.height = static_cast<int>(h);
  const std::size_t need = static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * img.channels;
  if (bytes.size() - pos < need) throw FormatError(path.string() + ": truncated raster");
  img.data.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                  bytes.begin() + static_cast<std::ptrdiff_t>(pos + need));
  return img;
}

#ifdef RTSBS_HAVE_OPENCV
Netpbm decode_with_opencv(const std::vector<std::uint8_t>& bytes, const fs::path& path) {
  cv::Mat mat = cv::imdecode(bytes, cv::IMREAD_UNCHANGED);
  if (mat.empty()) throw FormatError(path.string() + ": undecodable image");
  if (mat.depth() != CV_8U) throw FormatError(path.string() + ": only 8-bit images are supported");
  Netpbm img;
  img.width = mat.cols;
  img.height = mat.rows;
  const int ch = mat.channels();
  if (ch == 1) {
    img.channels = 1;
    img.data.resize(static_cast<std::size_t>(mat.cols) * mat.rows);
    for (int y = 0; y < mat.rows; ++y) {
      std::copy_n(mat.ptr<std::uint8_t>(y), mat.cols, img.data.begin() + static_cast<std::ptrdiff_t>(y) * mat.cols);
    }
  } else if (ch == 3 || ch == 4) {
    img.channels = 3;
    img.data.resize(static_cast<std::size_t>(mat.cols) * mat.rows * 3);
    std::size_t o = 0;
    for (int y = 0; y < mat.rows; ++y) {
      const std::uint8_t* row = mat.ptr<std::uint8_t>(y);
      for (int x = 0; x < mat.cols; ++x) {
        const std::uint8_t* px = row + static_cast<std::ptrdiff_t>(x) * ch;
        img.data[o++] = px[2];
        img.data[o++] = px[1];
        img.data[o++] = px[0];
      }
    }
  } else {
    throw FormatError(path.string() + ": unsupported channel count");
  }
  return img;
}
#endif

Netpbm decode_any(const fs::path& path) {
  const auto bytes = read_file(path);
  if (looks_like_netpbm(bytes)) return decode_netpbm(bytes, path);
#ifdef RTSBS_HAVE_OPENCV
  return decode_with_opencv(bytes, path);
#else
  throw FormatError(path.string() + ": unsupported encoding (built without PNG/JPEG support)");
#endif
}

GrayImage to_gray(Netpbm img, const fs::path& path) {
  if (img.channels != 1) {
    // CDNet ground truth occasionally ships as 3-channel PNG with equal channels.
    std::vector<std::uint8_t> g(static_cast<std::size_t>(img.width) * img.height);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto r = img.data[3 * i];
      if (img.data[3 * i + 1] != r || img.data[3 * i + 2] != r) {
        throw FormatError(path.string() + ": expected a single-channel image");
      }
      g[i] = r;
    }
    img.data = std::move(g);
  }
  return GrayImage{img.width, img.height, std::move(img.data)};
}

void write_netpbm(const fs::path& path, char magic, Size size, std::span<const std::uint8_t> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create " + path.string());
  out << 'P' << magic << '\n' << size.width << ' ' << size.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("write failure on " + path.string());
}

std::optional<int> trailing_index(const std::string& stem, const std::string& prefix) {
  if (stem.size() <= prefix.size() || stem.compare(0, prefix.size(), prefix) != 0) return std::nullopt;
  int v = 0;
  for (std::size_t i = prefix.size(); i < stem.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(stem[i]))) return std::nullopt;
    if (v > 100'000'000) return std::nullopt;
    v = v * 10 + (stem[i] - '0');
  }
  return v;
}

std::optional<fs::path> first_existing(const fs::path& dir, const std::string& prefix, int t,
                                       std::initializer_list<const char*> exts) {
  for (const char* ext : exts) {
    fs::path p = dir / numbered_name(prefix, t, ext);
    std::error_code ec;
    if (fs::is_regular_file(p, ec)) return p;
  }
  return std::nullopt;
}

}  // namespace

std::string numbered_name(const std::string& prefix, int index, const std::string& ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06d", index);
  return prefix + buf + ext;
}

Frame load_frame(const fs::path& path) {
  Netpbm img = decode_any(path);
  Frame f;
  f.width = img.width;
  f.height = img.height;
  if (img.channels == 3) {
    f.data = std::move(img.data);
  } else {
    f.data.resize(img.data.size() * 3);
    for (std::size_t i = 0; i < img.data.size(); ++i) {
      f.data[3 * i] = f.data[3 * i + 1] = f.data[3 * i + 2] = img.data[i];
    }
  }
  return f;
}

GrayImage load_gray(const fs::path& path) { return to_gray(decode_any(path), path); }

SemanticMap load_semantic_map(const fs::path& path, Size expected) {
  GrayImage g = load_gray(path);
  if (g.size() != expected) {
    throw FormatError(path.string() + ": semantic map is " + to_string(g.size()) + ", expected " +
                      to_string(expected));
  }
  return SemanticMap{g.width, g.height, std::move(g.data), 0};
}

GroundTruthMask load_ground_truth(const fs::path& path) {
  GrayImage g = load_gray(path);
  for (auto v : g.data) {
    if (!gt::is_valid(v)) {
      throw FormatError(path.string() + ": invalid ground-truth label " + std::to_string(v));
    }
  }
  return GroundTruthMask{g.width, g.height, std::move(g.data)};
}

Mask load_mask(const fs::path& path) {
  GrayImage g = load_gray(path);
  Mask m(g.width, g.height);
  for (std::size_t i = 0; i < g.data.size(); ++i) m[i] = g.data[i] >= 128 ? Label::FG : Label::BG;
  return m;
}

AvailabilityMask load_availability_mask(const fs::path& path, Size expected) {
  GrayImage g = load_gray(path);
  if (g.size() != expected) throw FormatError(path.string() + ": availability mask dimension mismatch");
  AvailabilityMask m(g.width, g.height);
  for (std::size_t i = 0; i < g.data.size(); ++i) m[i] = g.data[i] != 0 ? 1 : 0;
  return m;
}

void write_pgm(const fs::path& path, Size size, std::span<const std::uint8_t> data) {
  if (data.size() != size.area()) throw DimensionError("write_pgm: buffer size does not match dimensions");
  write_netpbm(path, '5', size, data);
}

void write_ppm(const fs::path& path, const Frame& frame) {
  if (frame.data.size() != frame.pixel_count() * 3) throw DimensionError("write_ppm: malformed frame");
  write_netpbm(path, '6', frame.size(), frame.data);
}

void write_mask(const fs::path& path, const Mask& mask) {
  std::vector<std::uint8_t> bytes(mask.pixel_count());
  for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = mask[i] == Label::FG ? 255 : 0;
  write_netpbm(path, '5', mask.size(), bytes);
}

std::optional<fs::path> SequenceDescriptor::gt_path(int t) const {
  if (!gt_dir) return std::nullopt;
  return first_existing(*gt_dir, "gt", t, {".png", ".pgm", ".bmp"});
}

std::optional<fs::path> SequenceDescriptor::semantic_path(int t) const {
  if (!semantic_dir) return std::nullopt;
  return first_existing(*semantic_dir, "sem", t, {".pgm", ".png"});
}

SequenceDescriptor discover_cdnet_sequence(const fs::path& root, std::string category) {
  SequenceDescriptor d;
  d.root = root;
  d.name = root.filename().string();
  if (d.name.empty()) d.name = root.parent_path().filename().string();
  d.category = std::move(category);
  d.frames_dir = root / "input";

  std::error_code ec;
  if (!fs::is_directory(d.frames_dir, ec)) throw LayoutError(root.string() + ": no input/ directory");
  if (fs::is_directory(root / "groundtruth", ec)) d.gt_dir = root / "groundtruth";
  if (fs::is_directory(root / "semantic", ec)) d.semantic_dir = root / "semantic";

  std::map<int, fs::path> by_index;
  for (const auto& entry : fs::directory_iterator(d.frames_dir)) {
    if (!entry.is_regular_file()) continue;
    auto idx = trailing_index(entry.path().stem().string(), "in");
    if (!idx) continue;
    if (!by_index.emplace(*idx, entry.path()).second) {
      throw LayoutError(root.string() + ": duplicate frame index " + std::to_string(*idx));
    }
  }
  for (auto& [idx, p] : by_index) d.frames.push_back({idx, p});

  const fs::path roi_file = root / "temporalROI.txt";
  if (fs::is_regular_file(roi_file, ec)) {
    std::ifstream in(roi_file);
    TemporalRoi roi;
    if (!(in >> roi.first >> roi.last) || roi.first > roi.last) {
      throw LayoutError(roi_file.string() + ": expected two integers 'first last'");
    }
    d.temporal_roi = roi;
  }
  return d;
}

std::vector<SequenceDescriptor> discover_dataset(const fs::path& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw LayoutError(root.string() + ": not a directory");
  if (fs::is_directory(root / "input", ec)) return {discover_cdnet_sequence(root)};

  auto sorted_subdirs = [](const fs::path& dir) {
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.is_directory()) out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
  };

  std::vector<SequenceDescriptor> seqs;
  for (const auto& child : sorted_subdirs(root)) {
    if (fs::is_directory(child / "input", ec)) {
      seqs.push_back(discover_cdnet_sequence(child));
      continue;
    }
    for (const auto& grandchild : sorted_subdirs(child)) {
      if (fs::is_directory(grandchild / "input", ec)) {
        seqs.push_back(discover_cdnet_sequence(grandchild, child.filename().string()));
      }
    }
  }
  if (seqs.empty()) throw LayoutError(root.string() + ": no sequences found");
  return seqs;
}

}  // namespace rtsbs
