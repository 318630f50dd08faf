#include <doctest.h>

#include "rtsbs/frame_io.hpp"
#include "support.hpp"

using namespace rtsbs;
using testing::TempDir;

namespace {

void make_sequence(const fs::path& root, int frames, int w = 4, int h = 3) {
  fs::create_directories(root / "input");
  fs::create_directories(root / "groundtruth");
  Rng rng(5);
  for (int t = 1; t <= frames; ++t) {
    write_ppm(root / "input" / numbered_name("in", t, ".ppm"), testing::random_frame(rng, w, h, t));
    std::vector<std::uint8_t> g(static_cast<std::size_t>(w) * h, gt::kStatic);
    write_pgm(root / "groundtruth" / numbered_name("gt", t, ".pgm"), {w, h}, g);
  }
}

}  // namespace

TEST_CASE("PPM round trip, random frames") {
  TempDir dir;
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const int w = rng.between(1, 40);
    const int h = rng.between(1, 30);
    const Frame f = testing::random_frame(rng, w, h);
    const auto path = dir / "f.ppm";
    write_ppm(path, f);
    const Frame g = load_frame(path);
    CHECK(g.width == w);
    CHECK(g.height == h);
    CHECK(g.data == f.data);
  }
}

TEST_CASE("PGM round trip and gray frames") {
  TempDir dir;
  const std::vector<std::uint8_t> px{0, 1, 2, 127, 128, 255};
  write_pgm(dir / "g.pgm", {3, 2}, px);
  const GrayImage g = load_gray(dir / "g.pgm");
  CHECK(g.size() == Size{3, 2});
  CHECK(g.data == px);

  // A gray image read as a frame replicates the channel.
  const Frame f = load_frame(dir / "g.pgm");
  CHECK(f.at(3) == Rgb{127, 127, 127});
}

TEST_CASE("header comments are accepted") {
  TempDir dir;
  testing::write_bytes(dir / "c.pgm", std::string("P5\n# made by hand\n2 1\n# another\n255\n") + "\x05\x06");
  const GrayImage g = load_gray(dir / "c.pgm");
  CHECK(g.data == std::vector<std::uint8_t>{5, 6});
}

TEST_CASE("malformed inputs") {
  TempDir dir;
  CHECK_THROWS_AS(load_frame(dir / "missing.ppm"), IoError);

  testing::write_bytes(dir / "empty.ppm", "");
  CHECK_THROWS_AS(load_frame(dir / "empty.ppm"), IoError);

  testing::write_bytes(dir / "deep.pgm", "P5\n1 1\n65535\n\x01\x02");
  CHECK_THROWS_AS(load_gray(dir / "deep.pgm"), FormatError);

  testing::write_bytes(dir / "short.ppm", "P6\n2 2\n255\nabc");
  CHECK_THROWS_AS(load_frame(dir / "short.ppm"), FormatError);

  testing::write_bytes(dir / "ascii.pgm", "P2\n1 1\n255\n7\n");
  CHECK_THROWS_AS(load_gray(dir / "ascii.pgm"), FormatError);

  testing::write_bytes(dir / "color.ppm", std::string("P6\n1 1\n255\n") + "\x01\x02\x03");
  CHECK_THROWS_AS(load_gray(dir / "color.ppm"), FormatError);
}

TEST_CASE("ground truth and semantic map loading") {
  TempDir dir;
  write_pgm(dir / "gt.pgm", {5, 1}, std::vector<std::uint8_t>{0, 50, 85, 170, 255});
  const GroundTruthMask gt = load_ground_truth(dir / "gt.pgm");
  CHECK(gt.labels == std::vector<std::uint8_t>{0, 50, 85, 170, 255});

  write_pgm(dir / "bad.pgm", {2, 1}, std::vector<std::uint8_t>{0, 100});
  CHECK_THROWS_AS(load_ground_truth(dir / "bad.pgm"), FormatError);

  write_pgm(dir / "sem.pgm", {2, 1}, std::vector<std::uint8_t>{0, 255});
  const SemanticMap m = load_semantic_map(dir / "sem.pgm", {2, 1});
  CHECK(m.prob(0) == 0.0);
  CHECK(m.prob(1) == 1.0);
  CHECK_THROWS_AS(load_semantic_map(dir / "sem.pgm", {1, 2}), FormatError);
}

TEST_CASE("mask round trip") {
  TempDir dir;
  Rng rng(3);
  const Mask m = testing::random_mask(rng, 17, 9);
  write_mask(dir / "m.pgm", m);
  CHECK(load_mask(dir / "m.pgm") == m);
  const GrayImage raw = load_gray(dir / "m.pgm");
  for (auto v : raw.data) CHECK((v == 0 || v == 255));
}

TEST_CASE("load_mask threshold") {
  TempDir dir;
  write_pgm(dir / "m.pgm", {4, 1}, std::vector<std::uint8_t>{0, 127, 128, 255});
  const Mask m = load_mask(dir / "m.pgm");
  CHECK(m[0] == Label::BG);
  CHECK(m[1] == Label::BG);
  CHECK(m[2] == Label::FG);
  CHECK(m[3] == Label::FG);
}

TEST_CASE("numbered names") {
  CHECK(numbered_name("in", 1, ".jpg") == "in000001.jpg");
  CHECK(numbered_name("bin", 123456, ".pgm") == "bin123456.pgm");
}

TEST_CASE("sequence discovery") {
  TempDir dir;
  const auto root = dir / "seq";
  make_sequence(root, 5);
  testing::write_bytes(root / "temporalROI.txt", "2 4\n");
  testing::write_bytes(root / "input" / "notes.txt", "ignored");

  const SequenceDescriptor d = discover_cdnet_sequence(root);
  CHECK(d.name == "seq");
  REQUIRE(d.frames.size() == 5);
  CHECK(d.frames.front().index == 1);
  CHECK(d.frames.back().index == 5);
  REQUIRE(d.temporal_roi);
  CHECK_FALSE(d.in_temporal_roi(1));
  CHECK(d.in_temporal_roi(4));
  CHECK(d.gt_path(3).has_value());
  CHECK_FALSE(d.semantic_path(3).has_value());
  CHECK_FALSE(d.gt_path(9).has_value());
}

TEST_CASE("frame indices sort numerically") {
  TempDir dir;
  const auto root = dir / "seq";
  make_sequence(root, 12);
  const auto d = discover_cdnet_sequence(root);
  for (std::size_t k = 0; k + 1 < d.frames.size(); ++k) CHECK(d.frames[k].index < d.frames[k + 1].index);
}

TEST_CASE("layout errors") {
  TempDir dir;
  fs::create_directories(dir / "empty");
  CHECK_THROWS_AS(discover_cdnet_sequence(dir / "empty"), LayoutError);
  CHECK_THROWS_AS(discover_dataset(dir / "empty"), LayoutError);
  CHECK_THROWS_AS(discover_dataset(dir / "nope"), LayoutError);

  make_sequence(dir / "dup", 2);
  fs::copy_file(dir / "dup" / "input" / "in000001.ppm", dir / "dup" / "input" / "in000001.pnm");
  CHECK_THROWS_AS(discover_cdnet_sequence(dir / "dup"), LayoutError);

  make_sequence(dir / "roi", 2);
  testing::write_bytes(dir / "roi" / "temporalROI.txt", "9 3\n");
  CHECK_THROWS_AS(discover_cdnet_sequence(dir / "roi"), LayoutError);
}

TEST_CASE("dataset layouts") {
  TempDir dir;
  make_sequence(dir / "single", 2);
  CHECK(discover_dataset(dir / "single").size() == 1);

  make_sequence(dir / "flat" / "b", 2);
  make_sequence(dir / "flat" / "a", 2);
  auto flat = discover_dataset(dir / "flat");
  REQUIRE(flat.size() == 2);
  CHECK(flat[0].name == "a");
  CHECK(flat[0].category.empty());

  make_sequence(dir / "tree" / "baseline" / "highway", 2);
  make_sequence(dir / "tree" / "baseline" / "office", 2);
  make_sequence(dir / "tree" / "shadow" / "cubicle", 2);
  auto tree = discover_dataset(dir / "tree");
  REQUIRE(tree.size() == 3);
  CHECK(tree[0].category == "baseline");
  CHECK(tree[0].name == "highway");
  CHECK(tree[2].category == "shadow");
}
