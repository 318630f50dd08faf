#include <doctest.h>

#include <cmath>
#include <set>

#include "rtsbs/rng.hpp"
#include "rtsbs/types.hpp"

using namespace rtsbs;

TEST_CASE("mix_seed matches the published SplitMix64 sequence") {
  // First two outputs of SplitMix64 from state 0.
  static_assert(mix_seed(0, 0) == 0xE220A8397B1DCDAFULL);
  static_assert(mix_seed(0, 1) == 0x6E789E6AA1B965F4ULL);
  CHECK(mix_seed(1, 0) != mix_seed(0, 0));
}

TEST_CASE("Rng streams are reproducible") {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next_u32();
    CHECK(x == b.next_u32());
    differs |= x != c.next_u32();
  }
  CHECK(differs);
  CHECK(a == b);
}

TEST_CASE("below and between stay in range and reach both ends") {
  Rng rng(7);
  for (std::uint32_t n : {1u, 2u, 3u, 16u, 1000u, 0x80000001u}) {
    for (int i = 0; i < 2000; ++i) CHECK(rng.below(n) < n);
  }
  std::set<int> seen;
  for (int i = 0; i < 5000; ++i) {
    const int v = rng.between(-1, 3);
    CHECK(v >= -1);
    CHECK(v <= 3);
    seen.insert(v);
  }
  CHECK(seen.size() == 5);
}

TEST_CASE("uniform and normal moments") {
  Rng rng(11);
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    su += u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
  }
  CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(std::abs(sn / n) < 0.01);
  CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("Raster indexing is row-major") {
  Raster<int> r(3, 2, 7);
  CHECK(r.size() == Size{3, 2});
  CHECK(r.pixel_count() == 6);
  r(2, 1) = 5;
  CHECK(r[5] == 5);
  r.fill(1);
  CHECK(r == Raster<int>(3, 2, 1));
  CHECK_THROWS_AS(Raster<int>(0, 2), DimensionError);
}

TEST_CASE("Frame pixel access") {
  Frame f(4, 3, 9);
  CHECK(f.data.size() == 36);
  CHECK(f.index == 9);
  f.set(3, 2, {1, 2, 3});
  CHECK(f.at(11) == Rgb{1, 2, 3});
  CHECK(f.data[33] == 1);
  CHECK(f.data[35] == 3);
}

TEST_CASE("size checks and names") {
  CHECK_NOTHROW(require_same_size({2, 3}, {2, 3}, "x"));
  CHECK_THROWS_AS(require_same_size({2, 3}, {3, 2}, "x"), DimensionError);
  CHECK(std::string(to_string(SemanticDecision::DontKnow)).size() > 0);
  CHECK(gt::is_valid(gt::kShadow));
  CHECK_FALSE(gt::is_valid(1));
}
