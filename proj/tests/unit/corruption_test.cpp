#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pse/corruption.hpp"
#include "pse/error.hpp"
#include "pse/pipeline.hpp"

using namespace pse;
using pse::testing::rect_mask;

namespace {

bool subset_of(const MassMap2D& a, const MassMap2D& b) {
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      if (a.at(x, y) > 0.0 && b.at(x, y) == 0.0) return false;
    }
  }
  return true;
}

}  // namespace

TEST(Dropout, ZeroIsIdentity) {
  const auto m = rect_mask(12, 12, 2, 2, 9, 9);
  EXPECT_EQ(corrupt_mask(m, {CorruptionKind::Dropout, 0.0, 1}), m);
}

TEST(Dropout, HalfOfHundredPixels) {
  const auto m = rect_mask(20, 20, 5, 5, 15, 15);
  ASSERT_EQ(m.member_count(), 100u);
  const auto d = corrupt_mask(m, {CorruptionKind::Dropout, 0.5, 42});
  EXPECT_EQ(d.member_count(), 50u);
  EXPECT_TRUE(subset_of(d, m));
}

TEST(Dropout, AlwaysSubsetAndSeeded) {
  std::mt19937_64 rng(307);
  for (int k = 0; k < 40; ++k) {
    const auto m = pse::testing::random_mask(rng, 16, 16);
    const double p = 0.05 * (k % 20);
    const CorruptionSpec spec{CorruptionKind::Dropout, p, static_cast<std::uint64_t>(k)};
    const auto d = corrupt_mask(m, spec);
    EXPECT_TRUE(subset_of(d, m));
    const auto n = m.member_count();
    const auto removed = static_cast<std::size_t>(std::floor(p * static_cast<double>(n)));
    EXPECT_EQ(d.member_count(), n - removed);
    EXPECT_EQ(d, corrupt_mask(m, spec));
  }
}

TEST(Jitter, TranslatesRigidlyInFrame) {
  const auto m = rect_mask(40, 40, 15, 15, 25, 25);
  bool moved = false;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto j = corrupt_mask(m, {CorruptionKind::Jitter, 5.0, seed});
    EXPECT_EQ(j.member_count(), m.member_count());
    const auto b0 = bounding_box(m);
    const auto b1 = bounding_box(j);
    const int dx = b1.x_min - b0.x_min;
    const int dy = b1.y_min - b0.y_min;
    EXPECT_LE(std::abs(dx), 5);
    EXPECT_LE(std::abs(dy), 5);
    EXPECT_EQ(b1.x_max - b1.x_min, b0.x_max - b0.x_min);
    moved = moved || dx != 0 || dy != 0;
  }
  EXPECT_TRUE(moved);
}

TEST(Jitter, ClipsAtFrame) {
  const auto m = rect_mask(10, 10, 0, 0, 10, 10);
  std::size_t smallest = m.member_count();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    smallest = std::min(smallest, corrupt_mask(m, {CorruptionKind::Jitter, 3.0, seed}).member_count());
  }
  EXPECT_LT(smallest, m.member_count());
}

TEST(Jitter, ZeroRadiusIsIdentity) {
  const auto m = rect_mask(10, 10, 2, 3, 6, 7);
  EXPECT_EQ(corrupt_mask(m, {CorruptionKind::Jitter, 0.0, 9}), m);
}

TEST(Opening, SolidRectangleUnchanged) {
  const auto m = rect_mask(20, 20, 5, 5, 15, 15);
  EXPECT_EQ(corrupt_mask(m, {CorruptionKind::Opening, 1.0, 0}), m);
}

TEST(Opening, RemovesSpecksAndThinLines) {
  auto m = rect_mask(20, 20, 5, 5, 15, 15);
  m.set(1, 1, 1.0);
  for (int x = 0; x < 20; ++x) m.set(x, 18, 1.0);
  EXPECT_EQ(corrupt_mask(m, {CorruptionKind::Opening, 1.0, 0}), rect_mask(20, 20, 5, 5, 15, 15));
}

TEST(Morphology, ErodeDilate) {
  const auto m = rect_mask(7, 7, 1, 1, 6, 6);
  EXPECT_EQ(erode3x3(m), rect_mask(7, 7, 2, 2, 5, 5));
  EXPECT_EQ(dilate3x3(rect_mask(7, 7, 3, 3, 4, 4)), rect_mask(7, 7, 2, 2, 5, 5));
  // Out-of-frame neighbours are ignored, so a full frame survives erosion.
  const auto full = rect_mask(4, 4, 0, 0, 4, 4);
  EXPECT_EQ(erode3x3(full), full);
}

TEST(CorruptionSpec, RejectsOutOfDomain) {
  const auto m = rect_mask(4, 4, 0, 0, 2, 2);
  EXPECT_THROW(corrupt_mask(m, {CorruptionKind::Dropout, 1.5, 0}), ContractError);
  EXPECT_THROW(corrupt_mask(m, {CorruptionKind::Dropout, -0.1, 0}), ContractError);
  EXPECT_THROW(corrupt_mask(m, {CorruptionKind::Jitter, -1.0, 0}), ContractError);
  EXPECT_THROW(corrupt_mask(m, {CorruptionKind::Opening, 1.5, 0}), ContractError);
  // Non-binary weights are treated as membership.
  EXPECT_EQ(corrupt_mask(MassMap2D(2, 1, {0.5, 2.0}), {CorruptionKind::Dropout, 0.0, 0}),
            MassMap2D(2, 1, {1.0, 1.0}));
}

TEST(Rng, UniformIndexInRangeAndUnbiasedEnough) {
  std::mt19937_64 rng(1);
  std::vector<int> counts(3, 0);
  for (int i = 0; i < 30000; ++i) {
    const auto v = uniform_index(rng, 3);
    ASSERT_LT(v, 3u);
    ++counts[v];
  }
  for (int c : counts) EXPECT_NEAR(c, 10000, 400);
  for (int i = 0; i < 1000; ++i) {
    const double u = uniform_unit(rng);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}
