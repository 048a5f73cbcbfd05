#include "fbsde/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

namespace fbsde {
namespace {

// Known-answer vectors for Philox 4x32-10 (Salmon et al., SC 2011),
// frozen from an independent reference implementation of the round function.
TEST(Philox, KnownAnswerVectors) {
  {
    const PhiloxBlock blk = philox4x32({0u, 0u, 0u, 0u}, {0u, 0u});
    EXPECT_EQ(blk.word[0], 0x6627e8d5u);
    EXPECT_EQ(blk.word[1], 0xe169c58du);
    EXPECT_EQ(blk.word[2], 0xbc57ac4cu);
    EXPECT_EQ(blk.word[3], 0x9b00dbd8u);
  }
  {
    const PhiloxBlock blk =
        philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                   {0xffffffffu, 0xffffffffu});
    EXPECT_EQ(blk.word[0], 0x408f276du);
    EXPECT_EQ(blk.word[1], 0x41c83b0eu);
    EXPECT_EQ(blk.word[2], 0xa20bc7c6u);
    EXPECT_EQ(blk.word[3], 0x6d5451fdu);
  }
  {
    const PhiloxBlock blk =
        philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                   {0xa4093822u, 0x299f31d0u});
    EXPECT_EQ(blk.word[0], 0xd16cfe09u);
    EXPECT_EQ(blk.word[1], 0x94fdccebu);
    EXPECT_EQ(blk.word[2], 0x5001e420u);
    EXPECT_EQ(blk.word[3], 0x24126ea1u);
  }
}

TEST(Rng, DeterministicAndKeyed) {
  const double a = standard_normal(42, RngDomain::kBrownian, 7, 3, 1);
  const double b = standard_normal(42, RngDomain::kBrownian, 7, 3, 1);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, standard_normal(43, RngDomain::kBrownian, 7, 3, 1));
  EXPECT_NE(a, standard_normal(42, RngDomain::kBrownian, 8, 3, 1));
  EXPECT_NE(a, standard_normal(42, RngDomain::kBrownian, 7, 4, 1));
  EXPECT_NE(a, standard_normal(42, RngDomain::kBrownian, 7, 3, 0));
  EXPECT_NE(a, standard_normal(42, RngDomain::kInitialLaw, 7, 3, 1));
}

TEST(Rng, NormalMoments) {
  const std::size_t n = 200000;
  double sum = 0.0, sum_sq = 0.0, sum_cube = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = standard_normal(1234, RngDomain::kBrownian, i, 0, 0);
    sum += z;
    sum_sq += z * z;
    sum_cube += z * z * z;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  EXPECT_NEAR(mean, 0.0, 0.01);
  EXPECT_NEAR(var, 1.0, 0.02);
  EXPECT_NEAR(sum_cube / n, 0.0, 0.05);
}

TEST(Rng, StreamsDecorrelated) {
  const std::size_t n = 50000;
  double cross = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = standard_normal(99, RngDomain::kBrownian, 0, i, 0);
    const double b = standard_normal(99, RngDomain::kBrownian, 1, i, 0);
    cross += a * b;
  }
  EXPECT_NEAR(cross / n, 0.0, 0.02);
}

TEST(Rng, MixSeedSeparatesSubstreams) {
  std::set<uint64_t> seen;
  for (uint64_t salt = 0; salt < 100; ++salt)
    seen.insert(mix_seed(42, salt));
  EXPECT_EQ(seen.size(), 100u);
  EXPECT_EQ(mix_seed(42, 5), mix_seed(42, 5));
}

TEST(Rng, UniformOpenInterval) {
  for (uint32_t i = 0; i < 1000; ++i) {
    const double u = uniform_open(7, 0, i, 0);
    EXPECT_GT(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

}  // namespace
}  // namespace fbsde
