#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "lpptw/rng.hpp"

using lpptw::RngStream;
using lpptw::philox4x32;

// Known-answer vectors of the reference Philox4x32-10 implementation.
TEST(Philox, KnownAnswerZero) {
  const auto out = philox4x32({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out[0], 0x6627e8d5u);
  EXPECT_EQ(out[1], 0xe169c58du);
  EXPECT_EQ(out[2], 0xbc57ac4cu);
  EXPECT_EQ(out[3], 0x9b00dbd8u);
}

TEST(Philox, KnownAnswerOnes) {
  const auto out = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                              {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(out[0], 0x408f276du);
  EXPECT_EQ(out[1], 0x41c83b0eu);
  EXPECT_EQ(out[2], 0xa20bc7c6u);
  EXPECT_EQ(out[3], 0x6d5451fdu);
}

TEST(Philox, KnownAnswerPi) {
  const auto out = philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                              {0xa4093822u, 0x299f31d0u});
  EXPECT_EQ(out[0], 0xd16cfe09u);
  EXPECT_EQ(out[1], 0x94fdcceb);
  EXPECT_EQ(out[2], 0x5001e420u);
  EXPECT_EQ(out[3], 0x24126ea1u);
}

TEST(RngStream, SameSeedAndStreamReproduce) {
  RngStream a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(a.next_u64(), b.next_u64());
  }
  RngStream c(42, 7), d(42, 7);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(c.normal(), d.normal());
}

TEST(RngStream, DistinctStreamsDiffer) {
  std::set<std::uint64_t> firsts;
  for (std::uint64_t s = 0; s < 100; ++s) {
    RngStream r(1, s);
    firsts.insert(r.next_u64());
  }
  EXPECT_EQ(firsts.size(), 100u);
  RngStream a(1, 0), b(2, 0);
  EXPECT_NE(a.next_u64(), b.next_u64());
}

TEST(RngStream, DistinctStreamsUncorrelated) {
  RngStream a(9, lpptw::stream_id_for(lpptw::StreamTag::kWeights, 0));
  RngStream b(9, lpptw::stream_id_for(lpptw::StreamTag::kWeights, 1));
  const int n = 100000;
  double sab = 0;
  for (int i = 0; i < n; ++i) sab += a.normal() * b.normal();
  EXPECT_LT(std::abs(sab / n), 5.0 / std::sqrt(n));
}

TEST(RngStream, StreamTagsAreDisjoint) {
  EXPECT_NE(lpptw::stream_id_for(lpptw::StreamTag::kWeights, 3),
            lpptw::stream_id_for(lpptw::StreamTag::kGue, 3));
  EXPECT_EQ(lpptw::stream_id_for(lpptw::StreamTag::kGeneric, 5), 5u);
}

TEST(RngStream, UniformIsOpenInterval) {
  RngStream r(3, 0);
  double sum = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 5 * std::sqrt(1.0 / 12 / n));
}

TEST(RngStream, NormalMoments) {
  RngStream r(4, 0);
  const int n = 400000;
  double s1 = 0, s2 = 0, s4 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    s1 += z;
    s2 += z * z;
    s4 += z * z * z * z;
  }
  EXPECT_NEAR(s1 / n, 0.0, 5 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 5 * std::sqrt(2.0 / n));
  EXPECT_NEAR(s4 / n, 3.0, 5 * std::sqrt(96.0 / n));
}

TEST(RngStream, ExponentialAndGammaMeans) {
  RngStream r(5, 0);
  const int n = 200000;
  double se = 0, sg = 0, sg_small = 0, sg2 = 0;
  for (int i = 0; i < n; ++i) {
    se += r.exponential();
    const double g = r.gamma(3.5);
    sg += g;
    sg2 += g * g;
    sg_small += r.gamma(0.4);
  }
  EXPECT_NEAR(se / n, 1.0, 5 / std::sqrt(n));
  EXPECT_NEAR(sg / n, 3.5, 5 * std::sqrt(3.5 / n));
  EXPECT_NEAR(sg2 / n - (sg / n) * (sg / n), 3.5, 0.1);
  EXPECT_NEAR(sg_small / n, 0.4, 5 * std::sqrt(0.4 / n));
}

TEST(RngStream, CounterTracksBlocks) {
  RngStream r(1, 1);
  EXPECT_EQ(r.counter(), 0u);
  r.next_u64();
  EXPECT_EQ(r.counter(), 1u);
  r.next_u64();
  EXPECT_EQ(r.counter(), 1u);
  r.next_u64();
  EXPECT_EQ(r.counter(), 2u);
}
