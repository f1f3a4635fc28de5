#include <gtest/gtest.h>

#include <cmath>

#include "lpptw/errors.hpp"
#include "lpptw/weights.hpp"

using namespace lpptw;

namespace {

std::vector<WeightDistribution> all_variants() {
  return {WeightDistribution::gaussian(0.5, 2.0), WeightDistribution::exponential(2.0),
          WeightDistribution::geometric(0.3),     WeightDistribution::rademacher(),
          WeightDistribution::uniform(-1.0, 3.0), WeightDistribution::two_point(-1.0, 2.0 / 3.0, 2.0)};
}

}  // namespace

TEST(Sample, RademacherSupportAndMean) {
  RngStream s(1, 0);
  const auto x = sample(WeightDistribution::rademacher(), s, 100000);
  double sum = 0;
  for (double v : x) {
    ASSERT_TRUE(v == 1.0 || v == -1.0);
    sum += v;
  }
  EXPECT_NEAR(sum / x.size(), 0.0, 0.02);
}

TEST(Sample, ExponentialMoments) {
  RngStream s(2, 0);
  const auto x = sample(WeightDistribution::exponential(1.0), s, 100000);
  double s1 = 0, s2 = 0;
  for (double v : x) {
    s1 += v;
    s2 += v * v;
  }
  const double mean = s1 / x.size();
  EXPECT_NEAR(mean, 1.0, 0.02);
  EXPECT_NEAR(s2 / x.size() - mean * mean, 1.0, 0.05);
}

TEST(Sample, GeometricMean) {
  RngStream s(3, 0);
  const auto x = sample(WeightDistribution::geometric(0.5), s, 100000);
  double s1 = 0;
  for (double v : x) {
    ASSERT_EQ(v, std::floor(v));
    ASSERT_GE(v, 0.0);
    s1 += v;
  }
  EXPECT_NEAR(s1 / x.size(), 1.0, 0.03);
}

TEST(Sample, RequiresPositiveCount) {
  RngStream s(1, 0);
  EXPECT_THROW(sample(WeightDistribution::rademacher(), s, 0), PreconditionError);
}

TEST(Sample, ReproducibleAndMatchesDraw) {
  for (const auto& d : all_variants()) {
    RngStream a(11, 4), b(11, 4), c(11, 4);
    const auto x = sample(d, a, 257);
    const auto y = sample(d, b, 257);
    ASSERT_EQ(x, y) << d.descriptor();
    for (double v : x) ASSERT_EQ(v, d.draw(c)) << d.descriptor();
  }
}

// Geometric moments by direct series summation of (1-q) q^n n^p.
TEST(Moments, GeometricAgainstSeries) {
  const double q = 0.5;
  const auto d = WeightDistribution::geometric(q);
  double m[5] = {0, 0, 0, 0, 0};
  for (int n = 0; n < 2000; ++n) {
    const double p = (1 - q) * std::pow(q, n);
    for (int r = 1; r <= 4; ++r) m[r] += p * std::pow(n, r);
  }
  for (int r = 1; r <= 4; ++r) EXPECT_NEAR(d.raw_moment(r), m[r], 1e-9 * m[r]);
  EXPECT_NEAR(d.variance(), 2.0, 1e-12);
}

TEST(Moments, MonteCarloAgreesWithMetadata) {
  for (const auto& d : all_variants()) {
    RngStream s(21, 0);
    const std::size_t n = 1000000;
    const auto x = sample(d, s, n);
    for (int r : {1, 2, 4}) {
      double sum = 0, sum2 = 0;
      for (double v : x) {
        const double p = std::pow(v, r);
        sum += p;
        sum2 += p * p;
      }
      const double est = sum / n;
      const double se = std::sqrt(std::max(sum2 / n - est * est, 0.0) / n);
      EXPECT_NEAR(est, d.raw_moment(r), 5 * se + 1e-12)
          << d.descriptor() << " moment " << r;
    }
  }
}

TEST(Moments, CentralMomentsConsistent) {
  for (const auto& d : all_variants()) {
    const double mu = d.raw_moment(1);
    const double m2 = d.raw_moment(2), m3 = d.raw_moment(3), m4 = d.raw_moment(4);
    EXPECT_NEAR(d.variance(), m2 - mu * mu, 1e-9 * (1 + m2));
    EXPECT_NEAR(d.fourth_central_moment(),
                m4 - 4 * mu * m3 + 6 * mu * mu * m2 - 3 * std::pow(mu, 4), 1e-8 * (1 + m4))
        << d.descriptor();
    EXPECT_GT(d.variance(), 0.0);
  }
}

TEST(Standardize, Examples) {
  auto g = standardize(WeightDistribution::gaussian(0, 1));
  EXPECT_EQ(g.mean, 0.0);
  EXPECT_EQ(g.stddev, 1.0);
  auto e = standardize(WeightDistribution::exponential(1.0));
  EXPECT_DOUBLE_EQ(e.mean, 1.0);
  EXPECT_DOUBLE_EQ(e.stddev, 1.0);
  auto q = standardize(WeightDistribution::geometric(0.5));
  EXPECT_DOUBLE_EQ(q.mean, 1.0);
  EXPECT_NEAR(q.stddev, std::sqrt(2.0), 1e-15);
}

TEST(Validation, RejectsBadParameters) {
  EXPECT_THROW(WeightDistribution::geometric(0.0), ParameterError);
  EXPECT_THROW(WeightDistribution::geometric(1.0), ParameterError);
  EXPECT_THROW(WeightDistribution::exponential(0.0), ParameterError);
  EXPECT_THROW(WeightDistribution::exponential(-1.0), ParameterError);
  EXPECT_THROW(WeightDistribution::two_point(1.0, 0.5, 1.0), ParameterError);
  EXPECT_THROW(WeightDistribution::two_point(0.0, 1.0, 1.0), ParameterError);
  EXPECT_THROW(WeightDistribution::two_point(0.0, 0.0, 1.0), ParameterError);
  EXPECT_THROW(WeightDistribution::gaussian(0.0, 0.0), ParameterError);
  EXPECT_THROW(WeightDistribution::uniform(1.0, 1.0), ParameterError);
  EXPECT_THROW(WeightDistribution::gaussian(NAN, 1.0), ParameterError);
}

TEST(Json, RoundTrip) {
  for (const auto& d : all_variants()) {
    const auto back = WeightDistribution::from_json(d.to_json());
    EXPECT_EQ(back.descriptor(), d.descriptor());
    const auto parsed = WeightDistribution::parse(d.descriptor());
    EXPECT_EQ(parsed.descriptor(), d.descriptor());
    const auto from_text = WeightDistribution::parse(d.to_json().dump());
    EXPECT_EQ(from_text.descriptor(), d.descriptor());
  }
}

TEST(Json, TaggedRecord) {
  const auto d = WeightDistribution::from_json({{"type", "exponential"}, {"rate", 1.0}});
  EXPECT_EQ(d.mean(), 1.0);
  EXPECT_THROW(WeightDistribution::from_json({{"type", "cauchy"}}), ParameterError);
  EXPECT_THROW(WeightDistribution::from_json({{"rate", 1.0}}), ParameterError);
  EXPECT_THROW(WeightDistribution::from_json({{"type", "geometric"}}), ParameterError);
  EXPECT_EQ(WeightDistribution::parse("rademacher").type_name(), "rademacher");
  EXPECT_THROW(WeightDistribution::parse("geometric(q=abc)"), ParameterError);
}

TEST(Atoms, DiscreteLawsOnly) {
  EXPECT_EQ(WeightDistribution::rademacher().atoms().size(), 2u);
  const auto t = WeightDistribution::two_point(2.0, 1.0 / 3.0, -1.0).atoms();
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0].value, -1.0);
  EXPECT_NEAR(t[0].probability, 2.0 / 3.0, 1e-15);
  EXPECT_TRUE(WeightDistribution::gaussian().atoms().empty());
  EXPECT_TRUE(WeightDistribution::geometric(0.5).atoms().empty());
}
