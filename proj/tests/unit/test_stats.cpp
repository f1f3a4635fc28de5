#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "lpptw/errors.hpp"
#include "lpptw/rng.hpp"
#include "lpptw/stats.hpp"

using namespace lpptw;

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
double uniform_cdf(double x) { return std::clamp(x, 0.0, 1.0); }

std::vector<double> normals(std::size_t n, std::uint64_t index, double shift = 0) {
  auto s = RngStream::for_sample(2024, StreamTag::kGeneric, index);
  std::vector<double> out(n);
  for (double& v : out) v = s.normal() + shift;
  return out;
}

double brute_two_sample(const std::vector<double>& a, const std::vector<double>& b) {
  auto ecdf = [](const std::vector<double>& s, double x) {
    return double(std::count_if(s.begin(), s.end(), [x](double v) { return v <= x; })) /
           double(s.size());
  };
  double d = 0;
  for (const auto* s : {&a, &b}) {
    for (double x : *s) d = std::max(d, std::abs(ecdf(a, x) - ecdf(b, x)));
  }
  return d;
}

}  // namespace

TEST(Ecdf, Summary) {
  const std::vector<double> x = {3, 1, 2, 2};
  const EcdfSummary e(x);
  EXPECT_EQ(e.sorted(), (std::vector<double>{1, 2, 2, 3}));
  EXPECT_EQ(e.n(), 4u);
  EXPECT_DOUBLE_EQ(e.mean(), 2.0);
  EXPECT_DOUBLE_EQ(e.variance(), 2.0 / 3.0);
  EXPECT_EQ(e(0.5), 0.0);
  EXPECT_EQ(e(2.0), 0.75);
  EXPECT_EQ(e(10), 1.0);
  EXPECT_EQ(e.quantile(0.5), 2.0);
  EXPECT_EQ(e.quantile(1.0), 3.0);
  EXPECT_EQ(e.quantile(0.25), 1.0);
  EXPECT_THROW(e.quantile(0.0), DomainError);
  EXPECT_THROW(EcdfSummary(std::vector<double>{}), PreconditionError);
  EXPECT_EQ(EcdfSummary(std::vector<double>{5}).variance(), 0.0);
}

TEST(KsOneSample, NullRejectionRate) {
  const std::size_t n = 10000, seeds = 400;
  std::size_t accepted = 0;
  for (std::size_t s = 0; s < seeds; ++s) {
    const auto r = ks_one_sample(normals(n, s), normal_cdf);
    EXPECT_NEAR(r.threshold, 0.01358, 1e-9);
    if (!r.reject) ++accepted;
  }
  const double rate = double(accepted) / seeds;
  EXPECT_GE(rate, 0.95 - 3 * std::sqrt(0.05 * 0.95 / seeds));
}

TEST(KsOneSample, ExactQuantilesAndDegenerate) {
  const std::size_t n = 1000;
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i) q[i] = (double(i) + 0.5) / double(n);
  EXPECT_NEAR(ks_one_sample(q, uniform_cdf).statistic, 0.5 / double(n), 1e-15);
  const std::vector<double> constant(n, 0.5);
  EXPECT_GE(ks_one_sample(constant, uniform_cdf).statistic, 0.5);
  const auto r = ks_one_sample(q, uniform_cdf, 0.01);
  EXPECT_TRUE(r.one_sample);
  EXPECT_EQ(r.n1, n);
  EXPECT_NEAR(r.threshold, 1.628 / std::sqrt(double(n)), 1e-12);
  EXPECT_THROW(ks_one_sample(std::vector<double>{}, uniform_cdf), PreconditionError);
  EXPECT_THROW(ks_one_sample(q, [](double) { return 2.0; }), DomainError);
  EXPECT_THROW(ks_one_sample(q, uniform_cdf, 0.1), ParameterError);
}

TEST(KsTwoSample, Examples) {
  const auto a = normals(500, 1);
  EXPECT_EQ(ks_two_sample(a, a).statistic, 0.0);
  const auto far = normals(300, 2, 100.0);
  EXPECT_EQ(ks_two_sample(a, far).statistic, 1.0);
  const auto r = ks_two_sample(a, far);
  EXPECT_NEAR(r.threshold, 1.358 * std::sqrt(800.0 / (500.0 * 300.0)), 1e-12);
  EXPECT_TRUE(r.reject);
  EXPECT_THROW(ks_two_sample(a, std::vector<double>{}), PreconditionError);
}

TEST(KsTwoSample, MatchesBruteForce) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    auto a = normals(1 + s % 37, 100 + s);
    auto b = normals(1 + s % 23, 300 + s, 0.3);
    if (s % 3 == 0) {
      // Ties within and across samples.
      for (double& v : a) v = std::round(v * 2);
      for (double& v : b) v = std::round(v * 2);
    }
    EXPECT_EQ(ks_two_sample(a, b).statistic, brute_two_sample(a, b)) << s;
  }
}

TEST(KsTwoSample, SymmetricAndTransformInvariant) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto a = normals(200, 500 + s);
    const auto b = normals(150, 600 + s, 0.2);
    const double d = ks_two_sample(a, b).statistic;
    EXPECT_EQ(d, ks_two_sample(b, a).statistic);
    std::vector<double> ta(a), tb(b);
    for (double& v : ta) v = std::exp(v);
    for (double& v : tb) v = std::exp(v);
    EXPECT_EQ(d, ks_two_sample(ta, tb).statistic);
  }
}

TEST(Moments, MeanWithStderr) {
  const std::vector<double> x = {1, 2, 3, 4};
  const auto m = mean_with_stderr(x);
  EXPECT_DOUBLE_EQ(m.mean, 2.5);
  EXPECT_DOUBLE_EQ(m.stderr, std::sqrt(5.0 / 3.0) / 2.0);
  EXPECT_EQ(m.n, 4u);
  EXPECT_EQ(mean_with_stderr(std::vector<double>{7}).stderr, 0.0);
}

TEST(CenterScale, Examples) {
  const double mu = 1.5, sigma = 2.0;
  const std::size_t N = 50, k = 4;
  const double centre = mu * (N + k - 1) + 2 * sigma * std::sqrt(double(N * k));
  EXPECT_NEAR(center_scale_last_passage(centre, N, k, mu, sigma), 0.0, 1e-13);
  for (double v : {-3.0, 0.0, 9.5}) {
    EXPECT_DOUBLE_EQ(center_scale_last_passage(v, 4, 1, 0.0, 1.0), (v - 4) / 2);
  }
  const double centre_f = mu * (N + k - 1) - 2 * sigma * std::sqrt(double(N * k));
  EXPECT_NEAR(center_scale_first_passage(centre_f, N, k, mu, sigma), 0.0, 1e-13);
  EXPECT_NEAR(center_scale_theorem_form(2 * std::sqrt(double(N * k)), N, k), 0.0, 1e-13);
  EXPECT_DOUBLE_EQ(center_scale_theorem_form(6.0, 9, 1), 6.0 / 3.0 - 2);
  EXPECT_NEAR(center_scale_theorem_form_r(-2 * std::sqrt(double(N * k)), N, k), 0.0, 1e-13);
  EXPECT_THROW(center_scale_last_passage(0, N, k, mu, 0.0), ParameterError);
  EXPECT_THROW(center_scale_first_passage(0, N, k, mu, -1.0), ParameterError);
  EXPECT_THROW(center_scale_theorem_form(0, 0, k), ParameterError);
}

TEST(CenterScale, AffinePreservesArgmax) {
  const auto x = normals(100, 9, 500);
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = center_scale_last_passage(x[i], 100, 3, 1, 1);
  EXPECT_EQ(std::max_element(x.begin(), x.end()) - x.begin(),
            std::max_element(y.begin(), y.end()) - y.begin());
  EXPECT_EQ(std::min_element(x.begin(), x.end()) - x.begin(),
            std::min_element(y.begin(), y.end()) - y.begin());
}
