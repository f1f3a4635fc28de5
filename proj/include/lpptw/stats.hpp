#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace lpptw {

/// Sorted copy of a sample with its moments.
class EcdfSummary {
 public:
  explicit EcdfSummary(std::span<const double> sample);

  const std::vector<double>& sorted() const { return sorted_; }
  std::size_t n() const { return sorted_.size(); }
  double mean() const { return mean_; }
  // Unbiased (n - 1) variance; 0 for n = 1.
  double variance() const { return variance_; }
  // Right-continuous ECDF: #{x_i <= x} / n.
  double operator()(double x) const;
  // Smallest x_i with ECDF(x_i) >= p, p in (0, 1].
  double quantile(double p) const;

 private:
  std::vector<double> sorted_;
  double mean_ = 0.0;
  double variance_ = 0.0;
};

struct KsResult {
  double statistic = 0.0;
  std::size_t n1 = 0;
  // Second sample size; infinity (stored as 0 with one_sample set) for the
  // one-sample test.
  std::size_t n2 = 0;
  bool one_sample = false;
  double alpha = 0.05;
  double threshold = 0.0;
  bool reject = false;
};

/// Asymptotic Kolmogorov constant c(alpha); only alpha in {0.05, 0.01}.
double ks_critical_value(double alpha);

/// One-sample KS statistic against a CDF. Throws PreconditionError on an
/// empty sample, DomainError if cdf leaves [0, 1].
KsResult ks_one_sample(std::span<const double> sample,
                       const std::function<double(double)>& cdf, double alpha = 0.05);

/// Two-sample KS statistic by a merge scan over the sorted samples.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b,
                       double alpha = 0.05);

struct MeanEstimate {
  double mean = 0.0;
  double stderr = 0.0;  // sample stddev / sqrt(n); 0 for n = 1
  std::size_t n = 0;
};

MeanEstimate mean_with_stderr(std::span<const double> sample);

// (value - mu (N + k - 1) - 2 sigma sqrt(N k)) / (sigma k^{-1/6} N^{1/2})
double center_scale_last_passage(double value, std::size_t N, std::size_t k, double mu,
                                 double sigma);
// (value - mu (N + k - 1) + 2 sigma sqrt(N k)) / (sigma k^{-1/6} N^{1/2})
double center_scale_first_passage(double value, std::size_t N, std::size_t k, double mu,
                                  double sigma);
// (L / N^{1/2} - 2 sqrt(k)) k^{1/6}
double center_scale_theorem_form(double value, std::size_t N, std::size_t k);
// (-R / N^{1/2} - 2 sqrt(k)) k^{1/6}
double center_scale_theorem_form_r(double value, std::size_t N, std::size_t k);

}  // namespace lpptw
