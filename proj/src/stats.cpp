#include "lpptw/stats.hpp"

#include <algorithm>
#include <cmath>

#include "lpptw/errors.hpp"

namespace lpptw {

EcdfSummary::EcdfSummary(std::span<const double> sample)
    : sorted_(sample.begin(), sample.end()) {
  if (sorted_.empty()) throw PreconditionError("EcdfSummary: empty sample");
  std::sort(sorted_.begin(), sorted_.end());
  const MeanEstimate m = mean_with_stderr(sorted_);
  mean_ = m.mean;
  variance_ = m.stderr * m.stderr * static_cast<double>(n());
}

double EcdfSummary::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(n());
}

double EcdfSummary::quantile(double p) const {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("EcdfSummary::quantile: p in (0, 1]");
  auto idx = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n())));
  idx = std::clamp<std::size_t>(idx, 1, n());
  return sorted_[idx - 1];
}

double ks_critical_value(double alpha) {
  if (alpha == 0.05) return 1.358;
  if (alpha == 0.01) return 1.628;
  throw ParameterError("KS: alpha must be 0.05 or 0.01");
}

KsResult ks_one_sample(std::span<const double> sample,
                       const std::function<double(double)>& cdf, double alpha) {
  if (sample.empty()) throw PreconditionError("ks_one_sample: empty sample");
  const double c = ks_critical_value(alpha);
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    if (!(f >= 0.0 && f <= 1.0)) throw DomainError("ks_one_sample: cdf outside [0, 1]");
    const double above = static_cast<double>(i + 1) / n - f;
    const double below = f - static_cast<double>(i) / n;
    d = std::max({d, above, below});
  }
  KsResult r;
  r.statistic = d;
  r.n1 = x.size();
  r.one_sample = true;
  r.alpha = alpha;
  r.threshold = c / std::sqrt(n);
  r.reject = d > r.threshold;
  return r;
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b,
                       double alpha) {
  if (a.empty() || b.empty()) throw PreconditionError("ks_two_sample: empty sample");
  const double c = ks_critical_value(alpha);
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n1 = static_cast<double>(x.size()), n2 = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    // Step past every copy of the smallest remaining value in both samples
    // before comparing, so ties never open a spurious gap.
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
  }
  KsResult r;
  r.statistic = d;
  r.n1 = x.size();
  r.n2 = y.size();
  r.alpha = alpha;
  r.threshold = c * std::sqrt((n1 + n2) / (n1 * n2));
  r.reject = d > r.threshold;
  return r;
}

MeanEstimate mean_with_stderr(std::span<const double> sample) {
  if (sample.empty()) throw PreconditionError("mean_with_stderr: empty sample");
  const double n = static_cast<double>(sample.size());
  // Two-pass for accuracy.
  double sum = 0.0;
  for (double v : sample) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : sample) ss += (v - mean) * (v - mean);
  MeanEstimate m{mean, 0.0, sample.size()};
  if (sample.size() > 1) m.stderr = std::sqrt(ss / (n - 1) / n);
  return m;
}

namespace {

void check_sizes(std::size_t N, std::size_t k) {
  if (N < 1 || k < 1) throw ParameterError("center_scale: N and k must be >= 1");
}

double edge_scale(std::size_t N, std::size_t k) {
  return std::pow(static_cast<double>(k), -1.0 / 6.0) * std::sqrt(static_cast<double>(N));
}

}  // namespace

double center_scale_last_passage(double value, std::size_t N, std::size_t k, double mu,
                                 double sigma) {
  check_sizes(N, k);
  if (!(sigma > 0.0)) throw ParameterError("center_scale: sigma must be > 0");
  const double nn = static_cast<double>(N), kk = static_cast<double>(k);
  return (value - mu * (nn + kk - 1) - 2 * sigma * std::sqrt(nn * kk)) /
         (sigma * edge_scale(N, k));
}

double center_scale_first_passage(double value, std::size_t N, std::size_t k, double mu,
                                  double sigma) {
  check_sizes(N, k);
  if (!(sigma > 0.0)) throw ParameterError("center_scale: sigma must be > 0");
  const double nn = static_cast<double>(N), kk = static_cast<double>(k);
  return (value - mu * (nn + kk - 1) + 2 * sigma * std::sqrt(nn * kk)) /
         (sigma * edge_scale(N, k));
}

double center_scale_theorem_form(double value, std::size_t N, std::size_t k) {
  check_sizes(N, k);
  const double kk = static_cast<double>(k);
  return (value / std::sqrt(static_cast<double>(N)) - 2 * std::sqrt(kk)) *
         std::pow(kk, 1.0 / 6.0);
}

double center_scale_theorem_form_r(double value, std::size_t N, std::size_t k) {
  return center_scale_theorem_form(-value, N, k);
}

}  // namespace lpptw
