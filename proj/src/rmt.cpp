#include "lpptw/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lpptw/errors.hpp"
#include "lpptw/parallel.hpp"

namespace lpptw {
namespace {

// Replaces exactly-zero pivots so the recurrence never divides by zero; the
// perturbation is far below the bisection tolerance.
constexpr double kPivotFloor = 1e-300;

template <class Extract>
std::vector<double> eigen_sample(std::size_t k, std::size_t n_samples,
                                 std::uint64_t seed, std::size_t workers,
                                 Extract extract) {
  if (k == 0) throw PreconditionError("GUE dimension must be >= 1");
  return parallel_map<double>(n_samples, workers, [&](std::size_t i) {
    auto stream = RngStream::for_sample(seed, StreamTag::kGue, i);
    return extract(extreme_eigenvalues(sample_gue_tridiagonal(k, stream)));
  });
}

}  // namespace

TridiagonalMatrix sample_gue_tridiagonal(std::size_t k, RngStream& stream) {
  if (k == 0) throw PreconditionError("GUE dimension must be >= 1");
  TridiagonalMatrix t;
  t.diagonal.resize(k);
  t.off_diagonal.resize(k - 1);
  for (double& d : t.diagonal) d = stream.normal();
  for (std::size_t i = 0; i + 1 < k; ++i) {
    t.off_diagonal[i] = std::sqrt(stream.gamma(static_cast<double>(k - 1 - i)));
  }
  return t;
}

std::size_t sturm_count(const TridiagonalMatrix& t, double x) {
  const std::size_t k = t.dimension();
  std::size_t count = 0;
  double pivot = t.diagonal[0] - x;
  for (std::size_t i = 0;; ++i) {
    if (std::abs(pivot) < kPivotFloor) pivot = -kPivotFloor;
    if (pivot < 0.0) ++count;
    if (i + 1 == k) break;
    const double b = t.off_diagonal[i];
    pivot = t.diagonal[i + 1] - x - b * b / pivot;
  }
  return count;
}

Interval gershgorin_bounds(const TridiagonalMatrix& t) {
  const std::size_t k = t.dimension();
  Interval r{std::numeric_limits<double>::infinity(),
             -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < k; ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(t.off_diagonal[i - 1]);
    if (i + 1 < k) radius += std::abs(t.off_diagonal[i]);
    r.lo = std::min(r.lo, t.diagonal[i] - radius);
    r.hi = std::max(r.hi, t.diagonal[i] + radius);
  }
  return r;
}

double eigenvalue_by_index(const TridiagonalMatrix& t, std::size_t index) {
  if (index >= t.dimension()) throw DomainError("eigenvalue index out of range");
  const Interval g = gershgorin_bounds(t);
  const double pad = kEigenTolerance + 1e-12 * std::max(std::abs(g.lo), std::abs(g.hi));
  double lo = g.lo - pad;
  double hi = g.hi + pad;
  while (hi - lo > kEigenTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(t, mid) > index) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

EigenSample extreme_eigenvalues(const TridiagonalMatrix& t, bool full_spectrum) {
  const std::size_t k = t.dimension();
  if (k == 0) throw DimensionError("empty tridiagonal matrix");
  if (t.off_diagonal.size() + 1 != k) {
    throw DimensionError("off-diagonal must have k - 1 entries");
  }
  EigenSample s;
  s.k = k;
  if (full_spectrum) {
    std::vector<double> spectrum(k);
    for (std::size_t i = 0; i < k; ++i) spectrum[i] = eigenvalue_by_index(t, i);
    std::sort(spectrum.begin(), spectrum.end());
    s.lambda_min = spectrum.front();
    s.lambda_max = spectrum.back();
    s.spectrum = std::move(spectrum);
  } else {
    s.lambda_min = eigenvalue_by_index(t, 0);
    s.lambda_max = eigenvalue_by_index(t, k - 1);
  }
  return s;
}

double scale_edge(double lambda_max, std::size_t k) {
  const double kd = static_cast<double>(k);
  return (lambda_max - 2.0 * std::sqrt(kd)) * std::pow(kd, 1.0 / 6.0);
}

std::vector<double> scaled_edge_sample(std::size_t k, std::size_t n_samples,
                                       std::uint64_t seed, std::size_t workers) {
  return eigen_sample(k, n_samples, seed, workers, [k](const EigenSample& e) {
    return scale_edge(e.lambda_max, k);
  });
}

std::vector<double> largest_eigenvalue_sample(std::size_t k,
                                              std::size_t n_samples,
                                              std::uint64_t seed,
                                              std::size_t workers) {
  return eigen_sample(k, n_samples, seed, workers,
                      [](const EigenSample& e) { return e.lambda_max; });
}

std::vector<double> smallest_eigenvalue_sample(std::size_t k,
                                               std::size_t n_samples,
                                               std::uint64_t seed,
                                               std::size_t workers) {
  return eigen_sample(k, n_samples, seed, workers,
                      [](const EigenSample& e) { return e.lambda_min; });
}

}  // namespace lpptw
