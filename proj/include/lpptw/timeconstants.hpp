#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "lpptw/weights.hpp"

namespace lpptw {

// (sqrt(x) + sqrt(y))^2, the exponential(1) shape function.
double predicted_constant_exponential(double x, double y);
// (q (x + y) + 2 sqrt(q x y)) / (1 - q), geometric weights on {0, 1, ...}.
double predicted_constant_geometric(double x, double y, double q);

struct ShapePoint {
  double x = 0.0;
  double y = 0.0;
  std::size_t n = 0;
  std::size_t replicates = 0;
  double mean_ratio = 0.0;
  double stderr = 0.0;
  double predicted = 0.0;  // NaN when no closed form applies
};

inline constexpr std::size_t kMinShapeReplicates = 30;

/// Sample mean of L^l(floor(x n), floor(y n)) / n over `replicates` weight
/// matrices (replicate r uses stream (seed, kShape, (n << 20) | r)). The
/// prediction is filled in for exponential(1) and geometric laws.
ShapePoint square_shape_point(const WeightDistribution& dist, double x, double y,
                              std::size_t n, std::size_t replicates, std::uint64_t seed,
                              std::size_t workers = 1);

/// Sample mean of (L^l(N, k) - mu N) / sqrt(N k). Requires k^3 <= N.
/// predicted = 2 sigma.
ShapePoint thin_rectangle_constant(const WeightDistribution& dist, std::size_t N,
                                   std::size_t k, std::size_t replicates,
                                   std::uint64_t seed, std::size_t workers = 1);

struct Extrapolation {
  double limit = 0.0;
  double amplitude = 0.0;
  double exponent = 0.0;
};

/// Weighted least-squares fit of mean_ratio = limit + amplitude n^{-exponent}
/// (weights 1 / stderr^2, or uniform if any stderr is 0). Needs >= 2 points
/// with distinct n.
Extrapolation extrapolate_finite_size(std::span<const ShapePoint> points,
                                      double exponent = 1.0 / 3.0);

// CSV "x,y,n,mean_ratio,stderr,predicted".
void write_csv(std::ostream& out, std::span<const ShapePoint> points);

}  // namespace lpptw
