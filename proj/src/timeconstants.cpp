#include "lpptw/timeconstants.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <variant>

#include "lpptw/errors.hpp"
#include "lpptw/parallel.hpp"
#include "lpptw/percolation.hpp"
#include "lpptw/stats.hpp"

namespace lpptw {

double predicted_constant_exponential(double x, double y) {
  if (!(x > 0.0 && y > 0.0)) throw ParameterError("shape: x and y must be > 0");
  const double s = std::sqrt(x) + std::sqrt(y);
  return s * s;
}

double predicted_constant_geometric(double x, double y, double q) {
  if (!(x > 0.0 && y > 0.0)) throw ParameterError("shape: x and y must be > 0");
  if (!(q > 0.0 && q < 1.0)) throw ParameterError("shape: q must lie in (0, 1)");
  return (q * (x + y) + 2 * std::sqrt(q * x * y)) / (1 - q);
}

namespace {

double predicted_for(const WeightDistribution& dist, double x, double y) {
  const auto& v = dist.variant();
  if (const auto* e = std::get_if<Exponential>(&v)) {
    return predicted_constant_exponential(x, y) / e->rate;
  }
  if (const auto* g = std::get_if<Geometric>(&v)) {
    return predicted_constant_geometric(x, y, g->q);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

constexpr std::size_t kReplicateBits = 20;

}  // namespace

ShapePoint square_shape_point(const WeightDistribution& dist, double x, double y,
                              std::size_t n, std::size_t replicates, std::uint64_t seed,
                              std::size_t workers) {
  if (!(x > 0.0 && y > 0.0) || n < 1) throw ParameterError("shape: need x, y > 0, n >= 1");
  if (replicates < kMinShapeReplicates) {
    throw PreconditionError("shape: at least 30 replicates required");
  }
  if (replicates >= (std::size_t{1} << kReplicateBits) || n >= (std::size_t{1} << 27)) {
    throw ParameterError("shape: n or replicates too large for the stream layout");
  }
  const auto cols = static_cast<std::size_t>(std::floor(x * static_cast<double>(n)));
  const auto rows = static_cast<std::size_t>(std::floor(y * static_cast<double>(n)));
  if (cols < 1 || rows < 1) throw ParameterError("shape: empty rectangle");
  const std::vector<double> ratios =
      parallel_map<double>(replicates, workers, [&](std::size_t r) {
        const std::uint64_t index = (static_cast<std::uint64_t>(n) << kReplicateBits) | r;
        const WeightMatrix w = WeightMatrix::sample(
            dist, cols, rows, seed, stream_id_for(StreamTag::kShape, index));
        return last_passage_path_form(w).value / static_cast<double>(n);
      });
  const MeanEstimate m = mean_with_stderr(ratios);
  return {x, y, n, replicates, m.mean, m.stderr, predicted_for(dist, x, y)};
}

ShapePoint thin_rectangle_constant(const WeightDistribution& dist, std::size_t N,
                                   std::size_t k, std::size_t replicates,
                                   std::uint64_t seed, std::size_t workers) {
  if (N < 1 || k < 1) throw ParameterError("thin rectangle: N, k must be >= 1");
  if (static_cast<long double>(k) * k * k > static_cast<long double>(N)) {
    throw PreconditionError("thin rectangle: requires k^3 <= N");
  }
  if (replicates < 1) throw PreconditionError("thin rectangle: replicates must be >= 1");
  const double mu = dist.mean();
  const double scale = std::sqrt(static_cast<double>(N) * static_cast<double>(k));
  const std::vector<double> values =
      parallel_map<double>(replicates, workers, [&](std::size_t r) {
        const WeightMatrix w =
            WeightMatrix::sample(dist, N, k, seed, stream_id_for(StreamTag::kShape, r));
        return (last_passage_path_form(w).value - mu * static_cast<double>(N)) / scale;
      });
  const MeanEstimate m = mean_with_stderr(values);
  return {static_cast<double>(N), static_cast<double>(k), N, replicates,
          m.mean, m.stderr, 2 * dist.stddev()};
}

Extrapolation extrapolate_finite_size(std::span<const ShapePoint> points, double exponent) {
  if (points.size() < 2) throw PreconditionError("extrapolate: need >= 2 points");
  if (!(exponent > 0.0)) throw ParameterError("extrapolate: exponent must be > 0");
  bool weighted = true;
  for (const ShapePoint& p : points) weighted = weighted && p.stderr > 0.0;
  double sw = 0, sz = 0, sy = 0, szz = 0, szy = 0;
  for (const ShapePoint& p : points) {
    const double w = weighted ? 1.0 / (p.stderr * p.stderr) : 1.0;
    const double z = std::pow(static_cast<double>(p.n), -exponent);
    sw += w;
    sz += w * z;
    sy += w * p.mean_ratio;
    szz += w * z * z;
    szy += w * z * p.mean_ratio;
  }
  const double det = sw * szz - sz * sz;
  if (!(std::abs(det) > 1e-300)) throw PreconditionError("extrapolate: need distinct n");
  const double amplitude = (sw * szy - sz * sy) / det;
  const double limit = (sy - amplitude * sz) / sw;
  return {limit, amplitude, exponent};
}

void write_csv(std::ostream& out, std::span<const ShapePoint> points) {
  out << "x,y,n,mean_ratio,stderr,predicted\n";
  char buf[160];
  for (const ShapePoint& p : points) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%zu,%.17g,%.17g,%.17g\n", p.x, p.y, p.n,
                  p.mean_ratio, p.stderr, p.predicted);
    out << buf;
  }
}

}  // namespace lpptw
