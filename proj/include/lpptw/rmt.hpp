#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "lpptw/rng.hpp"

namespace lpptw {

/// Symmetric tridiagonal matrix with nonnegative off-diagonal.
struct TridiagonalMatrix {
  std::vector<double> diagonal;      // k entries
  std::vector<double> off_diagonal;  // k - 1 entries, >= 0

  std::size_t dimension() const { return diagonal.size(); }
};

struct EigenSample {
  std::size_t k = 0;
  double lambda_max = 0.0;
  double lambda_min = 0.0;
  std::optional<std::vector<double>> spectrum;  // ascending
};

inline constexpr double kEigenTolerance = 1e-10;

// Tridiagonal model for the GUE with eigenvalue density proportional to
// prod_{i<j} |xi_i - xi_j|^2 prod_j exp(-xi_j^2 / 2): diagonal iid N(0,1),
// off-diagonal entry b_m = sqrt(Gamma(m, 1)), i.e. chi_{2m} / sqrt(2), for
// m = k-1, ..., 1 from the top.
TridiagonalMatrix sample_gue_tridiagonal(std::size_t k, RngStream& stream);

// Number of eigenvalues strictly below x (Sturm sequence of the LDL^T
// pivots).
std::size_t sturm_count(const TridiagonalMatrix& t, double x);

// Gershgorin interval containing the spectrum.
struct Interval {
  double lo;
  double hi;
};
Interval gershgorin_bounds(const TridiagonalMatrix& t);

// index-th smallest eigenvalue (0-based) by bisection to kEigenTolerance.
double eigenvalue_by_index(const TridiagonalMatrix& t, std::size_t index);

EigenSample extreme_eigenvalues(const TridiagonalMatrix& t,
                                bool full_spectrum = false);

// n_samples draws of (lambda_max - 2 sqrt(k)) k^(1/6). Sample i uses stream
// (seed, stream_id_for(kGue, i)).
std::vector<double> scaled_edge_sample(std::size_t k, std::size_t n_samples,
                                       std::uint64_t seed,
                                       std::size_t workers = 1);

// Raw lambda_max (or lambda_min) draws, same stream layout.
std::vector<double> largest_eigenvalue_sample(std::size_t k,
                                              std::size_t n_samples,
                                              std::uint64_t seed,
                                              std::size_t workers = 1);
std::vector<double> smallest_eigenvalue_sample(std::size_t k,
                                               std::size_t n_samples,
                                               std::uint64_t seed,
                                               std::size_t workers = 1);

double scale_edge(double lambda_max, std::size_t k);

}  // namespace lpptw
