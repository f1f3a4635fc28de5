#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lpptw/weights.hpp"

namespace lpptw {

struct Provenance {
  std::string distribution;  // WeightDistribution::descriptor()
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

/// N x k lattice of weights X_i^j: column i in 1..N is the "time" direction,
/// row j in 1..k the level. Stored row-major (row j contiguous). Accessors
/// take 0-based (col, row).
class WeightMatrix {
 public:
  WeightMatrix(std::size_t n_cols, std::size_t n_rows,
               std::vector<double> values, Provenance provenance = {});

  static WeightMatrix sample(const WeightDistribution& dist,
                             std::size_t n_cols, std::size_t n_rows,
                             std::uint64_t seed, std::uint64_t stream_id);

  std::size_t n_cols() const { return n_cols_; }
  std::size_t n_rows() const { return n_rows_; }
  double operator()(std::size_t col, std::size_t row) const {
    return values_[row * n_cols_ + col];
  }
  std::span<const double> row(std::size_t j) const {
    return {values_.data() + j * n_cols_, n_cols_};
  }
  std::span<const double> values() const { return values_; }
  const Provenance& provenance() const { return provenance_; }

  WeightMatrix negated() const;
  WeightMatrix transposed() const;

 private:
  std::size_t n_cols_;
  std::size_t n_rows_;
  std::vector<double> values_;
  Provenance provenance_;
};

// L and R: theorem (partition) form with disjoint segments.
// LastPassage / FirstPassage: up/right path form L^l, L^f.
enum class PassageKind { kL, kR, kLastPassage, kFirstPassage };

std::string to_string(PassageKind kind);
PassageKind passage_kind_from_string(const std::string& name);

struct PassageResult {
  double value = 0.0;
  PassageKind kind = PassageKind::kL;
  // Breakpoints i_0 <= ... <= i_k: 0 = i_0 and i_k = N for L/R (row j covers
  // columns (i_{j-1}, i_j]); 1 = i_0 and i_k = N for the path forms (row j
  // covers [i_{j-1}, i_j]). Among tied optima the lexicographically smallest
  // partition is returned.
  std::optional<std::vector<std::size_t>> optimal_partition;
};

PassageResult last_passage_theorem_form(const WeightMatrix& w,
                                        bool recover_partition = false);
PassageResult first_passage_theorem_form(const WeightMatrix& w,
                                         bool recover_partition = false);
PassageResult last_passage_path_form(const WeightMatrix& w,
                                     bool recover_partition = false);
PassageResult first_passage_path_form(const WeightMatrix& w,
                                      bool recover_partition = false);
PassageResult passage(const WeightMatrix& w, PassageKind kind,
                      bool recover_partition = false);

// Objective of `kind` on an explicit partition, summed in path order (the
// same order the DP accumulates, so an optimal partition reproduces the DP
// value exactly). Throws PreconditionError on a malformed partition.
double evaluate_partition(const WeightMatrix& w, PassageKind kind,
                          std::span<const std::size_t> partition);

inline constexpr std::size_t kOracleMaxCols = 10;
inline constexpr std::size_t kOracleMaxRows = 5;

// Exhaustive enumeration of every partition; N <= 10, k <= 5, otherwise
// OracleScopeError.
PassageResult brute_force_oracle(const WeightMatrix& w, PassageKind kind);

// Min and max over nondecreasing selections 1 <= i_1 <= ... <= i_{k-1} <= N
// of sum_{j=1}^{k-1} X_{i_j}^{j+1}. These bracket L^l - L for every
// realization. For k = 1 both are 0.
struct SelectionBounds {
  double min;
  double max;
};
SelectionBounds corner_selection_bounds(const WeightMatrix& w);

// Regression-fixture layouts. CSV: a header line "N,k,distribution,seed,
// stream_id", one line with those values, then k lines of N weights.
// Binary: magic "LPPW", u32 version, u64 N, u64 k, u64 seed, u64 stream_id,
// u32 descriptor length + bytes, N*k little-endian doubles.
void write_csv(std::ostream& out, const WeightMatrix& w);
WeightMatrix read_weight_csv(std::istream& in);
void write_binary(std::ostream& out, const WeightMatrix& w);
WeightMatrix read_weight_binary(std::istream& in);

}  // namespace lpptw
