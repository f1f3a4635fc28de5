#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "lpptw/rng.hpp"

namespace lpptw {

/// Piecewise-linear f in C_0([0,1]) sampled at t_m = m / M, m = 0..M.
class DiscretePath {
 public:
  // Requires values.size() >= 2, values[0] == 0 and finite entries.
  explicit DiscretePath(std::vector<double> values);

  std::size_t steps() const { return values_.size() - 1; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t m) const { return values_[m]; }
  double back() const { return values_.back(); }

 private:
  std::vector<double> values_;
};

/// k paths on a common grid.
class PathEnsemble {
 public:
  explicit PathEnsemble(std::vector<DiscretePath> paths);

  std::size_t size() const { return paths_.size(); }
  std::size_t steps() const { return paths_.front().steps(); }
  const DiscretePath& operator[](std::size_t j) const { return paths_[j]; }
  const std::vector<DiscretePath>& paths() const { return paths_; }

  PathEnsemble negated() const;
  PathEnsemble reversed() const;  // (f_k, ..., f_1)

 private:
  std::vector<DiscretePath> paths_;
};

// values[m] = values[m-1] + g_m / sqrt(M), g_m iid N(0,1).
DiscretePath brownian_path(RngStream& stream, std::size_t steps);
// k independent Brownian paths drawn sequentially from one stream.
PathEnsemble brownian_ensemble(RngStream& stream, std::size_t k,
                               std::size_t steps);

// sup / inf over grid partitions 0 = t_0 <= ... <= t_k = 1 of
// sum_j (f_j(t_j) - f_j(t_{j-1})). For piecewise-linear paths the grid
// optimum is the continuum optimum.
double g_sup(const PathEnsemble& f);
double g_inf(const PathEnsemble& f);

// (f (x) g)(t) = inf_{s<=t} [f(s) + g(t) - g(s)], via running minimum.
DiscretePath otimes(const DiscretePath& f, const DiscretePath& g);
// (f (.) g)(t) = sup_{s<=t} [f(s) + g(t) - g(s)], via running maximum.
DiscretePath odot(const DiscretePath& f, const DiscretePath& g);

// The O'Connell-Yor transform, with left-to-right association:
//   Gamma_k(f_1..f_k) = (f_1 (x) ... (x) f_k,
//                        Gamma_{k-1}(f_2 (.) f_1, f_3 (.) (f_1 (x) f_2), ...,
//                                    f_k (.) (f_1 (x) ... (x) f_{k-1}))).
// Requires k >= 2. The output coordinates are the ordered (bottom to top)
// coordinates of the transformed ensemble.
PathEnsemble gamma_k(const PathEnsemble& f);

// sum_j sup_m |a_j(t_m) - b_j(t_m)|.
double sup_norm_distance(const PathEnsemble& a, const PathEnsemble& b);

// CSV with columns t,f1,...,fk.
void write_csv(std::ostream& out, const PathEnsemble& f);

}  // namespace lpptw
