#include "lpptw/paths.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "lpptw/errors.hpp"
#include "lpptw/kernels.hpp"

namespace lpptw {
namespace {

void require_same_grid(const DiscretePath& f, const DiscretePath& g) {
  if (f.steps() != g.steps()) {
    throw DimensionError("paths live on different grids (M = " +
                         std::to_string(f.steps()) + " vs " +
                         std::to_string(g.steps()) + ")");
  }
}

// Row j of the result holds the increments f_j(t_m) - f_j(t_{m-1}).
std::vector<double> increments(const PathEnsemble& f) {
  const std::size_t m = f.steps();
  std::vector<double> out(f.size() * m);
  for (std::size_t j = 0; j < f.size(); ++j) {
    const auto v = f[j].values();
    for (std::size_t i = 0; i < m; ++i) out[j * m + i] = v[i + 1] - v[i];
  }
  return out;
}

}  // namespace

DiscretePath::DiscretePath(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.size() < 2) {
    throw DimensionError("a path needs at least one step (M >= 1)");
  }
  if (values_[0] != 0.0) throw ParameterError("paths must start at 0");
  for (double v : values_) {
    if (!std::isfinite(v)) throw ParameterError("path values must be finite");
  }
}

PathEnsemble::PathEnsemble(std::vector<DiscretePath> paths)
    : paths_(std::move(paths)) {
  if (paths_.empty()) throw DimensionError("an ensemble needs k >= 1 paths");
  for (const auto& p : paths_) require_same_grid(p, paths_.front());
}

PathEnsemble PathEnsemble::negated() const {
  std::vector<DiscretePath> out;
  out.reserve(paths_.size());
  for (const auto& p : paths_) {
    std::vector<double> v(p.values().begin(), p.values().end());
    for (double& x : v) x = -x;
    v[0] = 0.0;
    out.emplace_back(std::move(v));
  }
  return PathEnsemble(std::move(out));
}

PathEnsemble PathEnsemble::reversed() const {
  return PathEnsemble(std::vector<DiscretePath>(paths_.rbegin(), paths_.rend()));
}

DiscretePath brownian_path(RngStream& stream, std::size_t steps) {
  if (steps == 0) throw PreconditionError("brownian_path requires M >= 1");
  const double scale = 1.0 / std::sqrt(static_cast<double>(steps));
  std::vector<double> v(steps + 1);
  v[0] = 0.0;
  for (std::size_t m = 1; m <= steps; ++m) v[m] = v[m - 1] + scale * stream.normal();
  return DiscretePath(std::move(v));
}

PathEnsemble brownian_ensemble(RngStream& stream, std::size_t k,
                               std::size_t steps) {
  if (k == 0) throw PreconditionError("brownian_ensemble requires k >= 1");
  std::vector<DiscretePath> paths;
  paths.reserve(k);
  for (std::size_t j = 0; j < k; ++j) paths.push_back(brownian_path(stream, steps));
  return PathEnsemble(std::move(paths));
}

double g_sup(const PathEnsemble& f) {
  const auto inc = increments(f);
  return kernels::active().theorem_form(inc, f.steps(), f.size(),
                                        kernels::Extremum::kMax);
}

double g_inf(const PathEnsemble& f) {
  const auto inc = increments(f);
  return kernels::active().theorem_form(inc, f.steps(), f.size(),
                                        kernels::Extremum::kMin);
}

DiscretePath otimes(const DiscretePath& f, const DiscretePath& g) {
  require_same_grid(f, g);
  const auto fv = f.values();
  const auto gv = g.values();
  std::vector<double> out(fv.size());
  double running = fv[0] - gv[0];
  for (std::size_t m = 0; m < fv.size(); ++m) {
    running = std::min(running, fv[m] - gv[m]);
    out[m] = gv[m] + running;
  }
  out[0] = 0.0;
  return DiscretePath(std::move(out));
}

DiscretePath odot(const DiscretePath& f, const DiscretePath& g) {
  require_same_grid(f, g);
  const auto fv = f.values();
  const auto gv = g.values();
  std::vector<double> out(fv.size());
  double running = fv[0] - gv[0];
  for (std::size_t m = 0; m < fv.size(); ++m) {
    running = std::max(running, fv[m] - gv[m]);
    out[m] = gv[m] + running;
  }
  out[0] = 0.0;
  return DiscretePath(std::move(out));
}

PathEnsemble gamma_k(const PathEnsemble& f) {
  if (f.size() < 2) {
    throw PreconditionError("gamma_k requires k >= 2 (got k = " +
                            std::to_string(f.size()) + ")");
  }
  std::vector<DiscretePath> out;
  out.reserve(f.size());
  std::vector<DiscretePath> current = f.paths();
  while (current.size() >= 2) {
    // prefix = f_1 (x) ... (x) f_i, built left to right.
    DiscretePath prefix = current[0];
    std::vector<DiscretePath> next;
    next.reserve(current.size() - 1);
    for (std::size_t i = 1; i < current.size(); ++i) {
      next.push_back(odot(current[i], prefix));
      prefix = otimes(prefix, current[i]);
    }
    out.push_back(std::move(prefix));
    current = std::move(next);
  }
  out.push_back(std::move(current.front()));
  return PathEnsemble(std::move(out));
}

double sup_norm_distance(const PathEnsemble& a, const PathEnsemble& b) {
  if (a.size() != b.size() || a.steps() != b.steps()) {
    throw DimensionError("sup_norm_distance: ensembles differ in shape");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    double sup = 0.0;
    for (std::size_t m = 0; m <= a.steps(); ++m) {
      sup = std::max(sup, std::abs(a[j][m] - b[j][m]));
    }
    total += sup;
  }
  return total;
}

void write_csv(std::ostream& out, const PathEnsemble& f) {
  out << 't';
  for (std::size_t j = 1; j <= f.size(); ++j) out << ",f" << j;
  out << '\n';
  char buf[40];
  const double m_total = static_cast<double>(f.steps());
  for (std::size_t m = 0; m <= f.steps(); ++m) {
    std::snprintf(buf, sizeof(buf), "%.17g", static_cast<double>(m) / m_total);
    out << buf;
    for (std::size_t j = 0; j < f.size(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", f[j][m]);
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace lpptw
