#include "support/oracles.hpp"

#include <algorithm>
#include <boost/math/special_functions/airy.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace lpptw::oracle {

std::vector<double> jacobi_eigenvalues(std::vector<double> a, std::size_t n) {
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        norm += at(i, j) * at(i, j);
        if (i != j) off += at(i, j) * at(i, j);
      }
    }
    if (off <= 1e-30 * norm || off == 0.0) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (std::size_t r = 0; r < n; ++r) {
          const double arp = at(r, p), arq = at(r, q);
          at(r, p) = c * arp - s * arq;
          at(r, q) = s * arp + c * arq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double apr = at(p, r), aqr = at(q, r);
          at(p, r) = c * apr - s * aqr;
          at(q, r) = s * apr + c * aqr;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = at(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

std::vector<double> hermitian_eigenvalues(const std::vector<double>& re,
                                          const std::vector<double>& im, std::size_t n) {
  const std::size_t m = 2 * n;
  std::vector<double> big(m * m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      big[i * m + j] = re[i * n + j];
      big[(i + n) * m + j + n] = re[i * n + j];
      big[i * m + j + n] = -im[i * n + j];
      big[(i + n) * m + j] = im[i * n + j];
    }
  }
  const std::vector<double> ev = jacobi_eigenvalues(std::move(big), m);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = 0.5 * (ev[2 * i] + ev[2 * i + 1]);
  return out;
}

DenseHermitian dense_gue(std::size_t n, RngStream& stream) {
  DenseHermitian h{n, std::vector<double>(n * n), std::vector<double>(n * n)};
  for (std::size_t i = 0; i < n; ++i) {
    h.re[i * n + i] = stream.normal();
    for (std::size_t j = i + 1; j < n; ++j) {
      const double x = stream.normal() / std::sqrt(2.0);
      const double y = stream.normal() / std::sqrt(2.0);
      h.re[i * n + j] = h.re[j * n + i] = x;
      h.im[i * n + j] = y;
      h.im[j * n + i] = -y;
    }
  }
  return h;
}

Quadrature gauss_legendre(std::size_t m, double a, double b) {
  Quadrature q{std::vector<double>(m), std::vector<double>(m)};
  for (std::size_t i = 0; i < m; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(m) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= m; ++k) {
        const double pk = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      if (m == 1) p0 = 1.0;
      dp = static_cast<double>(m) * (x * p1 - p0) / (x * x - 1);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    q.nodes[i] = 0.5 * (a + b) + 0.5 * (b - a) * x;
    q.weights[i] = (b - a) / ((1 - x * x) * dp * dp);
  }
  return q;
}

double fredholm_f_gue(double s, std::size_t m, double length) {
  const Quadrature q = gauss_legendre(m, s, s + length);
  std::vector<double> ai(m), ap(m), sw(m);
  for (std::size_t i = 0; i < m; ++i) {
    ai[i] = boost::math::airy_ai(q.nodes[i]);
    ap[i] = boost::math::airy_ai_prime(q.nodes[i]);
    sw[i] = std::sqrt(q.weights[i]);
  }
  std::vector<double> a(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double xi = q.nodes[i], xj = q.nodes[j];
      const double k = i == j ? ap[i] * ap[i] - xi * ai[i] * ai[i]
                              : (ai[i] * ap[j] - ap[i] * ai[j]) / (xi - xj);
      a[i * m + j] = (i == j ? 1.0 : 0.0) - sw[i] * k * sw[j];
    }
  }
  // LU with partial pivoting.
  double det = 1.0;
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < m; ++r) {
      if (std::abs(a[r * m + c]) > std::abs(a[piv * m + c])) piv = r;
    }
    if (piv != c) {
      for (std::size_t j = 0; j < m; ++j) std::swap(a[c * m + j], a[piv * m + j]);
      det = -det;
    }
    const double d = a[c * m + c];
    det *= d;
    if (d == 0.0) return 0.0;
    for (std::size_t r = c + 1; r < m; ++r) {
      const double f = a[r * m + c] / d;
      if (f == 0.0) continue;
      for (std::size_t j = c; j < m; ++j) a[r * m + j] -= f * a[c * m + j];
    }
  }
  return det;
}

namespace {

// Solves y'' = rhs on (u, v) with y(u) = y(v) = 0 (Thomas algorithm).
std::vector<double> dirichlet_solve(const std::vector<double>& rhs, double h) {
  const std::size_t n = rhs.size();  // interior nodes
  std::vector<double> c(n), d(n), y(n);
  // Rows: y_{i-1} - 2 y_i + y_{i+1} = h^2 rhs_i.
  double prev_c = 0.0, prev_d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double denom = -2.0 - (i ? prev_c : 0.0);
    c[i] = 1.0 / denom;
    d[i] = (h * h * rhs[i] - (i ? prev_d : 0.0)) / denom;
    prev_c = c[i];
    prev_d = d[i];
  }
  y[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) y[i] = d[i] - c[i] * y[i + 1];
  return y;
}

}  // namespace

ExitMoments exit_time_moments(double u, double v, std::size_t cells) {
  const double h = (v - u) / static_cast<double>(cells);
  const std::size_t n = cells - 1;
  const std::vector<double> m1 = dirichlet_solve(std::vector<double>(n, -2.0), h);
  std::vector<double> rhs(n);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = -4.0 * m1[i];
  const std::vector<double> m2 = dirichlet_solve(rhs, h);
  // Linear interpolation at x = 0.
  const double pos = (0.0 - u) / h - 1.0;  // interior index of x = 0
  const auto i = static_cast<std::size_t>(std::floor(pos));
  const double t = pos - static_cast<double>(i);
  auto interp = [&](const std::vector<double>& y) {
    return i + 1 < n ? (1 - t) * y[i] + t * y[i + 1] : y[i];
  };
  return {interp(m1), interp(m2)};
}

std::vector<double> otimes_direct(const std::vector<double>& f, const std::vector<double>& g) {
  std::vector<double> out(f.size());
  for (std::size_t m = 0; m < f.size(); ++m) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r <= m; ++r) best = std::min(best, f[r] + g[m] - g[r]);
    out[m] = best;
  }
  return out;
}

std::vector<double> odot_direct(const std::vector<double>& f, const std::vector<double>& g) {
  std::vector<double> out(f.size());
  for (std::size_t m = 0; m < f.size(); ++m) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r <= m; ++r) best = std::max(best, f[r] + g[m] - g[r]);
    out[m] = best;
  }
  return out;
}

namespace {

double partition_extremum(const std::vector<std::vector<double>>& f, bool maximize) {
  const std::size_t k = f.size(), M = f.front().size() - 1;
  double best = maximize ? -std::numeric_limits<double>::infinity()
                         : std::numeric_limits<double>::infinity();
  std::vector<std::size_t> t(k + 1, 0);
  t[k] = M;
  std::function<void(std::size_t)> rec = [&](std::size_t j) {
    if (j == k) {
      double s = 0.0;
      for (std::size_t i = 1; i <= k; ++i) s += f[i - 1][t[i]] - f[i - 1][t[i - 1]];
      best = maximize ? std::max(best, s) : std::min(best, s);
      return;
    }
    for (std::size_t m = t[j - 1]; m <= M; ++m) {
      t[j] = m;
      rec(j + 1);
    }
  };
  if (k == 1) {
    return f[0][M] - f[0][0];
  }
  rec(1);
  return best;
}

}  // namespace

double g_sup_direct(const std::vector<std::vector<double>>& f) {
  return partition_extremum(f, true);
}

double g_inf_direct(const std::vector<std::vector<double>>& f) {
  return partition_extremum(f, false);
}

}  // namespace lpptw::oracle
