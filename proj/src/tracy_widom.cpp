#include "lpptw/tracy_widom.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "lpptw/airy.hpp"
#include "lpptw/errors.hpp"

namespace lpptw {
namespace {

using real = long double;

struct State {
  real q;
  real dq;
};

// One Taylor step of q'' = 2 q^3 + x q from x0 by h. Returns false if the
// series failed to converge (step too close to a pole).
bool taylor_step(real x0, State& s, real h, const StepControl& control) {
  const int order = std::max(control.max_order, 8);
  std::vector<real> a(static_cast<std::size_t>(order) + 3, 0.0L);
  std::vector<real> sq(a.size(), 0.0L);  // coefficients of q^2
  a[0] = s.q;
  a[1] = s.dq;
  real y = a[0] + a[1] * h;
  real dy = a[1];
  real hp = h;  // h^{n+1}
  int small = 0;
  for (int n = 0; n <= order; ++n) {
    real c = 0.0L;
    for (int i = 0; i <= n; ++i) c += a[i] * a[n - i];
    sq[n] = c;
    real d = 0.0L;
    for (int i = 0; i <= n; ++i) d += sq[i] * a[n - i];
    const real prev = n >= 1 ? a[n - 1] : 0.0L;
    const real nn = static_cast<real>(n);
    a[n + 2] = (2 * d + x0 * a[n] + prev) / ((nn + 2) * (nn + 1));
    const real term_dy = (nn + 2) * a[n + 2] * hp;
    hp *= h;
    const real term_y = a[n + 2] * hp;
    y += term_y;
    dy += term_dy;
    const real scale = std::fabs(y) + std::fabs(dy);
    if (std::fabs(term_y) + std::fabs(term_dy) < control.tolerance * scale) {
      if (++small == 2) {
        s = {y, dy};
        return true;
      }
    } else {
      small = 0;
    }
  }
  return false;
}

// Grid helpers: node i sits at x_end + i * step.
struct Grid {
  real x_end;
  real step;
  real at(std::ptrdiff_t i) const { return x_end + static_cast<real>(i) * step; }
};

enum class Fate { kBelow = -1, kBounded = 0, kAbove = 1 };

// Leftward integration from node `start` (q = scale * Ai there) to node
// `stop` (may be negative, i.e. beyond x_end). If `out_q` is non-null the
// values at nodes [max(stop,0), start] are recorded.
Fate integrate(const Grid& grid, std::ptrdiff_t start, std::ptrdiff_t stop,
               real scale, const AiryValue& seed, const StepControl& control,
               std::vector<double>* out_q, std::vector<double>* out_dq) {
  State s{scale * seed.ai, scale * seed.ai_prime};
  if (out_q) {
    (*out_q)[start] = static_cast<double>(s.q);
    (*out_dq)[start] = static_cast<double>(s.dq);
  }
  const int sub = std::max(control.substeps, 1);
  for (std::ptrdiff_t i = start; i > stop; --i) {
    const real x_hi = grid.at(i);
    const real x_lo = grid.at(i - 1);
    const real h = (x_lo - x_hi) / sub;
    for (int k = 0; k < sub; ++k) {
      const real x0 = k == 0 ? x_hi : x_hi + k * h;
      if (!taylor_step(x0, s, h, control)) {
        return s.q > 0 ? Fate::kAbove : Fate::kBelow;
      }
    }
    if (!std::isfinite(s.q) || std::fabs(s.q) > control.blowup) {
      return s.q > 0 ? Fate::kAbove : Fate::kBelow;
    }
    if (s.q < 0) return Fate::kBelow;
    const real envelope = std::sqrt(std::max(-x_lo, 0.0L) / 2);
    if (s.q > envelope + 1.0L) return Fate::kAbove;
    if (out_q && i - 1 >= 0) {
      (*out_q)[i - 1] = static_cast<double>(s.q);
      (*out_dq)[i - 1] = static_cast<double>(s.dq);
    }
  }
  return Fate::kBounded;
}

// 6-point Gauss-Legendre on [0, 1].
constexpr std::array<double, 6> kGlNodes = {
    0.033765242898423986, 0.16939530676686776, 0.38069040695840156,
    0.61930959304159844,  0.83060469323313224, 0.96623475710157601};
constexpr std::array<double, 6> kGlWeights = {
    0.085662246189585173, 0.18038078652406931, 0.23395696728634552,
    0.23395696728634552,  0.18038078652406931, 0.085662246189585173};

// Quintic Hermite interpolant on [0, h] from value, first and second
// derivatives at both ends, evaluated at t in [0, 1].
real quintic(real t, real h, real y0, real d0, real s0, real y1, real d1, real s1) {
  const real t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  const real h00 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
  const real h10 = t - 6 * t3 + 8 * t4 - 3 * t5;
  const real h20 = 0.5L * (t2 - 3 * t3 + 3 * t4 - t5);
  const real h01 = 10 * t3 - 15 * t4 + 6 * t5;
  const real h11 = -4 * t3 + 7 * t4 - 3 * t5;
  const real h21 = 0.5L * (t3 - 2 * t4 + t5);
  return h00 * y0 + h10 * h * d0 + h20 * h * h * s0 + h01 * y1 + h11 * h * d1 +
         h21 * h * h * s1;
}

// Tail integrals of (scale Ai)^2 from s to infinity.
void airy_tails(double s, real scale2, real& j, real& i) {
  const AiryValue v = airy(s);
  const real ai = v.ai, ap = v.ai_prime, x = s;
  j = scale2 * (ap * ap - x * ai * ai);
  i = scale2 * (2 * x * x * ai * ai - 2 * x * ap * ap - ai * ap) / 3;
}

}  // namespace

TwTable hastings_mcleod(double x_start, double x_end, const StepControl& control) {
  if (!(x_start >= 6.0) || !(x_end <= -10.0)) {
    throw PreconditionError("hastings_mcleod: need x_start >= 6 and x_end <= -10");
  }
  if (!(control.step > 0.0) || !(control.s_max >= x_start) ||
      !(control.s_max <= kAiryDomain) || !(x_end >= -kAiryDomain) ||
      control.max_order < 8 || control.substeps < 1 || !(control.tolerance > 0.0) ||
      !(control.blowup > 0.0)) {
    throw ParameterError("hastings_mcleod: invalid step control");
  }
  const double span = (control.s_max - x_end) / control.step;
  const double start_pos = (x_start - x_end) / control.step;
  if (std::abs(span - std::round(span)) > 1e-9 ||
      std::abs(start_pos - std::round(start_pos)) > 1e-9) {
    throw ParameterError("hastings_mcleod: x_start and s_max must be grid nodes");
  }
  const auto n_nodes = static_cast<std::size_t>(std::llround(span)) + 1;
  const auto start = static_cast<std::ptrdiff_t>(std::llround(start_pos));
  const Grid grid{static_cast<real>(x_end), static_cast<real>(control.step)};
  const AiryValue seed = airy(static_cast<double>(grid.at(start)));

  // Seeding with exactly (Ai, Ai') leaves the solution off the separatrix by
  // the neglected cubic term (relative size ~ Ai^2 / x), which the negative
  // axis amplifies beyond recovery by x = -10. Refine the seed amplitude by
  // shooting: too large blows up, too small turns negative. Shooting runs to
  // a few units past x_end so the accepted amplitude is accurate there.
  const std::ptrdiff_t shoot_stop = -static_cast<std::ptrdiff_t>(std::llround(4.0 / control.step));
  real lo = 1.0L - 1e-6L, hi = 1.0L + 1e-6L;
  auto fate = [&](real scale) {
    return integrate(grid, start, shoot_stop, scale, seed, control, nullptr, nullptr);
  };
  for (int expand = 0; fate(lo) != Fate::kBelow; ++expand) {
    if (expand == 8) throw NumericalError("hastings_mcleod: cannot bracket seed from below");
    lo = 1.0L - (1.0L - lo) * 10;
  }
  for (int expand = 0; fate(hi) != Fate::kAbove; ++expand) {
    if (expand == 8) throw NumericalError("hastings_mcleod: cannot bracket seed from above");
    hi = 1.0L + (hi - 1.0L) * 10;
  }
  real scale = 0.5L * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    scale = 0.5L * (lo + hi);
    if (scale <= lo || scale >= hi) break;
    const Fate f = fate(scale);
    if (f == Fate::kBounded) break;
    (f == Fate::kAbove ? hi : lo) = scale;
  }

  TwTable table;
  table.s_min = x_end;
  table.s_max = control.s_max;
  table.step = control.step;
  table.x_start = static_cast<double>(grid.at(start));
  table.seed_scale = static_cast<double>(scale);
  table.s.resize(n_nodes);
  table.q.assign(n_nodes, 0.0);
  table.q_prime.assign(n_nodes, 0.0);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    const double x = static_cast<double>(grid.at(static_cast<std::ptrdiff_t>(i)));
    table.s[i] = std::abs(x) < 1e-9 * control.step ? 0.0 : x;
  }
  if (integrate(grid, start, 0, scale, seed, control, &table.q, &table.q_prime) !=
      Fate::kBounded) {
    throw NumericalError("hastings_mcleod: solution left the bounded branch (blow-up)");
  }
  for (std::size_t i = static_cast<std::size_t>(start) + 1; i < n_nodes; ++i) {
    const AiryValue v = airy(table.s[i]);
    table.q[i] = static_cast<double>(scale * v.ai);
    table.q_prime[i] = static_cast<double>(scale * v.ai_prime);
  }
  return table;
}

void f_gue_from_q(TwTable& table) {
  const std::size_t n = table.size();
  if (n < 2 || table.q.size() != n || table.q_prime.size() != n) {
    throw PreconditionError("f_gue_from_q: q column not populated");
  }
  const double pos = (table.x_start - table.s_min) / table.step;
  if (std::abs(pos - std::round(pos)) > 1e-9 || pos < 0 || pos >= static_cast<double>(n)) {
    throw PreconditionError("f_gue_from_q: x_start is not a table node");
  }
  const auto start = static_cast<std::size_t>(std::llround(pos));
  const real scale2 = static_cast<real>(table.seed_scale) * table.seed_scale;

  std::vector<real> j(n), in(n);
  for (std::size_t i = start; i < n; ++i) airy_tails(table.s[i], scale2, j[i], in[i]);

  auto second = [&](std::size_t i) {
    const real q = table.q[i];
    return 2 * q * q * q + static_cast<real>(table.s[i]) * q;
  };
  for (std::size_t i = start; i-- > 0;) {
    const real a = table.s[i];
    const real h = static_cast<real>(table.s[i + 1]) - a;
    const real y0 = table.q[i], d0 = table.q_prime[i], s0 = second(i);
    const real y1 = table.q[i + 1], d1 = table.q_prime[i + 1], s1 = second(i + 1);
    real mass = 0.0L, moment = 0.0L;
    for (std::size_t g = 0; g < kGlNodes.size(); ++g) {
      const real t = kGlNodes[g];
      const real q = quintic(t, h, y0, d0, s0, y1, d1, s1);
      const real w = kGlWeights[g] * h * q * q;
      mass += w;
      moment += w * t * h;
    }
    j[i] = j[i + 1] + mass;
    in[i] = in[i + 1] + h * j[i + 1] + moment;
  }

  table.tail_mass.resize(n);
  table.exponent.resize(n);
  table.cdf.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    table.tail_mass[i] = static_cast<double>(j[i]);
    table.exponent[i] = static_cast<double>(in[i]);
    table.cdf[i] = static_cast<double>(std::exp(-in[i]));
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(in[i] < in[i - 1]) || !(table.cdf[i] >= table.cdf[i - 1])) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "f_gue_from_q: F not monotone at s=%.6f",
                    table.s[i]);
      throw NumericalError(buf);
    }
  }
}

std::size_t TwTable::cell_of(double x) const {
  const double pos = (x - s_min) / step;
  auto i = static_cast<std::ptrdiff_t>(std::floor(pos));
  i = std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(size()) - 2);
  return static_cast<std::size_t>(i);
}

double TwTable::density(double x) const {
  if (!has_cdf()) throw PreconditionError("TwTable: F column not filled");
  if (!(x >= s_min && x <= s_max)) throw DomainError("TwTable: argument outside table range");
  const std::size_t i = cell_of(x);
  const double h = s[i + 1] - s[i];
  const double t = (x - s[i]) / h;
  // Derivative of the cubic Hermite interpolant of F.
  const double f0 = cdf[i], f1 = cdf[i + 1];
  const double d0 = cdf[i] * tail_mass[i], d1 = cdf[i + 1] * tail_mass[i + 1];
  const double t2 = t * t;
  return (6 * t2 - 6 * t) / h * f0 + (3 * t2 - 4 * t + 1) * d0 +
         (6 * t - 6 * t2) / h * f1 + (3 * t2 - 2 * t) * d1;
}

double TwTable::f_gue(double x) const {
  if (!has_cdf()) throw PreconditionError("TwTable: F column not filled");
  if (!(x >= s_min && x <= s_max)) throw DomainError("TwTable: argument outside table range");
  const std::size_t i = cell_of(x);
  const double h = s[i + 1] - s[i];
  const double t = (x - s[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  const double d0 = cdf[i] * tail_mass[i], d1 = cdf[i + 1] * tail_mass[i + 1];
  if (cdf[i] < 0.5) return h00 * cdf[i] + h10 * h * d0 + h01 * cdf[i + 1] + h11 * h * d1;
  // Upper half: interpolate 1 - F, which is known to full relative precision,
  // so rounding cannot break monotonicity where F is flat in double.
  const double g0 = -std::expm1(-exponent[i]), g1 = -std::expm1(-exponent[i + 1]);
  return 1.0 - (h00 * g0 - h10 * h * d0 + h01 * g1 - h11 * h * d1);
}

double TwTable::f_gue_clamped(double x) const {
  if (!has_cdf()) throw PreconditionError("TwTable: F column not filled");
  if (std::isnan(x)) throw DomainError("TwTable: NaN argument");
  if (x <= s_min) return 0.0;
  if (x >= s_max) return 1.0;
  return std::clamp(f_gue(x), 0.0, 1.0);
}

double TwTable::quantile(double p) const {
  if (!has_cdf()) throw PreconditionError("TwTable: F column not filled");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile: p must lie in (0, 1)");
  if (p < cdf.front() || p > cdf.back()) {
    throw DomainError("quantile: p outside the tabulated range");
  }
  const auto it = std::lower_bound(cdf.begin(), cdf.end(), p);
  std::size_t hi_i = static_cast<std::size_t>(it - cdf.begin());
  if (hi_i == 0) return s.front();
  double lo = s[hi_i - 1], hi = s[hi_i];
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f_gue(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

template <typename F>
double simpson(const TwTable& t, F&& weight) {
  const std::size_t n = t.size();
  if (!t.has_cdf() || n < 3) throw PreconditionError("TwTable: F column not filled");
  auto f = [&](std::size_t i) { return weight(t.s[i]) * t.cdf[i] * t.tail_mass[i]; };
  const std::size_t intervals = (n - 1) - ((n - 1) % 2);
  double sum = f(0) + f(intervals);
  for (std::size_t i = 1; i < intervals; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(i);
  double total = sum * t.step / 3.0;
  if (intervals < n - 1) total += 0.5 * t.step * (f(n - 2) + f(n - 1));
  return total;
}

}  // namespace

double TwTable::total_mass() const {
  return simpson(*this, [](double) { return 1.0; });
}

double TwTable::mean() const {
  return simpson(*this, [](double x) { return x; }) / total_mass();
}

double TwTable::variance() const {
  const double m = mean();
  return simpson(*this, [m](double x) { return (x - m) * (x - m); }) / total_mass();
}

const TwTable& default_tw_table() {
  static const TwTable table = [] {
    TwTable t = hastings_mcleod();
    f_gue_from_q(t);
    return t;
  }();
  return table;
}

double f_gue(double s) { return default_tw_table().f_gue(s); }

double f_gue_quantile(double p) { return default_tw_table().quantile(p); }

void write_csv(std::ostream& out, const TwTable& table) {
  if (!table.has_cdf()) throw PreconditionError("write_csv: F column not filled");
  out << "s,q,F\n";
  char buf[96];
  for (std::size_t i = 0; i < table.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.3f,%.12e,%.12e\n", table.s[i], table.q[i],
                  table.cdf[i]);
    out << buf;
  }
}

}  // namespace lpptw
