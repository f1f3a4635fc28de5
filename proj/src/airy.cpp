#include "lpptw/airy.hpp"

#include <cmath>
#include <numbers>

#include "lpptw/errors.hpp"

namespace lpptw {
namespace {

using real = long double;

constexpr real kPi = 3.141592653589793238462643383279502884L;
// Ai(0) = 3^(-2/3) / Gamma(2/3),  -Ai'(0) = 3^(-1/3) / Gamma(1/3).
constexpr real kAi0 = 0.355028053887817239260063186004183176L;
constexpr real kMinusAiPrime0 = 0.258819403792806798405183560189203963L;

constexpr real kSeriesLimit = 4.5L;
constexpr real kAsymptoticLimit = 8.0L;
constexpr real kTaylorStep = 0.25L;

struct Pair {
  real y;
  real dy;
};

Pair maclaurin(real x) {
  // Ai = c1 f - c2 g with
  //   f = sum 3^k (1/3)_k x^{3k} / (3k)!,  g = sum 3^k (2/3)_k x^{3k+1} / (3k+1)!
  const real x3 = x * x * x;
  real f = 1.0L, t = 1.0L;         // f terms
  real g = x, u = x;               // g terms
  real v = x * x / 2, df = v;      // f' terms, starting at k = 1
  real dg = 1.0L, w = 1.0L;        // g' terms
  for (int k = 1; k < 200; ++k) {
    const real kk = static_cast<real>(k);
    t *= x3 / ((3 * kk - 1) * (3 * kk));
    u *= x3 / ((3 * kk) * (3 * kk + 1));
    v *= x3 / ((3 * kk) * (3 * kk + 2));
    w *= x3 / ((3 * kk) * (3 * kk - 2));
    f += t;
    g += u;
    df += v;
    dg += w;
    const real scale = std::fabs(f) + std::fabs(g) + std::fabs(df) + std::fabs(dg);
    if (std::fabs(t) + std::fabs(u) + std::fabs(v) + std::fabs(w) < 1e-24L * scale) {
      break;
    }
  }
  return {kAi0 * f - kMinusAiPrime0 * g, kAi0 * df - kMinusAiPrime0 * dg};
}

// Coefficients u_k, v_k of the Airy asymptotic expansions.
struct AsymptoticCoefficients {
  static constexpr int kCount = 40;
  real u[kCount];
  real v[kCount];
  AsymptoticCoefficients() {
    u[0] = 1.0L;
    v[0] = 1.0L;
    for (int k = 1; k < kCount; ++k) {
      const real kk = static_cast<real>(k);
      u[k] = u[k - 1] * (6 * kk - 5) * (6 * kk - 3) * (6 * kk - 1) /
             (216.0L * kk * (2 * kk - 1));
      v[k] = -(6 * kk + 1) / (6 * kk - 1) * u[k];
    }
  }
};

const AsymptoticCoefficients& coefficients() {
  static const AsymptoticCoefficients c;
  return c;
}

// sum_k (-1)^k c[first + stride k] zeta^{-(first + stride k)}, stopping at the
// smallest term.
real asymptotic_sum(const real* c, real zeta, int first, int stride) {
  real sum = 0.0L;
  real previous = INFINITY;
  real sign = 1.0L;
  for (int n = first; n < AsymptoticCoefficients::kCount; n += stride) {
    const real term = sign * c[n] / std::pow(zeta, static_cast<real>(n));
    if (std::fabs(term) > previous) break;
    sum += term;
    previous = std::fabs(term);
    if (previous < 1e-22L * std::fabs(sum)) break;
    sign = -sign;
  }
  return sum;
}

Pair asymptotic_positive(real x) {
  const auto& c = coefficients();
  const real zeta = 2.0L / 3.0L * x * std::sqrt(x);
  const real quarter = std::pow(x, 0.25L);
  const real prefactor = std::exp(-zeta) / (2.0L * std::sqrt(kPi));
  // Signs alternate with k, so a stride-1 alternating sum.
  return {prefactor / quarter * asymptotic_sum(c.u, zeta, 0, 1),
          -prefactor * quarter * asymptotic_sum(c.v, zeta, 0, 1)};
}

Pair asymptotic_negative(real z) {
  const auto& c = coefficients();
  const real zeta = 2.0L / 3.0L * z * std::sqrt(z);
  const real quarter = std::pow(z, 0.25L);
  const real phase = zeta - kPi / 4;
  const real cs = std::cos(phase);
  const real sn = std::sin(phase);
  const real u_even = asymptotic_sum(c.u, zeta, 0, 2);
  const real u_odd = asymptotic_sum(c.u, zeta, 1, 2);
  const real v_even = asymptotic_sum(c.v, zeta, 0, 2);
  const real v_odd = asymptotic_sum(c.v, zeta, 1, 2);
  const real inv_sqrt_pi = 1.0L / std::sqrt(kPi);
  return {inv_sqrt_pi / quarter * (cs * u_even + sn * u_odd),
          inv_sqrt_pi * quarter * (sn * v_even - cs * v_odd)};
}

// One Taylor step of y'' = x y from (x0, y, y') by h.
Pair taylor_step(real x0, Pair s, real h) {
  real a_prev2 = 0.0L;  // a_{n-1}
  real a_prev = s.y;    // a_n, n = 0
  real a_cur = s.dy;    // a_{n+1}
  real y = s.y + s.dy * h;
  real dy = s.dy;
  real hp = h;  // h^{n+1}
  for (int n = 0; n < 120; ++n) {
    // a_{n+2} = (x0 a_n + a_{n-1}) / ((n+2)(n+1))
    const real nn = static_cast<real>(n);
    const real a_next = (x0 * a_prev + a_prev2) / ((nn + 2) * (nn + 1));
    const real term_dy = (nn + 2) * a_next * hp;
    hp *= h;
    const real term_y = a_next * hp;
    y += term_y;
    dy += term_dy;
    a_prev2 = a_prev;
    a_prev = a_cur;
    a_cur = a_next;
    if (n > 4 && std::fabs(term_y) + std::fabs(term_dy) <
                     1e-24L * (std::fabs(y) + std::fabs(dy))) {
      break;
    }
  }
  return {y, dy};
}

Pair continue_from(real anchor, Pair seed, real x) {
  const int steps = static_cast<int>(std::ceil(std::fabs(x - anchor) / kTaylorStep));
  const real h = (x - anchor) / steps;
  Pair s = seed;
  for (int i = 0; i < steps; ++i) s = taylor_step(anchor + i * h, s, h);
  return s;
}

}  // namespace

AiryValue airy(double x) {
  if (!(std::abs(x) <= kAiryDomain)) {
    throw DomainError("airy: |x| must be <= 30");
  }
  const real xl = x;
  Pair p;
  if (std::fabs(xl) <= kSeriesLimit) {
    p = maclaurin(xl);
  } else if (xl >= kAsymptoticLimit) {
    p = asymptotic_positive(xl);
  } else if (xl <= -kAsymptoticLimit) {
    p = asymptotic_negative(-xl);
  } else if (xl > 0) {
    p = continue_from(kAsymptoticLimit, asymptotic_positive(kAsymptoticLimit), xl);
  } else {
    p = continue_from(-kAsymptoticLimit, asymptotic_negative(kAsymptoticLimit), xl);
  }
  return {x, static_cast<double>(p.y), static_cast<double>(p.dy)};
}

}  // namespace lpptw
