#pragma once

namespace lpptw {

struct AiryValue {
  double x;
  double ai;
  double ai_prime;
};

inline constexpr double kAiryDomain = 30.0;

/// Ai(x) and Ai'(x) for |x| <= 30 (DomainError otherwise).
///
/// |x| <= 4.5: Maclaurin series in extended precision.
/// |x| >= 8: asymptotic expansions (exponential for x > 0, oscillatory for
///   x < 0), truncated at the smallest term.
/// 4.5 < |x| < 8: Taylor continuation of the Airy equation y'' = x y from
///   the asymptotic value at x = +-8 toward the origin.
/// Relative accuracy is about 1e-13 on [-10, 10] away from the zeros of Ai.
AiryValue airy(double x);

}  // namespace lpptw
