#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "lpptw/rng.hpp"
#include "lpptw/weights.hpp"

namespace lpptw {

struct ExitInterval {
  double u;       // < 0
  double v;       // > 0
  double weight;  // probability of choosing this interval
};

/// Randomized exit-interval embedding of a mean-zero discrete law.
///
/// The pair (u_r, v_s) is chosen with probability proportional to
/// (v_s - u_r) mu(u_r) mu(v_s); Brownian motion then runs until it leaves
/// (u_r, v_s). Mass at 0 stops immediately.
struct ExitIntervalLaw {
  std::vector<Atom> negative;  // increasing
  std::vector<Atom> positive;  // increasing
  double zero_mass = 0.0;
  std::vector<ExitInterval> intervals;  // row-major over (negative, positive)
};

/// Target atoms must be finite, positive-probability, sum to 1 and have mean
/// 0 (|mean| <= 1e-12). Throws PreconditionError otherwise, and
/// NumericalError if the construction fails to reproduce an atom to 1e-12.
ExitIntervalLaw build_exit_law(const std::vector<Atom>& target);
/// Discrete WeightDistribution targets only; continuous laws and the
/// infinite-support geometric law are unsupported (PreconditionError).
ExitIntervalLaw build_exit_law(const WeightDistribution& target);

// Probability that Brownian motion from 0 hits v before u (u < 0 < v).
double hit_upper_probability(double u, double v);

/// Probability of each target atom implied by the law (analytic; used for
/// the marginal check). Order: negative atoms, then 0 if present, then
/// positive atoms.
std::vector<Atom> embedded_marginal(const ExitIntervalLaw& law);

struct StoppingRecord {
  double u = 0.0;
  double v = 0.0;
  double tau = 0.0;
  double b_tau = 0.0;
};

inline constexpr double kMaxEmbeddingStep = 1e-4;

/// One draw of (tau, B_tau). Brownian motion is advanced in Euler steps of
/// size dt (0 < dt <= 1e-4); between grid points a crossing of either barrier
/// is detected with the Brownian-bridge probability exp(-2 (b-x)(b-y) / dt).
/// B_tau is snapped onto the barrier; tau is the end of the crossing step.
StoppingRecord simulate_embedding(const ExitIntervalLaw& law, RngStream& stream,
                                  double dt = kMaxEmbeddingStep);

/// Partial sums B_{tau_1 + ... + tau_i}, i = 1..n, of n independent draws.
std::vector<double> embedded_walk(const ExitIntervalLaw& law, RngStream& stream,
                                  std::size_t n, double dt = kMaxEmbeddingStep);

struct EmbeddingSummary {
  std::size_t samples = 0;
  double mean_tau = 0.0;
  double stderr_tau = 0.0;
  double mean_tau2 = 0.0;
  double stderr_tau2 = 0.0;
  double mean_b = 0.0;
  double target_second_moment = 0.0;  // E X^2
  double target_fourth_moment = 0.0;  // E X^4
  std::vector<Atom> empirical;        // observed frequency of each target atom
  std::vector<Atom> expected;         // target law
  std::size_t off_atom = 0;           // draws not landing on a target atom
};

/// Draw i uses the stream (seed, kSkorohod, i); results do not depend on the
/// worker count.
std::vector<StoppingRecord> sample_embedding(const ExitIntervalLaw& law,
                                             std::size_t samples, std::uint64_t seed,
                                             std::size_t workers,
                                             double dt = kMaxEmbeddingStep);

EmbeddingSummary summarize_embedding(const ExitIntervalLaw& law,
                                     const std::vector<StoppingRecord>& records);

// CSV "tau,b_tau".
void write_csv(std::ostream& out, const std::vector<StoppingRecord>& records);

}  // namespace lpptw
