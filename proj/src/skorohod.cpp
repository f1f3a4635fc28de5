#include "lpptw/skorohod.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "lpptw/errors.hpp"
#include "lpptw/parallel.hpp"

namespace lpptw {

double hit_upper_probability(double u, double v) {
  if (!(u < 0.0 && v > 0.0)) throw DomainError("hit_upper_probability: need u < 0 < v");
  return -u / (v - u);
}

ExitIntervalLaw build_exit_law(const std::vector<Atom>& target) {
  if (target.empty()) throw PreconditionError("build_exit_law: empty target");
  double total = 0.0, mean = 0.0;
  for (const Atom& a : target) {
    if (!std::isfinite(a.value) || !(a.probability > 0.0)) {
      throw PreconditionError("build_exit_law: atoms need finite values and positive mass");
    }
    total += a.probability;
    mean += a.value * a.probability;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw PreconditionError("build_exit_law: probabilities must sum to 1");
  }
  if (std::abs(mean) > 1e-12) {
    throw PreconditionError("build_exit_law: target must have mean 0");
  }

  std::vector<Atom> sorted = target;
  auto by_value = [](const Atom& a, const Atom& b) { return a.value < b.value; };
  std::sort(sorted.begin(), sorted.end(), by_value);
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].value == sorted[i - 1].value) {
      throw PreconditionError("build_exit_law: duplicate atom values");
    }
  }

  ExitIntervalLaw law;
  for (const Atom& a : sorted) {
    if (a.value < 0) {
      law.negative.push_back(a);
    } else if (a.value > 0) {
      law.positive.push_back(a);
    } else {
      law.zero_mass += a.probability;
    }
  }
  if (law.negative.empty() != law.positive.empty()) {
    throw PreconditionError("build_exit_law: mean-zero law needs atoms on both sides");
  }

  // Normalizer: sum_s v_s mu(v_s) = sum_r |u_r| mu(u_r), each half of E|X|.
  double half_abs = 0.0;
  for (const Atom& a : law.positive) half_abs += a.value * a.probability;
  for (const Atom& a : law.negative) half_abs -= a.value * a.probability;
  half_abs *= 0.5;
  for (const Atom& n : law.negative) {
    for (const Atom& p : law.positive) {
      law.intervals.push_back(
          {n.value, p.value, (p.value - n.value) * n.probability * p.probability / half_abs});
    }
  }

  const std::vector<Atom> implied = embedded_marginal(law);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (std::abs(implied[i].probability - sorted[i].probability) > 1e-12) {
      throw NumericalError("build_exit_law: embedded marginal does not reproduce the target");
    }
  }
  return law;
}

ExitIntervalLaw build_exit_law(const WeightDistribution& target) {
  const std::vector<Atom> atoms = target.atoms();
  if (atoms.empty()) {
    throw PreconditionError("build_exit_law: " + target.type_name() +
                            " is not a finite discrete law (unsupported)");
  }
  return build_exit_law(atoms);
}

std::vector<Atom> embedded_marginal(const ExitIntervalLaw& law) {
  std::vector<Atom> out;
  const std::size_t np = law.positive.size();
  for (std::size_t r = 0; r < law.negative.size(); ++r) {
    double p = 0.0;
    for (std::size_t s = 0; s < np; ++s) {
      const ExitInterval& e = law.intervals[r * np + s];
      p += e.weight * (1.0 - hit_upper_probability(e.u, e.v));
    }
    out.push_back({law.negative[r].value, p});
  }
  if (law.zero_mass > 0) out.push_back({0.0, law.zero_mass});
  for (std::size_t s = 0; s < np; ++s) {
    double p = 0.0;
    for (std::size_t r = 0; r < law.negative.size(); ++r) {
      const ExitInterval& e = law.intervals[r * np + s];
      p += e.weight * hit_upper_probability(e.u, e.v);
    }
    out.push_back({law.positive[s].value, p});
  }
  return out;
}

StoppingRecord simulate_embedding(const ExitIntervalLaw& law, RngStream& stream,
                                  double dt) {
  if (!(dt > 0.0 && dt <= kMaxEmbeddingStep)) {
    throw PreconditionError("simulate_embedding: need 0 < dt <= 1e-4");
  }
  double pick = stream.uniform();
  if (pick < law.zero_mass || law.intervals.empty()) return {};
  pick -= law.zero_mass;
  const ExitInterval* chosen = &law.intervals.back();
  for (const ExitInterval& e : law.intervals) {
    if (pick < e.weight) {
      chosen = &e;
      break;
    }
    pick -= e.weight;
  }
  const double u = chosen->u, v = chosen->v;
  const double sd = std::sqrt(dt);
  // Bridge crossing probability is below 1e-13 once (b-x)(b-y) > 15 dt.
  const double near = 15.0 * dt;
  const double inv_dt = 1.0 / dt;
  double x = 0.0;
  std::uint64_t steps = 0;
  for (;;) {
    const double y = x + sd * stream.normal();
    ++steps;
    if (y >= v) return {u, v, steps * dt, v};
    if (y <= u) return {u, v, steps * dt, u};
    const double gap_v = (v - x) * (v - y);
    const double gap_u = (x - u) * (y - u);
    if (gap_v < near || gap_u < near) {
      const double p_v = gap_v < near ? std::exp(-2.0 * gap_v * inv_dt) : 0.0;
      const double p_u = gap_u < near ? std::exp(-2.0 * gap_u * inv_dt) : 0.0;
      const double w = stream.uniform();
      if (w < p_v) return {u, v, steps * dt, v};
      if (w < p_v + p_u) return {u, v, steps * dt, u};
    }
    x = y;
  }
}

std::vector<double> embedded_walk(const ExitIntervalLaw& law, RngStream& stream,
                                  std::size_t n, double dt) {
  if (n == 0) throw PreconditionError("embedded_walk: n must be >= 1");
  std::vector<double> out(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += simulate_embedding(law, stream, dt).b_tau;
    out[i] = sum;
  }
  return out;
}

std::vector<StoppingRecord> sample_embedding(const ExitIntervalLaw& law,
                                             std::size_t samples, std::uint64_t seed,
                                             std::size_t workers, double dt) {
  return parallel_map<StoppingRecord>(samples, workers, [&](std::size_t i) {
    RngStream stream = RngStream::for_sample(seed, StreamTag::kSkorohod, i);
    return simulate_embedding(law, stream, dt);
  });
}

EmbeddingSummary summarize_embedding(const ExitIntervalLaw& law,
                                     const std::vector<StoppingRecord>& records) {
  EmbeddingSummary out;
  out.samples = records.size();
  out.expected = embedded_marginal(law);
  for (const Atom& a : out.expected) {
    out.target_second_moment += a.probability * a.value * a.value;
    out.target_fourth_moment += a.probability * std::pow(a.value, 4);
    out.empirical.push_back({a.value, 0.0});
  }
  if (records.empty()) return out;
  const double n = static_cast<double>(records.size());
  double s1 = 0, s2 = 0, s4 = 0, sb = 0;
  for (const StoppingRecord& r : records) {
    const double t2 = r.tau * r.tau;
    s1 += r.tau;
    s2 += t2;
    s4 += t2 * t2;
    sb += r.b_tau;
    auto it = std::find_if(out.empirical.begin(), out.empirical.end(),
                           [&](const Atom& a) { return a.value == r.b_tau; });
    if (it == out.empirical.end()) {
      ++out.off_atom;
    } else {
      it->probability += 1.0;
    }
  }
  for (Atom& a : out.empirical) a.probability /= n;
  out.mean_tau = s1 / n;
  out.mean_tau2 = s2 / n;
  out.mean_b = sb / n;
  if (records.size() > 1) {
    out.stderr_tau = std::sqrt(std::max(s2 / n - out.mean_tau * out.mean_tau, 0.0) / (n - 1));
    out.stderr_tau2 =
        std::sqrt(std::max(s4 / n - out.mean_tau2 * out.mean_tau2, 0.0) / (n - 1));
  }
  return out;
}

void write_csv(std::ostream& out, const std::vector<StoppingRecord>& records) {
  out << "tau,b_tau\n";
  char buf[64];
  for (const StoppingRecord& r : records) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", r.tau, r.b_tau);
    out << buf;
  }
}

}  // namespace lpptw
