#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "lpptw/rng.hpp"

namespace lpptw {

struct Gaussian {
  double mean = 0.0;
  double stddev = 1.0;
};
struct Exponential {
  double rate = 1.0;
};
// Support {0, 1, 2, ...} with P(X = n) = (1 - q) q^n.
struct Geometric {
  double q = 0.5;
};
struct Rademacher {};
struct UniformInterval {
  double a = 0.0;
  double b = 1.0;
};
// X = x1 with probability p1, x2 otherwise.
struct TwoPoint {
  double x1 = -1.0;
  double p1 = 0.5;
  double x2 = 1.0;
};

struct Atom {
  double value;
  double probability;
};

/// An iid weight law with finite fourth moment and closed-form moments.
///
/// Parameters are validated at construction; a constructed distribution is
/// immutable and may be shared freely between threads.
class WeightDistribution {
 public:
  using Variant = std::variant<Gaussian, Exponential, Geometric, Rademacher,
                               UniformInterval, TwoPoint>;

  explicit WeightDistribution(Variant variant);

  static WeightDistribution gaussian(double mean = 0.0, double stddev = 1.0) {
    return WeightDistribution(Gaussian{mean, stddev});
  }
  static WeightDistribution exponential(double rate = 1.0) {
    return WeightDistribution(Exponential{rate});
  }
  static WeightDistribution geometric(double q) {
    return WeightDistribution(Geometric{q});
  }
  static WeightDistribution rademacher() {
    return WeightDistribution(Rademacher{});
  }
  static WeightDistribution uniform(double a, double b) {
    return WeightDistribution(UniformInterval{a, b});
  }
  static WeightDistribution two_point(double x1, double p1, double x2) {
    return WeightDistribution(TwoPoint{x1, p1, x2});
  }

  // Tagged record, e.g. {"type": "exponential", "rate": 1.0}.
  static WeightDistribution from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  // Accepts JSON record text, a descriptor such as "gaussian(mean=0;stddev=2)"
  // or a bare type name ("rademacher").
  static WeightDistribution parse(const std::string& text);
  // Compact comma-free descriptor, e.g. "exponential(rate=1)".
  std::string descriptor() const;

  const Variant& variant() const { return variant_; }
  std::string type_name() const;

  double mean() const { return mean_; }
  double variance() const { return variance_; }
  double stddev() const;
  double third_central_moment() const { return third_central_; }
  double fourth_central_moment() const { return fourth_central_; }
  // E X^p for p in 1..4.
  double raw_moment(int p) const;

  // Finite support, listed in increasing order; empty for continuous laws
  // and for the (infinite-support) geometric law.
  std::vector<Atom> atoms() const;

  double draw(RngStream& stream) const;
  void sample_into(RngStream& stream, std::span<double> out) const;

 private:
  Variant variant_;
  double mean_ = 0.0;
  double variance_ = 0.0;
  double third_central_ = 0.0;
  double fourth_central_ = 0.0;
};

/// n iid draws; deterministic given the stream's (seed, stream_id, counter).
std::vector<double> sample(const WeightDistribution& dist, RngStream& stream,
                           std::size_t n);

struct Standardization {
  double mean;
  double stddev;
};

/// (mu, sigma) such that (X - mu) / sigma has mean 0 and variance 1.
Standardization standardize(const WeightDistribution& dist);

}  // namespace lpptw
