#include "lpptw/weights.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "lpptw/errors.hpp"

namespace lpptw {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

double number_field(const nlohmann::json& j, const char* key, double fallback,
                    bool required) {
  if (!j.contains(key)) {
    if (required) {
      throw ParameterError(std::string("distribution is missing field '") +
                           key + "'");
    }
    return fallback;
  }
  const auto& v = j.at(key);
  if (!v.is_number()) {
    throw ParameterError(std::string("distribution field '") + key +
                         "' must be a number");
  }
  return v.get<double>();
}

}  // namespace

WeightDistribution::WeightDistribution(Variant variant)
    : variant_(std::move(variant)) {
  std::visit(
      Overloaded{
          [&](const Gaussian& g) {
            require(std::isfinite(g.mean), "gaussian mean must be finite");
            require(std::isfinite(g.stddev) && g.stddev > 0.0,
                    "gaussian stddev must be > 0");
            const double s2 = g.stddev * g.stddev;
            mean_ = g.mean;
            variance_ = s2;
            third_central_ = 0.0;
            fourth_central_ = 3.0 * s2 * s2;
          },
          [&](const Exponential& e) {
            require(std::isfinite(e.rate) && e.rate > 0.0,
                    "exponential rate must be > 0");
            const double s = 1.0 / e.rate;
            mean_ = s;
            variance_ = s * s;
            third_central_ = 2.0 * s * s * s;
            fourth_central_ = 9.0 * s * s * s * s;
          },
          [&](const Geometric& g) {
            require(g.q > 0.0 && g.q < 1.0, "geometric q must lie in (0, 1)");
            const double q = g.q;
            const double p = 1.0 - q;
            mean_ = q / p;
            variance_ = q / (p * p);
            third_central_ = q * (1.0 + q) / (p * p * p);
            fourth_central_ = q * (1.0 + 7.0 * q + q * q) / (p * p * p * p);
          },
          [&](const Rademacher&) {
            mean_ = 0.0;
            variance_ = 1.0;
            third_central_ = 0.0;
            fourth_central_ = 1.0;
          },
          [&](const UniformInterval& u) {
            require(std::isfinite(u.a) && std::isfinite(u.b) && u.a < u.b,
                    "uniform interval requires a < b");
            const double w = u.b - u.a;
            mean_ = 0.5 * (u.a + u.b);
            variance_ = w * w / 12.0;
            third_central_ = 0.0;
            fourth_central_ = w * w * w * w / 80.0;
          },
          [&](const TwoPoint& t) {
            require(t.p1 > 0.0 && t.p1 < 1.0, "two_point p1 must lie in (0, 1)");
            require(std::isfinite(t.x1) && std::isfinite(t.x2) && t.x1 != t.x2,
                    "two_point requires distinct finite x1, x2");
            const double p2 = 1.0 - t.p1;
            mean_ = t.p1 * t.x1 + p2 * t.x2;
            const double d1 = t.x1 - mean_;
            const double d2 = t.x2 - mean_;
            variance_ = t.p1 * d1 * d1 + p2 * d2 * d2;
            third_central_ = t.p1 * d1 * d1 * d1 + p2 * d2 * d2 * d2;
            fourth_central_ = t.p1 * d1 * d1 * d1 * d1 + p2 * d2 * d2 * d2 * d2;
          },
      },
      variant_);
}

double WeightDistribution::stddev() const { return std::sqrt(variance_); }

double WeightDistribution::raw_moment(int p) const {
  const double m = mean_;
  switch (p) {
    case 1:
      return m;
    case 2:
      return variance_ + m * m;
    case 3:
      return third_central_ + 3.0 * m * variance_ + m * m * m;
    case 4:
      return fourth_central_ + 4.0 * m * third_central_ +
             6.0 * m * m * variance_ + m * m * m * m;
    default:
      throw DomainError("raw_moment supports orders 1..4");
  }
}

std::string WeightDistribution::type_name() const {
  return std::visit(Overloaded{
                        [](const Gaussian&) { return "gaussian"; },
                        [](const Exponential&) { return "exponential"; },
                        [](const Geometric&) { return "geometric"; },
                        [](const Rademacher&) { return "rademacher"; },
                        [](const UniformInterval&) { return "uniform"; },
                        [](const TwoPoint&) { return "two_point"; },
                    },
                    variant_);
}

WeightDistribution WeightDistribution::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    throw ParameterError("distribution must be a record with a string 'type'");
  }
  const std::string type = j.at("type").get<std::string>();
  if (type == "gaussian" || type == "normal") {
    return gaussian(number_field(j, "mean", 0.0, false),
                    number_field(j, "stddev", 1.0, false));
  }
  if (type == "exponential") {
    return exponential(number_field(j, "rate", 1.0, false));
  }
  if (type == "geometric") return geometric(number_field(j, "q", 0.0, true));
  if (type == "rademacher") return rademacher();
  if (type == "uniform") {
    return uniform(number_field(j, "a", 0.0, true),
                   number_field(j, "b", 0.0, true));
  }
  if (type == "two_point") {
    return two_point(number_field(j, "x1", 0.0, true),
                     number_field(j, "p1", 0.0, true),
                     number_field(j, "x2", 0.0, true));
  }
  throw ParameterError("unknown distribution type '" + type + "'");
}

WeightDistribution WeightDistribution::parse(const std::string& text) {
  const auto first = text.find_first_not_of(" \t");
  if (first == std::string::npos) throw ParameterError("empty distribution text");
  if (text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParameterError(std::string("distribution JSON: ") + e.what());
    }
    return from_json(j);
  }
  nlohmann::json j;
  const auto open = text.find('(');
  j["type"] = text.substr(first, open == std::string::npos ? std::string::npos : open - first);
  if (open != std::string::npos) {
    const auto close = text.rfind(')');
    if (close == std::string::npos || close < open) {
      throw ParameterError("distribution descriptor '" + text + "' is malformed");
    }
    std::string body = text.substr(open + 1, close - open - 1);
    std::size_t pos = 0;
    while (pos < body.size()) {
      std::size_t end = body.find(';', pos);
      if (end == std::string::npos) end = body.size();
      const std::string item = body.substr(pos, end - pos);
      const auto eq = item.find('=');
      if (eq == std::string::npos) {
        throw ParameterError("distribution descriptor item '" + item + "' needs key=value");
      }
      const std::string value = item.substr(eq + 1);
      char* stop = nullptr;
      const double number = std::strtod(value.c_str(), &stop);
      if (value.empty() || *stop != '\0') {
        throw ParameterError("distribution descriptor value '" + value + "' is not a number");
      }
      j[item.substr(0, eq)] = number;
      pos = end + 1;
    }
  }
  return from_json(j);
}

nlohmann::json WeightDistribution::to_json() const {
  return std::visit(
      Overloaded{
          [](const Gaussian& g) {
            return nlohmann::json{{"type", "gaussian"},
                                  {"mean", g.mean},
                                  {"stddev", g.stddev}};
          },
          [](const Exponential& e) {
            return nlohmann::json{{"type", "exponential"}, {"rate", e.rate}};
          },
          [](const Geometric& g) {
            return nlohmann::json{{"type", "geometric"}, {"q", g.q}};
          },
          [](const Rademacher&) {
            return nlohmann::json{{"type", "rademacher"}};
          },
          [](const UniformInterval& u) {
            return nlohmann::json{{"type", "uniform"}, {"a", u.a}, {"b", u.b}};
          },
          [](const TwoPoint& t) {
            return nlohmann::json{
                {"type", "two_point"}, {"x1", t.x1}, {"p1", t.p1}, {"x2", t.x2}};
          },
      },
      variant_);
}

std::string WeightDistribution::descriptor() const {
  return std::visit(
      Overloaded{
          [](const Gaussian& g) {
            return "gaussian(mean=" + fmt_num(g.mean) +
                   ";stddev=" + fmt_num(g.stddev) + ")";
          },
          [](const Exponential& e) {
            return "exponential(rate=" + fmt_num(e.rate) + ")";
          },
          [](const Geometric& g) { return "geometric(q=" + fmt_num(g.q) + ")"; },
          [](const Rademacher&) { return std::string("rademacher()"); },
          [](const UniformInterval& u) {
            return "uniform(a=" + fmt_num(u.a) + ";b=" + fmt_num(u.b) + ")";
          },
          [](const TwoPoint& t) {
            return "two_point(x1=" + fmt_num(t.x1) + ";p1=" + fmt_num(t.p1) +
                   ";x2=" + fmt_num(t.x2) + ")";
          },
      },
      variant_);
}

std::vector<Atom> WeightDistribution::atoms() const {
  if (std::holds_alternative<Rademacher>(variant_)) {
    return {{-1.0, 0.5}, {1.0, 0.5}};
  }
  if (const auto* t = std::get_if<TwoPoint>(&variant_)) {
    Atom a{t->x1, t->p1};
    Atom b{t->x2, 1.0 - t->p1};
    if (b.value < a.value) std::swap(a, b);
    return {a, b};
  }
  return {};
}

double WeightDistribution::draw(RngStream& stream) const {
  return std::visit(
      Overloaded{
          [&](const Gaussian& g) { return g.mean + g.stddev * stream.normal(); },
          [&](const Exponential& e) { return stream.exponential() / e.rate; },
          [&](const Geometric& g) {
            // P(X >= n) = P(U <= q^n) = q^n.
            return std::floor(std::log(stream.uniform()) * (1.0 / std::log(g.q)));
          },
          [&](const Rademacher&) {
            return (stream.next_u64() >> 63) != 0 ? 1.0 : -1.0;
          },
          [&](const UniformInterval& u) {
            return u.a + (u.b - u.a) * stream.uniform();
          },
          [&](const TwoPoint& t) {
            return stream.uniform() < t.p1 ? t.x1 : t.x2;
          },
      },
      variant_);
}

void WeightDistribution::sample_into(RngStream& stream,
                                     std::span<double> out) const {
  // Hoist the variant dispatch out of the hot loop for the common laws.
  if (const auto* e = std::get_if<Exponential>(&variant_)) {
    const double scale = 1.0 / e->rate;
    for (double& v : out) v = stream.exponential() * scale;
    return;
  }
  if (const auto* g = std::get_if<Gaussian>(&variant_)) {
    for (double& v : out) v = g->mean + g->stddev * stream.normal();
    return;
  }
  if (const auto* g = std::get_if<Geometric>(&variant_)) {
    const double inv_log_q = 1.0 / std::log(g->q);
    for (double& v : out) v = std::floor(std::log(stream.uniform()) * inv_log_q);
    return;
  }
  for (double& v : out) v = draw(stream);
}

std::vector<double> sample(const WeightDistribution& dist, RngStream& stream,
                           std::size_t n) {
  if (n == 0) throw PreconditionError("sample requires n >= 1");
  std::vector<double> out(n);
  dist.sample_into(stream, out);
  return out;
}

Standardization standardize(const WeightDistribution& dist) {
  return {dist.mean(), dist.stddev()};
}

}  // namespace lpptw
