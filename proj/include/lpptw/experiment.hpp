#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lpptw/percolation.hpp"
#include "lpptw/weights.hpp"

namespace lpptw {

enum class ExperimentKind {
  kCltTheoremForm,
  kCltCorollary,
  kGueEdge,
  kGammaTransform,
  kTimeConstant,
  kTwTable,
  kSkorohodCheck,
};

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kCltCorollary;
  // Defaults per kind: exponential(1) for clt_corollary and square shapes,
  // gaussian(0,1) for clt_theorem_form and thin rectangles, rademacher for
  // skorohod_check.
  std::optional<WeightDistribution> distribution;
  std::size_t N = 1000;
  std::size_t k = 2;
  std::vector<std::size_t> k_schedule;  // overrides k where supported
  std::size_t samples = 1000;
  std::size_t M = 512;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::string output;  // report path; empty prints to stdout
  double alpha = 0.05;
  bool quick = false;
  PassageKind passage = PassageKind::kLastPassage;

  // time_constant
  std::string shape = "square";  // or "thin"
  double x = 1.0;
  double y = 1.0;
  std::vector<std::size_t> n_schedule{500, 1000, 2000, 4000};
  std::size_t replicates = 50;
  double extrapolation_exponent = 1.0 / 3.0;

  // skorohod_check
  double dt = 1e-4;
  std::size_t walk_length = 0;  // > 0 adds the embedded-vs-direct walk test

  // Diagnostic: make the job for this sample index throw.
  std::optional<std::size_t> fail_sample;

  // Sizes actually used (quick mode divides sample counts by 10).
  std::size_t effective_samples() const;
  std::size_t effective_replicates() const;
  std::vector<std::size_t> ks() const;
  WeightDistribution effective_distribution() const;
};

/// Validates and converts a config record. The seed is mandatory; unknown
/// keys are rejected. Throws ConfigError (a ValidationError).
ExperimentConfig config_from_json(const nlohmann::json& j);
// Full effective config, without execution-only fields (workers, output).
nlohmann::json config_to_json(const ExperimentConfig& config);

/// Reads a config file (YAML; JSON is accepted as a YAML subset) into a
/// record, applying "key=value" overrides (values parsed as YAML) on top.
nlohmann::json load_config(const std::string& path,
                           const std::vector<std::string>& overrides = {});
nlohmann::json yaml_text_to_json(const std::string& text);

struct SideFile {
  std::string suffix;   // e.g. "samples.csv"
  std::string content;  // CSV text
};

/// Report document plus CSV side files. Everything outside
/// document["execution"] is a pure function of the config.
struct ExperimentReport {
  nlohmann::json document;
  std::vector<SideFile> side_files;

  bool valid() const;
  // Serialized document (two-space indented, sorted keys, trailing newline).
  std::string dump() const;
  // Same, without the "execution" block; used for determinism comparisons.
  std::string dump_deterministic() const;
};

/// Runs the configured pipeline. A failing sample aborts the run and yields
/// a report with valid = false naming the sample; other errors propagate.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Writes the report (and side files as "<stem>.<suffix>" next to it).
/// Empty path: document to stdout, side files skipped.
void write_report(ExperimentReport& report, const std::string& path);

/// Parses a report; an unknown format_version is a ConfigError.
nlohmann::json read_report(const std::string& text);

}  // namespace lpptw
