// Command-line front end: sampling, tables, KS tests and experiments.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lpptw/errors.hpp"
#include "lpptw/experiment.hpp"
#include "lpptw/kernels.hpp"
#include "lpptw/parallel.hpp"
#include "lpptw/paths.hpp"
#include "lpptw/percolation.hpp"
#include "lpptw/rmt.hpp"
#include "lpptw/stats.hpp"
#include "lpptw/tracy_widom.hpp"
#include "lpptw/version.hpp"

namespace {

using namespace lpptw;

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

// Opens `path` for writing, or returns stdout for "" / "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_.open(path, std::ios::binary);
    if (!file_) throw IoError("cannot write '" + path + "'");
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Numbers from one CSV column (by header name, or the last column). Lines
// that do not parse as numbers (headers) are skipped.
std::vector<double> read_column(const std::string& path, const std::string& column) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::vector<double> out;
  std::string line;
  long index = -1;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (first) {
      first = false;
      if (!column.empty()) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
          if (cells[i] == column) index = static_cast<long>(i);
        }
        if (index < 0) throw ValidationError("column '" + column + "' not found in " + path);
        continue;
      }
    }
    const std::size_t at = index >= 0 ? static_cast<std::size_t>(index) : cells.size() - 1;
    if (at >= cells.size()) throw ValidationError("short row in " + path);
    char* stop = nullptr;
    const double v = std::strtod(cells[at].c_str(), &stop);
    if (cells[at].empty() || *stop != '\0') continue;
    out.push_back(v);
  }
  return out;
}

nlohmann::json ks_to_json(const KsResult& r) {
  nlohmann::json j;
  j["statistic"] = r.statistic;
  j["n1"] = r.n1;
  if (r.one_sample) {
    j["n2"] = "inf";
  } else {
    j["n2"] = r.n2;
  }
  j["alpha"] = r.alpha;
  j["threshold"] = r.threshold;
  j["reject"] = r.reject;
  return j;
}

int finish_report(ExperimentReport& report, const std::string& output) {
  write_report(report, output);
  if (report.valid()) return 0;
  const auto& f = report.document.at("failure");
  std::cerr << "lpptw: " << f.at("message").get<std::string>() << "\n";
  const std::string category = f.value("category", "other");
  if (category == "validation") return kExitValidation;
  return kExitNumerical;
}

int run_config(nlohmann::json j) {
  const ExperimentConfig config = config_from_json(j);
  ExperimentReport report = run_experiment(config);
  return finish_report(report, config.output);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Last-passage percolation, GUE edge and Tracy-Widom toolkit"};
  app.set_version_flag("--version", std::string(kLibraryVersion));
  app.require_subcommand(1);

  int status = 0;

  // sample-lpp
  auto* lpp = app.add_subcommand("sample-lpp", "Sample passage values of random weight arrays");
  std::string lpp_dist = "exponential";
  std::size_t lpp_n = 100, lpp_k = 4, lpp_samples = 1, lpp_workers = 1;
  std::uint64_t lpp_seed = 0;
  std::string lpp_kind = "L_last", lpp_out, lpp_weights_out;
  bool lpp_recover = false;
  lpp->add_option("--dist", lpp_dist, "Distribution (descriptor or JSON)")->capture_default_str();
  lpp->add_option("-N", lpp_n, "Columns")->check(CLI::PositiveNumber)->capture_default_str();
  lpp->add_option("-k", lpp_k, "Rows")->check(CLI::PositiveNumber)->capture_default_str();
  lpp->add_option("--seed", lpp_seed, "Seed")->required();
  lpp->add_option("--samples", lpp_samples, "Number of arrays")->capture_default_str();
  lpp->add_option("--workers", lpp_workers, "Threads")->check(CLI::PositiveNumber);
  lpp->add_option("--kind", lpp_kind, "L, R, L_last or L_first")->capture_default_str();
  lpp->add_option("--out", lpp_out, "CSV output (default stdout)");
  lpp->add_option("--weights-out", lpp_weights_out,
                  "Write the first weight array (.bin for binary, CSV otherwise)");
  lpp->add_flag("--recover", lpp_recover, "Also report the optimal partition");
  lpp->callback([&] {
    const WeightDistribution dist = WeightDistribution::parse(lpp_dist);
    const PassageKind kind = passage_kind_from_string(lpp_kind);
    struct Row {
      double value = 0;
      std::vector<std::size_t> partition;
    };
    const auto rows = parallel_map<Row>(lpp_samples, lpp_workers, [&](std::size_t i) {
      const WeightMatrix w =
          WeightMatrix::sample(dist, lpp_n, lpp_k, lpp_seed, stream_id_for(StreamTag::kWeights, i));
      if (i == 0 && !lpp_weights_out.empty()) {
        std::ofstream f(lpp_weights_out, std::ios::binary);
        if (!f) throw IoError("cannot write '" + lpp_weights_out + "'");
        const bool binary = lpp_weights_out.size() >= 4 &&
                            lpp_weights_out.compare(lpp_weights_out.size() - 4, 4, ".bin") == 0;
        binary ? write_binary(f, w) : write_csv(f, w);
      }
      const PassageResult r = passage(w, kind, lpp_recover);
      return Row{r.value, r.optimal_partition.value_or(std::vector<std::size_t>{})};
    });
    Output out(lpp_out);
    out.stream() << (lpp_recover ? "index,value,partition\n" : "index,value\n");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      out.stream() << i << "," << fmt17(rows[i].value);
      if (lpp_recover) {
        out.stream() << ",";
        for (std::size_t m = 0; m < rows[i].partition.size(); ++m) {
          out.stream() << (m ? " " : "") << rows[i].partition[m];
        }
      }
      out.stream() << "\n";
    }
  });

  // sample-gue
  auto* gue = app.add_subcommand("sample-gue", "Sample extreme eigenvalues of the k x k GUE");
  std::size_t gue_k = 10, gue_samples = 1000, gue_workers = 1;
  std::uint64_t gue_seed = 0;
  std::string gue_stat = "scaled_edge", gue_out;
  gue->add_option("-k", gue_k, "Matrix size")->check(CLI::PositiveNumber)->capture_default_str();
  gue->add_option("--samples", gue_samples, "Sample count")->capture_default_str();
  gue->add_option("--seed", gue_seed, "Seed")->required();
  gue->add_option("--workers", gue_workers, "Threads")->check(CLI::PositiveNumber);
  gue->add_option("--statistic", gue_stat, "lambda_max, lambda_min or scaled_edge")
      ->check(CLI::IsMember({"lambda_max", "lambda_min", "scaled_edge"}))
      ->capture_default_str();
  gue->add_option("--out", gue_out, "CSV output (default stdout)");
  gue->callback([&] {
    std::vector<double> v;
    if (gue_stat == "lambda_max") {
      v = largest_eigenvalue_sample(gue_k, gue_samples, gue_seed, gue_workers);
    } else if (gue_stat == "lambda_min") {
      v = smallest_eigenvalue_sample(gue_k, gue_samples, gue_seed, gue_workers);
    } else {
      v = scaled_edge_sample(gue_k, gue_samples, gue_seed, gue_workers);
    }
    Output out(gue_out);
    out.stream() << "index," << gue_stat << "\n";
    for (std::size_t i = 0; i < v.size(); ++i) out.stream() << i << "," << fmt17(v[i]) << "\n";
  });

  // gamma
  auto* gam = app.add_subcommand("gamma", "Sup/inf functionals of Brownian ensembles");
  std::size_t gam_k = 3, gam_m = 512, gam_samples = 1000, gam_workers = 1;
  std::uint64_t gam_seed = 0;
  std::string gam_out, gam_transform_out;
  gam->add_option("-k", gam_k, "Number of paths")->check(CLI::PositiveNumber)->capture_default_str();
  gam->add_option("-M", gam_m, "Grid steps")->check(CLI::PositiveNumber)->capture_default_str();
  gam->add_option("--samples", gam_samples, "Sample count")->capture_default_str();
  gam->add_option("--seed", gam_seed, "Seed")->required();
  gam->add_option("--workers", gam_workers, "Threads")->check(CLI::PositiveNumber);
  gam->add_option("--out", gam_out, "CSV output (default stdout)");
  gam->add_option("--transform-out", gam_transform_out,
                  "Write ensemble 0 and its Gamma_k transform as CSV (k >= 2)");
  gam->callback([&] {
    struct Pair {
      double sup = 0, inf = 0;
    };
    const auto g = parallel_map<Pair>(gam_samples, gam_workers, [&](std::size_t i) {
      RngStream stream = RngStream::for_sample(gam_seed, StreamTag::kBrownian, i);
      const PathEnsemble f = brownian_ensemble(stream, gam_k, gam_m);
      return Pair{g_sup(f), g_inf(f)};
    });
    if (!gam_transform_out.empty()) {
      RngStream stream = RngStream::for_sample(gam_seed, StreamTag::kBrownian, 0);
      const PathEnsemble f = brownian_ensemble(stream, gam_k, gam_m);
      std::vector<DiscretePath> both = f.paths();
      for (const DiscretePath& p : gamma_k(f).paths()) both.push_back(p);
      Output t(gam_transform_out);
      write_csv(t.stream(), PathEnsemble(std::move(both)));
    }
    Output out(gam_out);
    out.stream() << "index,g_sup,g_inf\n";
    for (std::size_t i = 0; i < g.size(); ++i) {
      out.stream() << i << "," << fmt17(g[i].sup) << "," << fmt17(g[i].inf) << "\n";
    }
  });

  // tw-table
  auto* tw = app.add_subcommand("tw-table", "Emit the Tracy-Widom GUE table as CSV (s,q,F)");
  std::string tw_out;
  tw->add_option("--out", tw_out, "CSV output (default stdout)");
  tw->callback([&] {
    Output out(tw_out);
    write_csv(out.stream(), default_tw_table());
  });

  // ks
  auto* ks = app.add_subcommand("ks", "Kolmogorov-Smirnov test on CSV columns");
  std::string ks_a, ks_b, ks_against, ks_column;
  double ks_alpha = 0.05;
  ks->add_option("--a", ks_a, "First sample CSV")->required()->check(CLI::ExistingFile);
  ks->add_option("--b", ks_b, "Second sample CSV (two-sample test)")->check(CLI::ExistingFile);
  ks->add_option("--against", ks_against, "One-sample reference: tracy-widom or normal")
      ->check(CLI::IsMember({"tracy-widom", "normal"}));
  ks->add_option("--column", ks_column, "Column name (default: last column)");
  ks->add_option("--alpha", ks_alpha, "0.05 or 0.01")->capture_default_str();
  ks->callback([&] {
    if (ks_b.empty() == ks_against.empty()) {
      throw ValidationError("ks: give exactly one of --b or --against");
    }
    const std::vector<double> a = read_column(ks_a, ks_column);
    KsResult r;
    if (!ks_b.empty()) {
      r = ks_two_sample(a, read_column(ks_b, ks_column), ks_alpha);
    } else if (ks_against == "normal") {
      r = ks_one_sample(a, [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); },
                        ks_alpha);
    } else {
      r = ks_one_sample(a, [](double x) { return default_tw_table().f_gue_clamped(x); },
                        ks_alpha);
    }
    std::cout << ks_to_json(r).dump(2) << "\n";
  });

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run a configured experiment and write its report");
  std::string exp_config, exp_output;
  std::vector<std::string> exp_set;
  std::size_t exp_workers = 0, exp_samples = 0;
  std::uint64_t exp_seed = 0;
  bool exp_quick = false;
  auto* exp_seed_opt = exp->add_option("--seed", exp_seed, "Override the seed");
  auto* exp_samples_opt = exp->add_option("--samples", exp_samples, "Override the sample count");
  exp->add_option("--config", exp_config, "Config file (YAML or JSON)")->check(CLI::ExistingFile);
  exp->add_option("--set", exp_set, "key=value override (repeatable)");
  exp->add_option("--workers", exp_workers, "Override the worker count")->check(CLI::PositiveNumber);
  exp->add_option("--output", exp_output, "Report path (default stdout)");
  exp->add_flag("--quick", exp_quick, "Scale sample counts by 1/10 (not acceptance grade)");
  exp->callback([&] {
    nlohmann::json j = load_config(exp_config, exp_set);
    if (*exp_seed_opt) j["seed"] = exp_seed;
    if (*exp_samples_opt) j["samples"] = exp_samples;
    if (exp_workers > 0) j["workers"] = exp_workers;
    if (!exp_output.empty()) j["output"] = exp_output;
    if (exp_quick) j["quick"] = true;
    status = run_config(j);
  });

  // time-constant
  auto* tc = app.add_subcommand("time-constant", "Shape-function and thin-rectangle estimates");
  std::string tc_dist, tc_shape = "square", tc_output;
  double tc_x = 1.0, tc_y = 1.0;
  std::vector<std::size_t> tc_ns;
  std::size_t tc_reps = 50, tc_n = 100000, tc_k = 10, tc_workers = 1;
  std::uint64_t tc_seed = 0;
  bool tc_quick = false;
  tc->add_option("--dist", tc_dist, "Distribution (default depends on shape)");
  tc->add_option("--shape", tc_shape, "square or thin")
      ->check(CLI::IsMember({"square", "thin"}))
      ->capture_default_str();
  tc->add_option("-x", tc_x, "Column scale")->capture_default_str();
  tc->add_option("-y", tc_y, "Row scale")->capture_default_str();
  tc->add_option("--n", tc_ns, "Sizes for the square shape");
  tc->add_option("--replicates", tc_reps, "Replicates per size")->capture_default_str();
  tc->add_option("-N", tc_n, "Thin rectangle columns")->capture_default_str();
  tc->add_option("-k", tc_k, "Thin rectangle rows")->capture_default_str();
  tc->add_option("--seed", tc_seed, "Seed")->required();
  tc->add_option("--workers", tc_workers, "Threads")->check(CLI::PositiveNumber);
  tc->add_option("--output", tc_output, "Report path (default stdout)");
  tc->add_flag("--quick", tc_quick, "Scale replicates by 1/10");
  tc->callback([&] {
    nlohmann::json j = {{"kind", "time_constant"}, {"shape", tc_shape},   {"x", tc_x},
                        {"y", tc_y},               {"replicates", tc_reps}, {"N", tc_n},
                        {"k", tc_k},               {"seed", tc_seed},     {"workers", tc_workers},
                        {"quick", tc_quick},       {"output", tc_output}};
    if (!tc_dist.empty()) j["distribution"] = tc_dist;
    if (!tc_ns.empty()) j["n_schedule"] = tc_ns;
    status = run_config(j);
  });

  // skorohod
  auto* sk = app.add_subcommand("skorohod", "Simulate the exit-interval Skorohod embedding");
  std::string sk_dist = "rademacher", sk_output;
  std::size_t sk_samples = 100000, sk_workers = 1, sk_walk = 0, sk_reps = 1000;
  double sk_dt = 1e-4;
  std::uint64_t sk_seed = 0;
  bool sk_quick = false;
  sk->add_option("--dist", sk_dist, "Discrete mean-zero target")->capture_default_str();
  sk->add_option("--samples", sk_samples, "Stopping times")->capture_default_str();
  sk->add_option("--dt", sk_dt, "Euler step (<= 1e-4)")->capture_default_str();
  sk->add_option("--walk-length", sk_walk, "Also compare embedded and direct walks of this length");
  sk->add_option("--replicates", sk_reps, "Walk replicates")->capture_default_str();
  sk->add_option("--seed", sk_seed, "Seed")->required();
  sk->add_option("--workers", sk_workers, "Threads")->check(CLI::PositiveNumber);
  sk->add_option("--output", sk_output, "Report path (default stdout)");
  sk->add_flag("--quick", sk_quick, "Scale sample counts by 1/10");
  sk->callback([&] {
    nlohmann::json j = {{"kind", "skorohod_check"}, {"distribution", sk_dist},
                        {"samples", sk_samples},    {"dt", sk_dt},
                        {"walk_length", sk_walk},   {"replicates", sk_reps},
                        {"seed", sk_seed},          {"workers", sk_workers},
                        {"quick", sk_quick},        {"output", sk_output}};
    status = run_config(j);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  } catch (const JobFailure& e) {
    std::cerr << "lpptw: " << e.what() << "\n";
    try {
      std::rethrow_exception(e.cause());
    } catch (const ValidationError&) {
      return kExitValidation;
    } catch (...) {
      return kExitNumerical;
    }
  } catch (const ValidationError& e) {
    std::cerr << "lpptw: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    std::cerr << "lpptw: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::cerr << "lpptw: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "lpptw: " << e.what() << "\n";
    return kExitNumerical;
  }
  return status;
}
