#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lpptw/errors.hpp"
#include "lpptw/experiment.hpp"

using namespace lpptw;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / "lpptw_test_experiment";
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(LPPTW_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// One small configuration per experiment kind.
std::vector<json> small_configs() {
  return {
      {{"kind", "clt_corollary"}, {"N", 300}, {"k", 3}, {"samples", 60}, {"seed", 11}},
      {{"kind", "clt_corollary"}, {"N", 300}, {"k", 3}, {"samples", 60}, {"seed", 11},
       {"passage", "L_first"}, {"distribution", "rademacher"}},
      {{"kind", "clt_theorem_form"}, {"N", 400}, {"k", 4}, {"samples", 60}, {"seed", 12}},
      {{"kind", "gue_edge"}, {"k_schedule", {1, 5, 20}}, {"samples", 300}, {"seed", 13}},
      {{"kind", "gamma_transform"}, {"k_schedule", {2, 3}}, {"M", 64}, {"samples", 100},
       {"seed", 14}},
      {{"kind", "time_constant"}, {"n_schedule", {20, 40, 80}}, {"replicates", 30},
       {"seed", 15}},
      {{"kind", "time_constant"}, {"shape", "thin"}, {"N", 1000}, {"k", 5},
       {"replicates", 20}, {"seed", 16}},
      {{"kind", "skorohod_check"}, {"samples", 200}, {"walk_length", 5}, {"replicates", 40},
       {"seed", 17}},
  };
}

}  // namespace

TEST(Config, SeedIsMandatoryAndKeysAreChecked) {
  EXPECT_THROW(config_from_json({{"kind", "gue_edge"}}), ConfigError);
  EXPECT_THROW(config_from_json({{"kind", "gue_edge"}, {"seed", 1}, {"colour", 3}}),
               ConfigError);
  EXPECT_THROW(config_from_json({{"kind", "nope"}, {"seed", 1}}), ValidationError);
  EXPECT_THROW(config_from_json({{"kind", "clt_corollary"}, {"seed", 1}, {"N", 0}}),
               ConfigError);
  EXPECT_THROW(config_from_json({{"kind", "clt_corollary"}, {"seed", 1}, {"samples", -4}}),
               ConfigError);
  EXPECT_THROW(config_from_json({{"kind", "clt_corollary"}, {"seed", 1}, {"passage", "L"}}),
               ConfigError);
  const auto c = config_from_json({{"kind", "gue_edge"}, {"seed", 5}});
  EXPECT_EQ(c.kind, ExperimentKind::kGueEdge);
  EXPECT_EQ(c.seed, 5u);
}

TEST(Config, DistributionForms) {
  const auto a = config_from_json(
      {{"kind", "clt_corollary"}, {"seed", 1}, {"distribution", {{"type", "exponential"}, {"rate", 2.0}}}});
  EXPECT_EQ(a.effective_distribution().mean(), 0.5);
  const auto b = config_from_json({{"kind", "clt_corollary"}, {"seed", 1}, {"distribution", "geometric(q=0.5)"}});
  EXPECT_EQ(b.effective_distribution().mean(), 1.0);
  const auto d = config_from_json({{"kind", "clt_theorem_form"}, {"seed", 1}});
  EXPECT_EQ(d.effective_distribution().type_name(), "gaussian");
  const auto e = config_from_json({{"kind", "clt_corollary"}, {"seed", 1}});
  EXPECT_EQ(e.effective_distribution().type_name(), "exponential");
}

TEST(Config, RoundTripThroughJson) {
  for (const json& j : small_configs()) {
    const auto c = config_from_json(j);
    const json echoed = config_to_json(c);
    EXPECT_EQ(config_to_json(config_from_json(echoed)), echoed) << j.dump();
    EXPECT_FALSE(echoed.contains("workers"));
    EXPECT_FALSE(echoed.contains("output"));
  }
}

TEST(Config, YamlFileWithOverrides) {
  const fs::path p = scratch_dir() / "config.yaml";
  std::ofstream(p) << "kind: clt_corollary\n"
                      "N: 500\n"
                      "k: 4\n"
                      "seed: 9\n"
                      "distribution:\n"
                      "  type: exponential\n"
                      "  rate: 1.0\n"
                      "n_schedule: [10, 20]\n";
  const json j = load_config(p.string(), {"k=6", "samples=12", "distribution={type: rademacher}"});
  EXPECT_EQ(j.at("N"), 500);
  EXPECT_EQ(j.at("k"), 6);
  EXPECT_EQ(j.at("samples"), 12);
  EXPECT_EQ(j.at("n_schedule"), json::array({10, 20}));
  EXPECT_EQ(j.at("distribution").at("type"), "rademacher");
  const auto c = config_from_json(j);
  EXPECT_EQ(c.k, 6u);
  EXPECT_THROW(load_config(p.string(), {"no_equals_sign"}), ConfigError);
  EXPECT_THROW(load_config((scratch_dir() / "missing.yaml").string()), IoError);
}

TEST(Config, YamlScalars) {
  const json j = yaml_text_to_json("a: 3\nb: 2.5\nc: true\nd: hello\ne: [1, 2]\nf: null\n");
  EXPECT_TRUE(j.at("a").is_number_integer());
  EXPECT_TRUE(j.at("b").is_number_float());
  EXPECT_TRUE(j.at("c").is_boolean());
  EXPECT_TRUE(j.at("d").is_string());
  EXPECT_TRUE(j.at("e").is_array());
  EXPECT_TRUE(j.at("f").is_null());
}

TEST(Run, DeterministicAcrossWorkerCounts) {
  for (json j : small_configs()) {
    j["workers"] = 1;
    const auto a = run_experiment(config_from_json(j));
    j["workers"] = 8;
    const auto b = run_experiment(config_from_json(j));
    ASSERT_TRUE(a.valid()) << j.dump();
    EXPECT_EQ(a.dump_deterministic(), b.dump_deterministic()) << j.dump();
    ASSERT_EQ(a.side_files.size(), b.side_files.size());
    for (std::size_t i = 0; i < a.side_files.size(); ++i) {
      EXPECT_EQ(a.side_files[i].content, b.side_files[i].content);
    }
    EXPECT_EQ(a.document.at("config"), config_to_json(config_from_json(j)));
    EXPECT_EQ(b.document.at("execution").at("workers"), 8);
    EXPECT_EQ(a.dump_deterministic().find("wall_clock"), std::string::npos);
  }
}

TEST(Run, ZeroSamplesIsTrivial) {
  const auto r = run_experiment(config_from_json({{"kind", "clt_corollary"}, {"samples", 0}, {"seed", 1}}));
  EXPECT_TRUE(r.valid());
  EXPECT_TRUE(r.document.at("trivial").get<bool>());
}

TEST(Run, FailingSampleIsNamed) {
  const auto r = run_experiment(config_from_json(
      {{"kind", "clt_corollary"}, {"N", 50}, {"k", 2}, {"samples", 20}, {"seed", 1},
       {"fail_sample", 7}, {"workers", 4}}));
  EXPECT_FALSE(r.valid());
  EXPECT_EQ(r.document.at("failure").at("sample"), 7);
  EXPECT_NE(r.document.at("failure").at("message").get<std::string>().find("7"),
            std::string::npos);
}

TEST(Run, QuickModeIsFlagged) {
  const auto r = run_experiment(config_from_json(
      {{"kind", "clt_corollary"}, {"N", 50}, {"k", 2}, {"samples", 200}, {"seed", 1}, {"quick", true}}));
  EXPECT_EQ(r.document.at("effective_samples"), 20);
  EXPECT_FALSE(r.document.at("acceptance_grade").get<bool>());
}

TEST(Run, GueEdgeAtKOneIsNormal) {
  const auto r = run_experiment(config_from_json(
      {{"kind", "gue_edge"}, {"k_schedule", {1}}, {"samples", 10000}, {"seed", 2}}));
  const auto& ks = r.document.at("results").at("per_k").at(0).at("ks");
  EXPECT_EQ(r.document.at("results").at("per_k").at(0).at("reference"), "standard_normal");
  EXPECT_LT(ks.at("statistic").get<double>(), 0.0194);
}

TEST(Run, TwTableMatchesCliOutput) {
  const auto r = run_experiment(config_from_json({{"kind", "tw_table"}, {"seed", 0}}));
  ASSERT_EQ(r.side_files.size(), 1u);
  const fs::path p = scratch_dir() / "tw.csv";
  ASSERT_EQ(run_cli("tw-table --out " + p.string()), 0);
  EXPECT_EQ(r.side_files[0].content, slurp(p));
}

TEST(Report, WriteAndReadBack) {
  auto r = run_experiment(config_from_json(small_configs()[0]));
  const fs::path p = scratch_dir() / "report.json";
  write_report(r, p.string());
  const json back = read_report(slurp(p));
  EXPECT_EQ(back.at("format_version"), 1);
  const auto& files = back.at("execution").at("side_files");
  ASSERT_FALSE(files.empty());
  for (const auto& [suffix, name] : files.items()) {
    EXPECT_TRUE(fs::exists(scratch_dir() / name.get<std::string>())) << suffix;
  }
  json future = back;
  future["format_version"] = 99;
  EXPECT_THROW(read_report(future.dump()), ConfigError);
  EXPECT_THROW(read_report("{not json"), ValidationError);
}

TEST(Cli, ExitCodes) {
  const fs::path d = scratch_dir();
  EXPECT_EQ(run_cli("tw-table --out " + (d / "t.csv").string()), 0);
  EXPECT_EQ(run_cli("sample-lpp -N 4 -k 2 --seed 1 --samples 3"), 0);
  EXPECT_EQ(run_cli("experiment --set kind=gue_edge --set samples=10 --seed 3 --output " +
                    (d / "cli.json").string()),
            0);
  // Validation: missing seed, unknown option, bad parameter, unknown key.
  EXPECT_EQ(run_cli("sample-lpp -N 4 -k 2"), 2);
  EXPECT_EQ(run_cli("tw-table --bogus"), 2);
  EXPECT_EQ(run_cli("sample-lpp -N 4 -k 2 --seed 1 --dist 'geometric(q=1.5)'"), 2);
  EXPECT_EQ(run_cli("experiment --set kind=gue_edge --set colour=1 --seed 1"), 2);
  EXPECT_EQ(run_cli("experiment --set kind=gue_edge"), 2);
  // Numerical: injected sample failure.
  EXPECT_EQ(run_cli("experiment --set kind=clt_corollary --set N=20 --set samples=10 "
                    "--set fail_sample=3 --seed 1 --output " + (d / "fail.json").string()),
            3);
  const json failed = json::parse(slurp(d / "fail.json"));
  EXPECT_FALSE(failed.at("valid").get<bool>());
  EXPECT_EQ(failed.at("failure").at("sample"), 3);
}

TEST(Cli, WorkerCountLeavesReportUnchanged) {
  const fs::path d = scratch_dir();
  const std::string base = "experiment --set kind=clt_corollary --set N=200 --set k=3 "
                           "--set samples=40 --seed 21 --output ";
  ASSERT_EQ(run_cli(base + (d / "w1.json").string() + " --workers 1"), 0);
  ASSERT_EQ(run_cli(base + (d / "w8.json").string() + " --workers 8"), 0);
  json a = json::parse(slurp(d / "w1.json"));
  json b = json::parse(slurp(d / "w8.json"));
  a.erase("execution");
  b.erase("execution");
  EXPECT_EQ(a.dump(2), b.dump(2));
  EXPECT_EQ(slurp(d / "w1.samples.csv"), slurp(d / "w8.samples.csv"));
}
