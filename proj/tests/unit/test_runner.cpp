#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>

#include "benchpress/io.hpp"
#include "benchpress/runner/canonical.hpp"
#include "benchpress/runner/config.hpp"
#include "benchpress/runner/execute.hpp"
#include "benchpress/runner/plan.hpp"
#include "tree.hpp"

using namespace benchpress;
using namespace benchpress::runner;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kFixtures = BENCHPRESS_FIXTURES;
const fs::path kScenarios = kFixtures / "scenarios";

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("bp-runner-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

json load_json(const fs::path& p) { return json::parse(io::read_file(p)); }

Plan plan_of(const json& j, const fs::path& base = kScenarios) { return make_plan(parse_config_text(j.dump(), base)); }

std::string error_path(const json& j, const fs::path& base = kScenarios) {
  try {
    plan_of(j, base);
  } catch (const ConfigError& e) {
    return e.json_path();
  }
  return "<no error>";
}

RunReport run(const Plan& plan, const fs::path& results, std::size_t cores = 2, bool force = false) {
  ExecuteOptions opt;
  opt.results_dir = results;
  opt.cores = cores;
  opt.force = force;
  return execute(plan, opt);
}

std::vector<std::string> hashes(const Plan& p, Stage s) {
  std::vector<std::string> out;
  for (const auto& j : p.jobs)
    if (j.stage() == s) out.push_back(j.hash);
  return out;
}

}  // namespace

TEST(Canonical, SortedKeysAndIntegralFloats) {
  EXPECT_EQ(canonical_json(json::parse(R"({"b": 1.0, "a": [2.5, 3]})")), R"({"a":[2.5,3],"b":1})");
  EXPECT_EQ(hex_hash("x").size(), 16u);
  EXPECT_EQ(hex_hash("x"), hex_hash("x"));
  EXPECT_NE(hex_hash("x"), hex_hash("y"));
}

TEST(Config, PcVersusPluginFixture) {
  const auto cfg = parse_config(kFixtures / "configs" / "pc_vs_dualpc.json");
  EXPECT_EQ(cfg.tuples.size(), 1u);
  EXPECT_EQ(cfg.algorithms.size(), 2u);
  EXPECT_EQ(cfg.tuples[0].seeds().size(), 10u);
  EXPECT_EQ(cfg.tuples[0].seeds().front(), 1);
  ASSERT_TRUE(cfg.evaluation.benchmarks.has_value());
  EXPECT_EQ(cfg.evaluation.benchmarks->ids, (std::vector<std::string>{"pc-gaussCItest", "dualpc"}));
  ASSERT_EQ(cfg.warnings.size(), 1u);
  EXPECT_NE(cfg.warnings[0].find("dualpc"), std::string::npos);
  const auto plan = make_plan(cfg);
  EXPECT_EQ(plan.count(Stage::Graph), 10u);
  EXPECT_EQ(plan.count(Stage::Parameters), 10u);
  EXPECT_EQ(plan.count(Stage::Data), 10u);
  EXPECT_EQ(plan.count(Stage::Learner), 60u);
  EXPECT_EQ(plan.count(Stage::Evaluation), 1u);
}

TEST(Config, ErrorsCarryJsonPaths) {
  const json base = load_json(kScenarios / "scenario4.json");
  auto j = base;
  j["benchmark_setup"]["data"][0]["graph_id"] = "nowhere";
  EXPECT_EQ(error_path(j), "$.benchmark_setup.data[0].graph_id");

  j = base;
  j["resources"]["structure_learning_algorithms"]["pcalg_pc"][0]["alpah"] = 0.1;
  EXPECT_EQ(error_path(j), "$.resources.structure_learning_algorithms.pcalg_pc[0].alpah");

  j = base;
  j["resources"]["structure_learning_algorithms"]["bnlearn_hc"][0]["id"] = "pc";
  // Modules are visited in name order, so the second holder of the id is pcalg_pc.
  EXPECT_EQ(error_path(j), "$.resources.structure_learning_algorithms.pcalg_pc[0].id");

  j = base;
  j["benchmark_setup"]["data"][0]["seed_range"] = json::array({3, 1});
  EXPECT_EQ(error_path(j), "$.benchmark_setup.data[0].seed_range");

  j = base;
  j["benchmark_setup"]["evaluation"]["benchmarks"]["ids"] = json::array({"ghost"});
  EXPECT_NE(error_path(j).find("$.benchmark_setup.evaluation.benchmarks.ids"), std::string::npos);

  j = base;
  j["resources"]["structure_learning_algorithms"]["pcalg_pc"][0]["alpha"] = 1.5;
  EXPECT_NE(error_path(j).find("pcalg_pc[0].alpha"), std::string::npos);

  j = base;
  j["resources"]["structure_learning_algorithms"]["pcalg_pc"][0]["majrule"] = true;
  EXPECT_NE(error_path(j).find("majrule"), std::string::npos);

  j = load_json(kScenarios / "scenario2.json");
  j["benchmark_setup"]["data"][0]["seed_range"] = json::array({1, 2});
  EXPECT_EQ(error_path(j), "$.benchmark_setup.data[0].seed_range");

  try {
    parse_config_text("{", kScenarios);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.json_path(), "$");
  }
  try {
    parse_config_text(R"({"resources": {}, "benchmark_setup": {"data": []}, "extra": 1})", kScenarios);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.json_path(), "$.extra");
  }
}

TEST(Config, ScenarioOneWithBenchmarksIsAPlanningError) {
  auto j = load_json(kScenarios / "scenario1.json");
  j["benchmark_setup"]["evaluation"]["benchmarks"] = load_json(kScenarios / "scenario2.json")["benchmark_setup"]["evaluation"]["benchmarks"];
  EXPECT_EQ(error_path(j), "$.benchmark_setup.evaluation.benchmarks");
}

TEST(Plan, ScenarioShapes) {
  struct Shape {
    const char* file;
    std::size_t graph, params, data, learner;
  };
  for (const Shape& s : {Shape{"scenario1.json", 0, 0, 2, 6}, Shape{"scenario2.json", 1, 0, 1, 3},
                         Shape{"scenario3.json", 1, 1, 3, 9}, Shape{"scenario4.json", 1, 3, 3, 9},
                         Shape{"scenario5.json", 3, 3, 3, 15}}) {
    const auto plan = make_plan(parse_config(kScenarios / s.file));
    EXPECT_EQ(plan.count(Stage::Graph), s.graph) << s.file;
    EXPECT_EQ(plan.count(Stage::Parameters), s.params) << s.file;
    EXPECT_EQ(plan.count(Stage::Data), s.data) << s.file;
    EXPECT_EQ(plan.count(Stage::Learner), s.learner) << s.file;
    EXPECT_EQ(plan.count(Stage::Evaluation), 1u) << s.file;
    // Dependencies always point backwards.
    for (std::size_t k = 0; k < plan.jobs.size(); ++k)
      for (std::size_t d : plan.jobs[k].deps) EXPECT_LT(d, k);
  }
}

TEST(Plan, EmptyEvaluationStillPlansLearners) {
  auto j = load_json(kScenarios / "scenario4.json");
  j["benchmark_setup"]["evaluation"] = json::object();
  const auto plan = plan_of(j);
  EXPECT_EQ(plan.count(Stage::Learner), 9u);
  EXPECT_EQ(plan.count(Stage::Evaluation), 0u);
}

TEST(Plan, DataSeedsIgnoreLearnersAndEvaluation) {
  const auto base = load_json(kScenarios / "scenario5.json");
  auto more = base;
  more["resources"]["structure_learning_algorithms"]["bnlearn_hc"] = json::array({{{"id", "hc"}, {"score", "bde"}}});
  more["benchmark_setup"]["evaluation"]["graph_true_plots"] = true;
  const auto a = plan_of(base), b = plan_of(more);
  EXPECT_EQ(hashes(a, Stage::Data), hashes(b, Stage::Data));
  EXPECT_EQ(hashes(a, Stage::Graph), hashes(b, Stage::Graph));
  EXPECT_EQ(b.count(Stage::Learner), a.count(Stage::Learner) + 3);
}

TEST(Execute, CacheRerunAndParameterChange) {
  TempDir tmp("cache");
  const auto base = load_json(kScenarios / "scenario4.json");
  const auto plan = plan_of(base);
  const auto first = run(plan, tmp.path);
  EXPECT_EQ(first.exit_code(), 0);
  EXPECT_EQ(first.count(JobState::Executed), plan.jobs.size());
  const auto before = tree::snapshot(tmp.path);

  const auto second = run(plan, tmp.path);
  EXPECT_EQ(second.count(JobState::Cached), plan.jobs.size());
  EXPECT_EQ(second.count(JobState::Executed), 0u);
  EXPECT_EQ(second.summary().rfind("all " + std::to_string(plan.jobs.size()) + " jobs cached", 0), 0u);

  // Forced recomputation reproduces every cached byte.
  const auto forced = run(plan, tmp.path, 1, true);
  EXPECT_EQ(forced.count(JobState::Executed), plan.jobs.size());
  EXPECT_EQ(tree::first_difference(before, tree::snapshot(tmp.path)), "");

  auto changed = base;
  changed["resources"]["structure_learning_algorithms"]["bnlearn_hc"][0]["iss.mu"] = 5;
  const auto third = run(plan_of(changed), tmp.path);
  // Three new hc learner jobs plus the evaluation.
  EXPECT_EQ(third.count(JobState::Executed), 4u);
}

TEST(Execute, LearnerOutputsAndStatus) {
  TempDir tmp("out");
  const auto plan = make_plan(parse_config(kScenarios / "scenario2.json"));
  ASSERT_EQ(run(plan, tmp.path).exit_code(), 0);
  for (const auto& job : plan.jobs) {
    if (job.stage() != Stage::Learner) continue;
    const auto dir = job_dir(tmp.path, job);
    EXPECT_TRUE(fs::exists(dir / "key.json"));
    EXPECT_TRUE(fs::exists(dir / "adjmat.csv"));
    const auto r = read_learner_result(dir);
    EXPECT_EQ(r.status, learn::Status::Ok);
    EXPECT_TRUE(r.estimate.has_value());
  }
  const auto bench = io::read_file(tmp.path / "output" / "scenario2" / "benchmarks.csv");
  EXPECT_EQ(std::count(bench.begin(), bench.end(), '\n'), 4);
  EXPECT_TRUE(fs::exists(tmp.path / "output" / "scenario2" / "roc.svg"));
  EXPECT_TRUE(fs::exists(tmp.path / "output" / "scenario2" / "graph_true_stats.csv"));
}

TEST(Execute, ReportNeedsCachedResults) {
  TempDir tmp("report");
  const auto plan = make_plan(parse_config(kScenarios / "scenario2.json"));
  ExecuteOptions opt;
  opt.results_dir = tmp.path;
  opt.report_only = true;
  EXPECT_THROW(execute(plan, opt), Error);
  ASSERT_EQ(run(plan, tmp.path).exit_code(), 0);
  fs::remove_all(tmp.path / "output");
  const auto rep = execute(plan, opt);
  EXPECT_EQ(rep.count(JobState::Executed), 1u);
  EXPECT_TRUE(fs::exists(tmp.path / "output" / "scenario2" / "benchmarks.csv"));
}

TEST(Execute, FailedJobSkipsDependents) {
  TempDir tmp("fail");
  // A weight file whose pattern disagrees with the graph fails the parameters job.
  fs::create_directories(tmp.path / "cfg");
  fs::copy(kScenarios / "resources", tmp.path / "cfg" / "resources", fs::copy_options::recursive);
  const fs::path weights = tmp.path / "cfg" / "resources" / "parameters" / "myparams" / "sem_params" / "weights5.csv";
  io::write_file_atomic(weights, "a,b,c,d,e\n0,0.5,0.8,0,0\n0,0,-0.7,0,0\n0,0,0,0.9,0\n0,0,0,0,0.6\n0,0,0,0,0\n");
  const auto plan = plan_of(load_json(kScenarios / "scenario3.json"), tmp.path / "cfg");
  const auto rep = run(plan, tmp.path / "results");
  EXPECT_EQ(rep.count(JobState::Failed), 1u);
  EXPECT_EQ(rep.count(JobState::Skipped), plan.jobs.size() - 2);
  EXPECT_NE(rep.exit_code(), 0);
}

TEST(Execute, MissingPluginCommandFailsLearnerOnly) {
  TempDir tmp("plugin");
  auto j = load_json(kScenarios / "scenario2.json");
  j["resources"]["structure_learning_algorithms"]["mylib_myalg"] =
      json::array({{{"id", "testing_myalg"}, {"myparam1", "somevalue"}, {"myparam2", json::array({1, 2})}}});
  const auto cfg = parse_config_text(j.dump(), kScenarios);
  ASSERT_EQ(cfg.warnings.size(), 1u);
  const auto plan = make_plan(cfg);
  const auto rep = run(plan, tmp.path);
  EXPECT_EQ(rep.learner_count(learn::Status::Failed), 2u);
  EXPECT_EQ(rep.count(JobState::Failed), 0u);
  EXPECT_NE(rep.exit_code(), 0);
}

TEST(Execute, ExternalTimeoutRow) {
  TempDir tmp("timeout");
  auto j = load_json(kScenarios / "scenario2.json");
  const std::string cmd = "sh " + (kFixtures / "plugins" / "sleeper.sh").string() + " {adjmat} {time} {ntests}";
  j["resources"]["structure_learning_algorithms"] =
      json{{"sleepy", json::array({{{"id", "sleepy"}, {"command", cmd}, {"timeout", 1}}})}};
  j["benchmark_setup"]["evaluation"] = json{{"benchmarks", {{"filename_prefix", "t/"}, {"ids", {"sleepy"}}}}};
  const auto rep = run(plan_of(j), tmp.path);
  EXPECT_EQ(rep.learner_count(learn::Status::TimedOut), 1u);
  EXPECT_EQ(rep.exit_code(), 0);
  const auto bench = io::read_file(tmp.path / "output" / "t" / "benchmarks.csv");
  EXPECT_NE(bench.find("timed_out"), std::string::npos);
  EXPECT_NE(bench.find(",,,,,,,,"), std::string::npos);
}

TEST(Execute, CoresDoNotChangeResults) {
  TempDir a("c1"), b("c8");
  const auto plan = make_plan(parse_config(kScenarios / "scenario5.json"));
  ASSERT_EQ(run(plan, a.path, 1).exit_code(), 0);
  ASSERT_EQ(run(plan, b.path, 8).exit_code(), 0);
  EXPECT_EQ(tree::first_difference(tree::snapshot(a.path), tree::snapshot(b.path)), "");
}

#ifdef BENCHPRESS_CLI
TEST(Cli, ExitCodes) {
  const std::string cli = BENCHPRESS_CLI;
  if (cli.empty()) GTEST_SKIP() << "command line tool not built";
  TempDir tmp("cli");
  const auto sh = [&](const std::string& args) {
    const int rc = std::system((cli + " " + args + " > " + (tmp.path / "out.txt").string() + " 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  };
  const std::string cfg = (kScenarios / "scenario2.json").string();
  EXPECT_EQ(sh("validate --config " + (kFixtures / "configs" / "pc_vs_dualpc.json").string()), 0);
  EXPECT_EQ(sh("run --config " + cfg + " --cores 2 --results-dir " + (tmp.path / "r").string()), 0);
  EXPECT_EQ(sh("run --config " + cfg + " --results-dir " + (tmp.path / "r").string()), 0);
  EXPECT_NE(io::read_file(tmp.path / "out.txt").find("all 6 jobs cached"), std::string::npos);
  EXPECT_EQ(sh("report --config " + cfg + " --results-dir " + (tmp.path / "r").string()), 0);

  auto bad = load_json(kScenarios / "scenario2.json");
  bad["benchmark_setup"]["data"][0]["graph_id"] = "missing.csv";
  std::ofstream(tmp.path / "bad.json") << bad.dump();
  EXPECT_EQ(sh("validate --config " + (tmp.path / "bad.json").string()), 2);
  EXPECT_NE(io::read_file(tmp.path / "out.txt").find("$.benchmark_setup.data[0].graph_id"), std::string::npos);
  EXPECT_EQ(sh("run"), 2);
  EXPECT_EQ(sh("frobnicate"), 2);
  EXPECT_EQ(sh("stats --adjmat " + (kFixtures / "formats" / "adjmat_directed.csv").string()), 0);
  EXPECT_EQ(sh("learn --module bnlearn_hc --params '{\"score\":\"bge\"}' --data " +
               (kScenarios / "resources" / "data" / "mydatasets" / "fixed5.csv").string()),
            0);
}
#endif
