#include <CLI11.hpp>
#include <iostream>
#include <nlohmann/json.hpp>

#include "benchpress/evalreport.hpp"
#include "benchpress/io.hpp"
#include "benchpress/runner/config.hpp"
#include "benchpress/runner/execute.hpp"
#include "benchpress/runner/plan.hpp"

namespace bp = benchpress;
namespace rn = benchpress::runner;
namespace fs = std::filesystem;

namespace {

constexpr int kUsageError = 2;

void print_plan(const rn::Plan& plan) {
  std::cout << "plan: " << plan.count(rn::Stage::Graph) << " graph, " << plan.count(rn::Stage::Parameters)
            << " parameters, " << plan.count(rn::Stage::Data) << " data, " << plan.count(rn::Stage::Learner)
            << " learner, " << plan.count(rn::Stage::Evaluation) << " evaluation jobs\n";
}

rn::Plan load(const std::string& config) {
  rn::BenchmarkConfig cfg = rn::parse_config(config);
  for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << "\n";
  return rn::make_plan(cfg);
}

int run_learn(const std::string& data_path, const std::string& module, const std::string& params_text, bool discrete,
              const std::string& out, std::int64_t seed) {
  // Reuse the runner path: a one-off config with a fixed data file.
  nlohmann::json params = params_text.empty() ? nlohmann::json::object() : nlohmann::json::parse(params_text);
  const rn::AlgorithmSpec spec = rn::algorithm_spec(module, params, "$.params");
  if (!rn::is_native_algorithm(module)) throw rn::ConfigError("$.module", "learn supports built-in modules only");
  const bp::DataMatrix data = bp::io::read_data(data_path, bp::io::DataReadOptions{discrete ? std::optional(true) : std::nullopt});

  std::unique_ptr<bp::scores::LocalScore> score;
  const auto make_score = [&](const rn::ScoreSpec& s) -> const bp::scores::LocalScore& {
    if (s.kind == rn::ScoreKind::BDeu)
      score = std::make_unique<bp::scores::BDeuScore>(data, s.iss);
    else
      score = std::make_unique<bp::scores::BGeScore>(data, bp::scores::BGeParams{s.am, s.aw});
    return *score;
  };
  const auto result = bp::learn::with_timeout(rn::timeout_of(params, "$.params"), [&](const bp::learn::StopToken& stop)
                                                  -> bp::learn::LearnerOutput {
    if (const auto* pc = std::get_if<rn::PcSpec>(&spec)) {
      std::unique_ptr<bp::citests::CITest> test;
      if (pc->test == rn::TestKind::FisherZ)
        test = std::make_unique<bp::citests::FisherZ>(data);
      else
        test = std::make_unique<bp::citests::G2Test>(data);
      auto r = bp::learn::pc(*test, data.labels, pc->options, stop);
      return {r.graph, static_cast<std::int64_t>(r.ntests)};
    }
    if (const auto* hc = std::get_if<rn::HcSpec>(&spec))
      return {bp::learn::hill_climb(make_score(hc->score), data.labels, stop).dag, std::nullopt};
    if (const auto* tb = std::get_if<rn::TabuSpec>(&spec))
      return {bp::learn::tabu(make_score(tb->score), data.labels, tb->options, stop).dag, std::nullopt};
    const auto& mc = std::get<rn::McmcSpec>(spec);
    return {bp::learn::structure_mcmc(make_score(mc.score), data.labels, mc.iterations, static_cast<std::uint64_t>(seed),
                                      stop),
            std::nullopt};
  });

  std::cerr << "status " << bp::learn::to_string(result.status) << ", " << bp::io::format_number(result.wall_time)
            << " s";
  if (result.ntests) std::cerr << ", " << *result.ntests << " tests";
  if (!result.diagnostic.empty()) std::cerr << ": " << result.diagnostic;
  std::cerr << "\n";
  if (!result.estimate) return 1;
  std::string text;
  if (const auto* g = std::get_if<bp::LabeledGraph>(&*result.estimate))
    text = bp::io::format_adjmat(*g);
  else
    text = bp::io::format_trajectory(std::get<bp::GraphTrajectory>(*result.estimate));
  if (out.empty())
    std::cout << text;
  else
    bp::io::write_file_atomic(out, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structure learning benchmark runner"};
  app.require_subcommand(1);

  std::string config, results_dir;
  std::size_t cores = 1;
  bool force = false;

  auto* run = app.add_subcommand("run", "Run every job of a configuration");
  run->add_option("--config", config, "Configuration JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--cores", cores, "Jobs in flight")->check(CLI::PositiveNumber);
  run->add_option("--results-dir", results_dir, "Results root (default $BENCHPRESS_RESULTS or ./results)");
  run->add_flag("--force", force, "Recompute cached jobs");

  auto* validate = app.add_subcommand("validate", "Parse and plan a configuration");
  validate->add_option("--config", config, "Configuration JSON")->required()->check(CLI::ExistingFile);

  auto* report = app.add_subcommand("report", "Re-emit evaluation outputs from cached results");
  report->add_option("--config", config, "Configuration JSON")->required()->check(CLI::ExistingFile);
  report->add_option("--results-dir", results_dir, "Results root");

  std::string data_path, module, params_text, out;
  bool discrete = false;
  std::int64_t seed = 1;
  auto* learn = app.add_subcommand("learn", "Run one built-in learner on a data file");
  learn->add_option("--data", data_path, "Data CSV")->required()->check(CLI::ExistingFile);
  learn->add_option("--module", module, "pcalg_pc, bnlearn_hc, bnlearn_tabu or structure_mcmc")->required();
  learn->add_option("--params", params_text, "Parameters as a JSON object");
  learn->add_flag("--discrete", discrete, "Treat the data as categorical");
  learn->add_option("--out", out, "Output file (default stdout)");
  learn->add_option("--seed", seed, "MCMC seed");

  std::string adjmat;
  auto* stats = app.add_subcommand("stats", "Summarize an adjacency matrix");
  stats->add_option("--adjmat", adjmat, "Adjacency matrix CSV")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*validate) {
      const rn::Plan plan = load(config);
      print_plan(plan);
      std::cout << "configuration ok\n";
      return 0;
    }
    if (*run || *report) {
      const rn::Plan plan = load(config);
      rn::ExecuteOptions opt;
      opt.results_dir = results_dir.empty() ? rn::default_results_dir() : fs::path(results_dir);
      opt.cores = cores;
      opt.force = force;
      opt.report_only = static_cast<bool>(*report);
      opt.log = [](const std::string& line) { std::cout << line << "\n"; };
      print_plan(plan);
      const rn::RunReport rep = rn::execute(plan, opt);
      std::cout << rep.summary() << "\n";
      return rep.exit_code();
    }
    if (*learn) return run_learn(data_path, module, params_text, discrete, out, seed);
    if (*stats) {
      const auto g = bp::io::read_adjmat(adjmat);
      std::cout << bp::eval::graph_stats_csv({bp::eval::graph_stats(fs::path(adjmat).stem().string(), std::nullopt, g)});
      return 0;
    }
  } catch (const rn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsageError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
