#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "benchpress/error.hpp"
#include "benchpress/evalreport.hpp"
#include "benchpress/learners.hpp"
#include "benchpress/netgen.hpp"

namespace benchpress::runner {

/// Invalid configuration; the message starts with the JSON path of the offending value.
class ConfigError : public Error {
 public:
  ConfigError(std::string json_path, const std::string& message)
      : Error(json_path + ": " + message), json_path_(std::move(json_path)) {}
  const std::string& json_path() const { return json_path_; }

 private:
  std::string json_path_;
};

/// One object of a resources module list, e.g. resources.graph.pcalg_randdag[0].
struct ModuleObject {
  std::string section;  ///< graph, parameters, data or structure_learning_algorithms
  std::string module;   ///< e.g. pcalg_randdag
  std::string id;
  nlohmann::json params;  ///< the object without "id"
  std::string json_path;
};

// ---------------------------------------------------------------- typed module views

struct IidSpec {
  bool standardized = false;
  std::vector<std::size_t> sample_sizes;
};

enum class ScoreKind { BDeu, BGe };
struct ScoreSpec {
  ScoreKind kind = ScoreKind::BDeu;
  double iss = 1.0;  ///< BDeu equivalent sample size
  double am = 1.0;   ///< BGe
  std::optional<double> aw;
};

enum class TestKind { FisherZ, G2 };
struct PcSpec {
  TestKind test = TestKind::FisherZ;
  learn::PcOptions options;
};
struct HcSpec {
  ScoreSpec score;
};
struct TabuSpec {
  ScoreSpec score;
  learn::TabuOptions options;
};
struct McmcSpec {
  ScoreSpec score;
  std::size_t iterations = 0;
};
struct ExternalAlgSpec {
  std::optional<std::string> command;
  std::map<std::string, std::string> params;
};
using AlgorithmSpec = std::variant<PcSpec, HcSpec, TabuSpec, McmcSpec, ExternalAlgSpec>;

/// Native algorithm modules; any other module name is an external plugin.
bool is_native_algorithm(const std::string& module);

/// Typed view of one grid point of an algorithm object. Throws ConfigError.
AlgorithmSpec algorithm_spec(const std::string& module, const nlohmann::json& point, const std::string& json_path);
std::optional<double> timeout_of(const nlohmann::json& point, const std::string& json_path);

netgen::RandDagSpec rand_dag_spec(const nlohmann::json& params, const std::string& json_path);
/// bandmat or rand_bandmat.
netgen::BandSpec band_spec(const std::string& module, const nlohmann::json& params, const std::string& json_path);
/// bin_bn or sem_params: (min, max).
std::pair<double, double> param_range(const std::string& module, const nlohmann::json& params,
                                      const std::string& json_path);
IidSpec iid_spec(const nlohmann::json& params, const std::string& json_path);

/// Cartesian product over list-valued fields, keys in sorted order, values in
/// list order. `varied` receives the names of the list-valued fields.
std::vector<nlohmann::json> expand_grid(const nlohmann::json& params, std::vector<std::string>* varied = nullptr);

/// Human label of the varied values of a grid point ("0.05", or "a=1;b=2").
std::string param_label(const nlohmann::json& point, const std::vector<std::string>& varied);

// ---------------------------------------------------------------- setup

/// A graph/parameters/data reference: a resource id, a file, or nothing.
struct Source {
  enum class Kind { None, Module, File, Directory };
  Kind kind = Kind::None;
  std::string ref;              ///< as written in the config
  std::filesystem::path path;   ///< File and Directory
};

struct DataTuple {
  Source graph;
  Source parameters;
  Source data;
  std::optional<std::pair<std::int64_t, std::int64_t>> seed_range;  ///< inclusive
  std::string json_path;

  std::vector<std::int64_t> seeds() const;
};

struct BenchmarksEval {
  std::string filename_prefix;
  bool show_seed = false;
  bool errorbar = true;
  bool errorbarh = false;
  bool scatter = false;
  bool path = true;
  bool text = false;
  std::vector<std::string> ids;
  eval::GraphType graph_type = eval::GraphType::Cpdag;
};

struct McmcEval {
  std::string id;
  std::int64_t burn_in = 0;
  eval::Functional functional = eval::Functional::Score;
  std::int64_t thinning = 1;
  std::size_t lags = 0;
};

struct Evaluation {
  std::optional<BenchmarksEval> benchmarks;
  bool graph_true_plots = false;
  bool graph_true_stats = false;
  bool ggally_ggpairs = false;  ///< accepted, no output
  std::vector<std::string> graph_plots;
  std::vector<McmcEval> mcmc_traj_plots;
  std::vector<McmcEval> mcmc_heatmaps;
  std::vector<McmcEval> mcmc_autocorr_plots;

  bool empty() const {
    return !benchmarks && !graph_true_plots && !graph_true_stats && graph_plots.empty() && mcmc_traj_plots.empty() &&
           mcmc_heatmaps.empty() && mcmc_autocorr_plots.empty();
  }
};

struct BenchmarkConfig {
  std::filesystem::path base_dir;  ///< directory of the config file; resources/ is resolved against it
  std::map<std::string, ModuleObject> graphs;
  std::map<std::string, ModuleObject> parameters;
  std::map<std::string, ModuleObject> data;
  std::map<std::string, ModuleObject> algorithms;
  std::vector<DataTuple> tuples;
  Evaluation evaluation;
  nlohmann::json evaluation_json;
  std::vector<std::string> warnings;
};

/// Parses and cross-checks a configuration. Throws ConfigError.
BenchmarkConfig parse_config(const std::filesystem::path& path);
BenchmarkConfig parse_config_text(std::string_view text, const std::filesystem::path& base_dir);

}  // namespace benchpress::runner
