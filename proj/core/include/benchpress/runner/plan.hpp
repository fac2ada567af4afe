#pragma once

#include <cstdint>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "benchpress/runner/config.hpp"

namespace benchpress::runner {

enum class Stage { Graph, Parameters, Data, Learner, Evaluation };
std::string to_string(Stage s);

struct GraphJob {
  std::string id;  ///< resource id or file name as written
  std::string module;  ///< empty for a fixed file
  nlohmann::json params;
  std::filesystem::path file;
  std::optional<std::int64_t> seed;
};

struct ParamsJob {
  std::string module;  ///< empty for a fixed weight file
  nlohmann::json params;
  std::filesystem::path file;
  std::size_t graph_job = 0;
};

struct DataJob {
  std::filesystem::path file;  ///< fixed data; empty when generated
  bool standardized = false;
  std::size_t sample_size = 0;
  std::optional<std::size_t> graph_job;
  std::optional<std::size_t> params_job;
};

struct LearnerJob {
  std::string module;
  nlohmann::json point;
  std::string json_path;
  std::optional<std::int64_t> seed;
  std::size_t data_job = 0;
};

/// One scored run: an algorithm id applied to one replicate of one setup.
struct RunRef {
  std::string id;
  std::string param;
  std::string params_hash;
  std::optional<std::int64_t> seed;
  std::size_t setup = 0;
  std::size_t learner_job = 0;
  std::optional<std::size_t> graph_job;
};

struct EvaluationJob {
  std::vector<RunRef> runs;
  std::vector<std::size_t> graph_jobs;  ///< distinct true graphs, in plan order
  std::size_t num_setups = 0;
};

using JobPayload = std::variant<GraphJob, ParamsJob, DataJob, LearnerJob, EvaluationJob>;

struct Job {
  nlohmann::json key;  ///< stage, module, parameters, seed and input hashes
  std::string hash;    ///< hex_hash of the canonical key
  std::uint64_t stream_seed = 0;
  std::vector<std::size_t> deps;  ///< indices of earlier jobs
  std::string label;
  JobPayload payload;

  Stage stage() const { return static_cast<Stage>(payload.index()); }
};

struct Plan {
  BenchmarkConfig config;
  std::vector<Job> jobs;  ///< topologically ordered; duplicates merged by hash
  std::optional<std::size_t> evaluation;

  std::size_t count(Stage s) const;
};

/// Builds the job DAG. Throws ConfigError when the evaluation asks for
/// something the setup cannot provide.
Plan make_plan(const BenchmarkConfig& config);

}  // namespace benchpress::runner
