#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "benchpress/citests.hpp"
#include "benchpress/error.hpp"
#include "benchpress/graph.hpp"
#include "benchpress/scores.hpp"
#include "benchpress/trajectory.hpp"

namespace benchpress::learn {

/// Thrown from inside a learner when its StopToken fires.
class Cancelled : public Error {
 public:
  Cancelled() : Error("learner cancelled") {}
};

/// Cooperative cancellation: a wall-clock deadline plus an optional external flag.
/// Native learners poll it once per iteration.
class StopToken {
 public:
  StopToken() = default;
  explicit StopToken(std::chrono::steady_clock::time_point deadline) : deadline_(deadline) {}
  StopToken(std::optional<std::chrono::steady_clock::time_point> deadline, const std::atomic<bool>* flag)
      : deadline_(deadline), flag_(flag) {}

  static StopToken after(std::chrono::duration<double> timeout);

  bool stop_requested() const;
  void throw_if_stopped() const {
    if (stop_requested()) throw Cancelled();
  }
  std::optional<std::chrono::steady_clock::time_point> deadline() const { return deadline_; }

 private:
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  const std::atomic<bool>* flag_ = nullptr;
};

// ---------------------------------------------------------------- PC

struct PcOptions {
  double alpha = 0.05;
  std::optional<std::size_t> max_cond;  ///< largest conditioning set; nullopt = unbounded
};

struct PcResult {
  LabeledGraph graph;  ///< partially directed
  std::size_t ntests = 0;
  std::size_t conflicts = 0;  ///< v-structure orientations that overrode an earlier one
};

/// PC-stable skeleton search followed by v-structure orientation and Meek's rules.
PcResult pc(const citests::CITest& test, const std::vector<std::string>& labels, const PcOptions& options,
            const StopToken& stop = {});

// ---------------------------------------------------------------- score search

struct SearchResult {
  LabeledGraph dag;
  double score = 0.0;
  std::vector<double> trace;  ///< score after each applied move, starting with the empty DAG
  std::size_t iterations = 0;
};

/// Greedy add/delete/reverse search from the empty DAG.
SearchResult hill_climb(const scores::LocalScore& score, const std::vector<std::string>& labels,
                        const StopToken& stop = {});

struct TabuOptions {
  std::size_t tabu_len = 10;
  std::size_t stagnation_max = 10;
};

/// Hill climbing that escapes local optima through non-tabu, non-improving
/// moves; returns the best DAG visited.
SearchResult tabu(const scores::LocalScore& score, const std::vector<std::string>& labels, const TabuOptions& options,
                  const StopToken& stop = {});

/// Metropolis-Hastings over DAGs with uniform add/delete/reverse proposals,
/// started from the empty DAG. Only accepted moves are recorded; a final
/// no-op record at index `iterations` is appended when the last iteration
/// rejected, so the trajectory always spans indices 0..iterations.
GraphTrajectory structure_mcmc(const scores::LocalScore& score, const std::vector<std::string>& labels,
                               std::size_t iterations, std::uint64_t seed, const StopToken& stop = {});

// ---------------------------------------------------------------- results and plugins

enum class Status { Ok, TimedOut, Failed };

std::string to_string(Status s);
Status status_from_string(const std::string& s);

using Estimate = std::variant<LabeledGraph, GraphTrajectory>;

struct LearnerResult {
  std::optional<Estimate> estimate;  ///< present iff status == Ok
  double wall_time = 0.0;            ///< seconds
  std::optional<std::int64_t> ntests;
  Status status = Status::Failed;
  std::string diagnostic;
};

/// What a native learner returns on success.
struct LearnerOutput {
  Estimate estimate;
  std::optional<std::int64_t> ntests;
};

/// Runs `thunk` under an optional wall-clock limit (seconds, > 0). A thunk that
/// throws Cancelled yields TimedOut; any other exception yields Failed.
LearnerResult with_timeout(std::optional<double> timeout, const std::function<LearnerOutput(const StopToken&)>& thunk);

/// Child-process learner obeying the data-in / adjmat-time-ntests-out contract.
struct ExternalSpec {
  std::string command;  ///< template with {data} {adjmat} {time} {ntests} {replicate} and {<param>} placeholders
  std::map<std::string, std::string> params;
  std::optional<double> timeout;
};

/// Substitutes placeholders. Paths are single-quoted for the shell; parameter
/// values and the replicate number are inserted verbatim. Throws
/// InvalidArgument on an unknown placeholder.
std::string expand_command(const ExternalSpec& spec, const std::filesystem::path& data,
                           const std::filesystem::path& adjmat, const std::filesystem::path& time,
                           const std::filesystem::path& ntests, std::uint64_t replicate);

/// Executes the plugin via /bin/sh in `work_dir`, killing its process group on
/// timeout, and parses the three output files.
LearnerResult run_external(const ExternalSpec& spec, const std::filesystem::path& data_path,
                           const std::filesystem::path& work_dir, std::uint64_t replicate);

}  // namespace benchpress::learn
