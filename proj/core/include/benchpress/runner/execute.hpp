#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "benchpress/learners.hpp"
#include "benchpress/runner/plan.hpp"

namespace benchpress::runner {

struct ExecuteOptions {
  std::filesystem::path results_dir;
  std::size_t cores = 1;
  /// Re-emit the evaluation from cached results only; every other job must be cached.
  bool report_only = false;
  /// Ignore cache hits and recompute every job.
  bool force = false;
  /// Progress lines, called from the scheduling thread only.
  std::function<void(const std::string&)> log;
};

enum class JobState { Pending, Cached, Executed, Failed, Skipped };
std::string to_string(JobState s);

struct JobOutcome {
  JobState state = JobState::Pending;
  std::optional<learn::Status> learner_status;  ///< learner jobs that ran or were cached
  std::string message;
};

struct RunReport {
  std::vector<JobOutcome> outcomes;  ///< parallel to Plan::jobs

  std::size_t count(JobState s) const;
  std::size_t learner_count(learn::Status s) const;
  /// 0 unless a job failed or a learner ended with status failed. Timeouts do not count.
  int exit_code() const;
  std::string summary() const;
};

/// Results root: BENCHPRESS_RESULTS if set, otherwise ./results.
std::filesystem::path default_results_dir();

std::filesystem::path job_dir(const std::filesystem::path& results_dir, const Job& job);

/// Runs the plan with up to `cores` jobs in flight. Outputs of each job are
/// written to a temporary directory and renamed into results/<stage>/<hash>.
/// Evaluation outputs are also copied to results/output/.
RunReport execute(const Plan& plan, const ExecuteOptions& options);

/// Reads a learner job's stored result from its results directory.
learn::LearnerResult read_learner_result(const std::filesystem::path& dir);

}  // namespace benchpress::runner
