#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "benchpress/graph.hpp"
#include "benchpress/learners.hpp"
#include "benchpress/metrics.hpp"
#include "benchpress/trajectory.hpp"

namespace benchpress::eval {

/// How graphs are transformed before they are compared.
enum class GraphType { Cpdag, Pattern, Skeleton, Raw };

GraphType graph_type_from_string(const std::string& s);
std::string to_string(GraphType t);

/// cpdag and pattern are applied only to DAGs; other graphs pass unchanged.
LabeledGraph prepare(const LabeledGraph& g, GraphType type);

// ---------------------------------------------------------------- benchmarks

struct BenchmarkRow {
  std::string id;
  std::string params_hash;
  std::optional<std::int64_t> seed;
  std::string param;  ///< value of the varied parameter(s); groups ROC points
  learn::Status status = learn::Status::Failed;
  std::optional<double> time_s;
  std::optional<std::int64_t> ntests;
  std::optional<metrics::ComparisonScores> scores;  ///< present iff status is ok
};

/// Everything known about one learner run before scoring.
struct RunRecord {
  std::string id;
  std::string params_hash;
  std::optional<std::int64_t> seed;
  std::string param;
  learn::LearnerResult result;
  std::optional<LabeledGraph> truth;
};

/// One row per run. Trajectory estimates are scored by their final graph.
/// Throws InvalidArgument if an ok run has no truth graph.
std::vector<BenchmarkRow> benchmarks_table(const std::vector<RunRecord>& runs, GraphType type);

struct RocPoint {
  std::string id;
  std::string param;
  std::optional<double> median_fprp;
  std::optional<double> median_tpr;
  std::optional<double> tpr_q05;
  std::optional<double> tpr_q95;
  std::optional<double> fprp_q05;
  std::optional<double> fprp_q95;
  std::size_t n_ok = 0;
};

/// Groups rows by (id, param); statistics over ok rows with defined rates.
/// Points are ordered by id, then numerically by param where possible.
std::vector<RocPoint> roc_aggregate(const std::vector<BenchmarkRow>& rows);

std::string benchmarks_csv(const std::vector<BenchmarkRow>& rows);
std::string roc_csv(const std::vector<RocPoint>& points);

// ---------------------------------------------------------------- true graphs

struct GraphStats {
  std::string id;
  std::optional<std::int64_t> seed;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  double density = 0.0;  ///< |E| / |V|
  std::size_t max_indegree = 0;
};

GraphStats graph_stats(const std::string& id, std::optional<std::int64_t> seed, const LabeledGraph& g);
std::string graph_stats_csv(const std::vector<GraphStats>& stats);

// ---------------------------------------------------------------- MCMC

/// Fraction of indices burn_in..M at which each adjacency entry is 1.
Eigen::MatrixXd edge_posterior(const GraphTrajectory& traj, std::int64_t burn_in);

enum class Functional { Size, Score };
Functional functional_from_string(const std::string& s);

struct SeriesPoint {
  std::int64_t index;
  double value;
};

/// Value at indices burn_in, burn_in + thinning, ... up to M.
std::vector<SeriesPoint> traj_functional(const GraphTrajectory& traj, Functional f, std::int64_t burn_in,
                                         std::int64_t thinning);

/// r_k = N/(N-k) * sum_t (x_t - m)(x_{t+k} - m) / sum_t (x_t - m)^2 for k = 0..lags.
/// Throws InvalidArgument for a constant series or one not longer than `lags`.
std::vector<double> autocorr(const std::vector<double>& series, std::size_t lags);

/// Linear interpolation between order statistics (q in [0, 1]).
double quantile(std::vector<double> values, double q);

std::string matrix_csv(const std::vector<std::string>& labels, const Eigen::MatrixXd& m);
std::string series_csv(const std::vector<SeriesPoint>& series);
std::string autocorr_csv(const std::vector<double>& acf);

}  // namespace benchpress::eval
