#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "benchpress/graph.hpp"

namespace benchpress {

struct TrajectoryEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  bool directed = false;
  friend bool operator==(const TrajectoryEdge&, const TrajectoryEdge&) = default;
};

/// One accepted move: the graph after applying `added`/`removed` holds from
/// `index` until the next record.
struct TrajectoryRecord {
  std::int64_t index = 0;
  double score = 0.0;
  std::vector<TrajectoryEdge> added;
  std::vector<TrajectoryEdge> removed;
  friend bool operator==(const TrajectoryRecord&, const TrajectoryRecord&) = default;
};

/// Compact MCMC trajectory. The two label header rows (indices -2 and -1) are
/// implied by `labels`; `records` starts at index 0 with the starting graph.
struct GraphTrajectory {
  std::vector<std::string> labels;
  std::vector<TrajectoryRecord> records;

  /// Index of the final graph (last record), or -1 when empty.
  std::int64_t last_index() const { return records.empty() ? -1 : records.back().index; }

  /// Checks index monotonicity and that replay never adds a present edge or
  /// removes an absent one. Throws ParseError describing the first violation.
  void validate() const;

  friend bool operator==(const GraphTrajectory&, const GraphTrajectory&) = default;
};

/// Calls `fn(first, last, graph, score)` for every maximal run of indices
/// [first, last] during which the graph is constant, clipped to [from, to].
void for_each_segment(const GraphTrajectory& traj, std::int64_t from, std::int64_t to,
                      const std::function<void(std::int64_t, std::int64_t, const LabeledGraph&, double)>& fn);

/// Graph in force at `index`.
LabeledGraph graph_at(const GraphTrajectory& traj, std::int64_t index);

}  // namespace benchpress
