#include "benchpress/trajectory.hpp"

#include "benchpress/error.hpp"

namespace benchpress {

namespace {

std::string edge_text(const GraphTrajectory& t, const TrajectoryEdge& e) {
  return t.labels[e.from] + (e.directed ? "->" : "-") + t.labels[e.to];
}

void apply(const GraphTrajectory& t, LabeledGraph& g, const TrajectoryRecord& rec) {
  const std::size_t p = g.size();
  for (const auto& e : rec.removed) {
    if (e.from >= p || e.to >= p) throw ParseError("trajectory edge index out of range");
    const bool present = e.directed ? g.directed(e.from, e.to) : g.undirected(e.from, e.to);
    if (!present)
      throw ParseError("trajectory index " + std::to_string(rec.index) + " removes absent edge " + edge_text(t, e));
    g.remove(e.from, e.to);
  }
  for (const auto& e : rec.added) {
    if (e.from >= p || e.to >= p || e.from == e.to) throw ParseError("trajectory edge index out of range");
    if (g.adjacent(e.from, e.to))
      throw ParseError("trajectory index " + std::to_string(rec.index) + " adds present edge " + edge_text(t, e));
    if (e.directed)
      g.add_directed(e.from, e.to);
    else
      g.add_undirected(e.from, e.to);
  }
}

}  // namespace

void GraphTrajectory::validate() const {
  if (records.empty()) return;
  if (records.front().index != 0) throw ParseError("trajectory must start at index 0");
  if (!records.front().removed.empty()) throw ParseError("index 0 row must have removed = []");
  LabeledGraph g(labels);
  std::int64_t prev = -1;
  for (const auto& rec : records) {
    if (rec.index <= prev) throw ParseError("trajectory indices must be strictly increasing");
    prev = rec.index;
    apply(*this, g, rec);
  }
}

void for_each_segment(const GraphTrajectory& traj, std::int64_t from, std::int64_t to,
                      const std::function<void(std::int64_t, std::int64_t, const LabeledGraph&, double)>& fn) {
  LabeledGraph g(traj.labels);
  const auto& recs = traj.records;
  for (std::size_t k = 0; k < recs.size(); ++k) {
    apply(traj, g, recs[k]);
    const std::int64_t first = recs[k].index;
    const std::int64_t last = k + 1 < recs.size() ? recs[k + 1].index - 1 : traj.last_index();
    const std::int64_t lo = std::max(first, from), hi = std::min(last, to);
    if (lo <= hi) fn(lo, hi, g, recs[k].score);
    if (last >= to) break;
  }
}

LabeledGraph graph_at(const GraphTrajectory& traj, std::int64_t index) {
  if (index < 0 || index > traj.last_index()) throw InvalidArgument("trajectory index out of range");
  LabeledGraph out;
  for_each_segment(traj, index, index, [&](std::int64_t, std::int64_t, const LabeledGraph& g, double) { out = g; });
  return out;
}

}  // namespace benchpress
