#include "benchpress/graph.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "benchpress/error.hpp"

namespace benchpress {

LabeledGraph::LabeledGraph(std::vector<std::string> labels)
    : labels_(std::move(labels)), adj_(labels_.size() * labels_.size(), 0) {
  std::unordered_set<std::string> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) throw InvalidArgument("duplicate node label '" + l + "'");
  }
}

LabeledGraph::LabeledGraph(std::vector<std::string> labels, std::vector<std::uint8_t> adjacency)
    : LabeledGraph(std::move(labels)) {
  const std::size_t p = size();
  if (adjacency.size() != p * p) {
    throw InvalidArgument("adjacency matrix has " + std::to_string(adjacency.size()) +
                          " entries, expected " + std::to_string(p * p));
  }
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      const auto v = adjacency[i * p + j];
      if (v > 1) throw InvalidArgument("adjacency entries must be 0 or 1");
      if (i == j && v != 0) throw InvalidArgument("nonzero diagonal at node '" + labels_[i] + "'");
    }
  }
  adj_ = std::move(adjacency);
}

LabeledGraph LabeledGraph::with_numeric_labels(std::size_t p) {
  std::vector<std::string> labels;
  labels.reserve(p);
  for (std::size_t i = 1; i <= p; ++i) labels.push_back(std::to_string(i));
  return LabeledGraph(std::move(labels));
}

EdgeKind LabeledGraph::kind(std::size_t i, std::size_t j) const {
  const bool a = entry(i, j), b = entry(j, i);
  if (a && b) return EdgeKind::Undirected;
  if (a || b) return EdgeKind::Directed;
  return EdgeKind::Absent;
}

void LabeledGraph::add_directed(std::size_t from, std::size_t to) {
  if (from == to) throw InvalidArgument("self loop");
  set(from, to, true);
  set(to, from, false);
}

void LabeledGraph::add_undirected(std::size_t i, std::size_t j) {
  if (i == j) throw InvalidArgument("self loop");
  set(i, j, true);
  set(j, i, true);
}

void LabeledGraph::remove(std::size_t i, std::size_t j) {
  set(i, j, false);
  set(j, i, false);
}

std::size_t LabeledGraph::num_edges() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i + 1; j < size(); ++j)
      if (adjacent(i, j)) ++n;
  return n;
}

std::vector<std::size_t> LabeledGraph::parents(std::size_t i) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < size(); ++j)
    if (directed(j, i)) out.push_back(j);
  return out;
}

std::vector<std::size_t> LabeledGraph::children(std::size_t i) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < size(); ++j)
    if (directed(i, j)) out.push_back(j);
  return out;
}

std::vector<std::size_t> LabeledGraph::neighbors(std::size_t i) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < size(); ++j)
    if (adjacent(i, j)) out.push_back(j);
  return out;
}

bool LabeledGraph::has_undirected_edges() const {
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i + 1; j < size(); ++j)
      if (undirected(i, j)) return true;
  return false;
}

bool LabeledGraph::has_directed_edges() const {
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j)
      if (directed(i, j)) return true;
  return false;
}

LabeledGraph skeleton(const LabeledGraph& g) {
  LabeledGraph out(g.labels());
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j)
      if (g.adjacent(i, j)) out.add_undirected(i, j);
  return out;
}

std::vector<VStructure> v_structures(const LabeledGraph& g) {
  std::vector<VStructure> out;
  const std::size_t p = g.size();
  for (std::size_t k = 0; k < p; ++k) {
    const auto pa = g.parents(k);
    for (std::size_t a = 0; a < pa.size(); ++a)
      for (std::size_t b = a + 1; b < pa.size(); ++b)
        if (!g.adjacent(pa[a], pa[b])) out.push_back({pa[a], k, pa[b]});
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Kahn's algorithm on the directed part; returns the order it managed to build.
std::vector<std::size_t> kahn(const LabeledGraph& g) {
  const std::size_t p = g.size();
  std::vector<std::size_t> indeg(p, 0);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      if (g.directed(i, j)) ++indeg[j];
  std::set<std::size_t> ready;
  for (std::size_t i = 0; i < p; ++i)
    if (indeg[i] == 0) ready.insert(i);
  std::vector<std::size_t> order;
  order.reserve(p);
  while (!ready.empty()) {
    const std::size_t v = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(v);
    for (std::size_t j = 0; j < p; ++j)
      if (g.directed(v, j) && --indeg[j] == 0) ready.insert(j);
  }
  return order;
}

void require_dag(const LabeledGraph& g, const char* what) {
  if (!is_dag(g)) throw InvalidArgument(std::string(what) + " requires a DAG");
}

}  // namespace

bool directed_part_acyclic(const LabeledGraph& g) { return kahn(g).size() == g.size(); }

bool is_dag(const LabeledGraph& g) {
  return !g.has_undirected_edges() && directed_part_acyclic(g);
}

std::vector<std::size_t> topological_order(const LabeledGraph& g) {
  if (g.has_undirected_edges()) throw InvalidArgument("topological order of a graph with undirected edges");
  auto order = kahn(g);
  if (order.size() != g.size()) throw InvalidArgument("graph has a directed cycle");
  return order;
}

LabeledGraph pattern_graph(const LabeledGraph& g) {
  require_dag(g, "pattern_graph");
  LabeledGraph out = skeleton(g);
  for (const auto& v : v_structures(g)) {
    out.add_directed(v.i, v.k);
    out.add_directed(v.j, v.k);
  }
  return out;
}

namespace {

bool meek_r1(const LabeledGraph& g, std::size_t a, std::size_t b) {
  for (std::size_t c = 0; c < g.size(); ++c)
    if (c != b && g.directed(c, a) && !g.adjacent(c, b)) return true;
  return false;
}

bool meek_r2(const LabeledGraph& g, std::size_t a, std::size_t b) {
  for (std::size_t c = 0; c < g.size(); ++c)
    if (g.directed(a, c) && g.directed(c, b)) return true;
  return false;
}

bool meek_r3(const LabeledGraph& g, std::size_t a, std::size_t b) {
  const std::size_t p = g.size();
  for (std::size_t c = 0; c < p; ++c) {
    if (!g.undirected(a, c) || !g.directed(c, b)) continue;
    for (std::size_t d = c + 1; d < p; ++d)
      if (g.undirected(a, d) && g.directed(d, b) && !g.adjacent(c, d)) return true;
  }
  return false;
}

// a-c->d->b with c,b non-adjacent and a adjacent to d.
bool meek_r4(const LabeledGraph& g, std::size_t a, std::size_t b) {
  const std::size_t p = g.size();
  for (std::size_t d = 0; d < p; ++d) {
    if (d == a || !g.directed(d, b) || !g.adjacent(a, d)) continue;
    for (std::size_t c = 0; c < p; ++c)
      if (c != b && g.undirected(a, c) && g.directed(c, d) && !g.adjacent(c, b)) return true;
  }
  return false;
}

bool should_orient(const LabeledGraph& g, std::size_t a, std::size_t b) {
  return meek_r1(g, a, b) || meek_r2(g, a, b) || meek_r3(g, a, b) || meek_r4(g, a, b);
}

}  // namespace

std::size_t apply_meek_rules(LabeledGraph& g) {
  std::size_t oriented = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t a = 0; a < g.size(); ++a) {
      for (std::size_t b = a + 1; b < g.size(); ++b) {
        if (!g.undirected(a, b)) continue;
        if (should_orient(g, a, b)) {
          g.add_directed(a, b);
        } else if (should_orient(g, b, a)) {
          g.add_directed(b, a);
        } else {
          continue;
        }
        ++oriented;
        changed = true;
      }
    }
  }
  return oriented;
}

LabeledGraph cpdag(const LabeledGraph& g) {
  require_dag(g, "cpdag");
  LabeledGraph out = pattern_graph(g);
  apply_meek_rules(out);
  return out;
}

std::vector<std::size_t> maximum_cardinality_search(const LabeledGraph& g) {
  const std::size_t p = g.size();
  std::vector<std::size_t> weight(p, 0);
  std::vector<bool> done(p, false);
  std::vector<std::size_t> order;
  order.reserve(p);
  for (std::size_t step = 0; step < p; ++step) {
    std::size_t best = p;
    for (std::size_t v = 0; v < p; ++v)
      if (!done[v] && (best == p || weight[v] > weight[best])) best = v;
    done[best] = true;
    order.push_back(best);
    for (std::size_t u = 0; u < p; ++u)
      if (!done[u] && g.adjacent(best, u)) ++weight[u];
  }
  return order;
}

bool is_chordal(const LabeledGraph& g) {
  if (g.has_directed_edges()) throw InvalidArgument("is_chordal requires an undirected graph");
  const auto order = maximum_cardinality_search(g);
  // The reverse of an MCS order is a perfect elimination ordering iff g is
  // chordal, i.e. every node's already-visited neighbours form a clique.
  std::vector<std::size_t> visited;
  visited.reserve(order.size());
  for (std::size_t v : order) {
    std::vector<std::size_t> earlier;
    for (std::size_t u : visited)
      if (g.adjacent(u, v)) earlier.push_back(u);
    for (std::size_t a = 0; a < earlier.size(); ++a)
      for (std::size_t b = a + 1; b < earlier.size(); ++b)
        if (!g.adjacent(earlier[a], earlier[b])) return false;
    visited.push_back(v);
  }
  return true;
}

}  // namespace benchpress
