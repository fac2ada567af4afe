#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace benchpress {

/// Kind of the connection between an unordered node pair.
enum class EdgeKind : std::uint8_t { Absent, Directed, Undirected };

/// Graph over labelled nodes stored as a p x p 0/1 adjacency matrix.
///
/// Entry (i,j)=1 with (j,i)=0 is the directed edge i->j; (i,j)=(j,i)=1 is the
/// undirected edge i-j. This is exactly the adjacency-matrix CSV layout, so
/// DAGs, undirected graphs, CPDAGs and pattern graphs share one type.
class LabeledGraph {
 public:
  LabeledGraph() = default;

  /// Edgeless graph on the given labels.
  explicit LabeledGraph(std::vector<std::string> labels);

  /// Graph from a row-major adjacency matrix. Throws InvalidArgument on a
  /// size mismatch, nonzero diagonal, entries outside {0,1} or duplicate labels.
  LabeledGraph(std::vector<std::string> labels, std::vector<std::uint8_t> adjacency);

  /// Labels "1".."p".
  static LabeledGraph with_numeric_labels(std::size_t p);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  const std::vector<std::uint8_t>& adjacency() const { return adj_; }

  /// Raw matrix entry (i,j).
  bool entry(std::size_t i, std::size_t j) const { return adj_[i * size() + j] != 0; }

  bool adjacent(std::size_t i, std::size_t j) const { return entry(i, j) || entry(j, i); }
  /// True iff i->j (and not j->i).
  bool directed(std::size_t i, std::size_t j) const { return entry(i, j) && !entry(j, i); }
  bool undirected(std::size_t i, std::size_t j) const { return entry(i, j) && entry(j, i); }
  EdgeKind kind(std::size_t i, std::size_t j) const;

  void add_directed(std::size_t from, std::size_t to);
  void add_undirected(std::size_t i, std::size_t j);
  /// Drops both entries of the pair.
  void remove(std::size_t i, std::size_t j);

  /// Number of adjacent unordered pairs.
  std::size_t num_edges() const;

  /// Nodes j with j->i.
  std::vector<std::size_t> parents(std::size_t i) const;
  /// Nodes j with i->j.
  std::vector<std::size_t> children(std::size_t i) const;
  /// Nodes adjacent to i by any edge kind.
  std::vector<std::size_t> neighbors(std::size_t i) const;

  bool has_undirected_edges() const;
  bool has_directed_edges() const;

  friend bool operator==(const LabeledGraph&, const LabeledGraph&) = default;

 private:
  void set(std::size_t i, std::size_t j, bool v) { adj_[i * size() + j] = v ? 1 : 0; }

  std::vector<std::string> labels_;
  std::vector<std::uint8_t> adj_;
};

/// Unshielded collider i -> k <- j with i < j and i, j non-adjacent.
struct VStructure {
  std::size_t i;
  std::size_t k;
  std::size_t j;
  friend auto operator<=>(const VStructure&, const VStructure&) = default;
};

/// Fully undirected graph with an edge wherever g has one.
LabeledGraph skeleton(const LabeledGraph& g);

/// All v-structures, sorted by (i, k, j).
std::vector<VStructure> v_structures(const LabeledGraph& g);

/// True iff no symmetric entry pair and no directed cycle.
bool is_dag(const LabeledGraph& g);

/// True iff the directed edges alone contain no cycle (undirected edges ignored).
bool directed_part_acyclic(const LabeledGraph& g);

/// Topological order of a DAG (smallest available index first). Throws on a cycle.
std::vector<std::size_t> topological_order(const LabeledGraph& g);

/// v-structure arrows kept, every other edge undirected. Throws on non-DAG input.
LabeledGraph pattern_graph(const LabeledGraph& g);

/// Applies Meek's rules R1-R4 to a partially directed graph until no rule fires.
/// Only undirected edges are ever oriented. Returns the number of orientations.
std::size_t apply_meek_rules(LabeledGraph& g);

/// Essential graph of g's Markov equivalence class. Throws on non-DAG input.
LabeledGraph cpdag(const LabeledGraph& g);

/// Chordality via maximum cardinality search plus perfect-elimination check.
/// Throws InvalidArgument if g contains directed edges.
bool is_chordal(const LabeledGraph& g);

/// Maximum cardinality search order (the order nodes are numbered).
std::vector<std::size_t> maximum_cardinality_search(const LabeledGraph& g);

}  // namespace benchpress
