#pragma once

// Add/delete/reverse neighbourhood of a DAG, shared by the score-based learners.

#include <cstdint>
#include <vector>

#include "benchpress/graph.hpp"
#include "benchpress/scores.hpp"

namespace benchpress::learn::detail {

enum class MoveType : std::uint8_t { Add = 0, Delete = 1, Reverse = 2 };

/// Add: new edge from->to. Delete/Reverse: the existing edge from->to.
struct Move {
  MoveType type;
  std::size_t from;
  std::size_t to;
};

/// reach[i * p + j] != 0 iff a directed path of length >= 1 runs i ~> j.
std::vector<std::uint8_t> reachability(const LabeledGraph& dag);

/// All acyclicity-preserving moves, ordered by (type, from, to).
std::vector<Move> legal_moves(const LabeledGraph& dag);

/// Number of legal moves, without materializing them.
std::size_t count_legal_moves(const LabeledGraph& dag);

void apply_move(LabeledGraph& dag, const Move& m);

/// Current parent sets and local scores of a DAG under a decomposable score.
class ScoredDag {
 public:
  ScoredDag(const scores::LocalScore& score, LabeledGraph dag);

  const LabeledGraph& dag() const { return dag_; }
  /// Sum of node scores in node order (bitwise equal to LocalScore::total).
  double total() const;
  double delta(const Move& m) const;
  void apply(const Move& m);

 private:
  double local_with(std::size_t node, std::size_t extra) const;
  double local_without(std::size_t node, std::size_t dropped) const;

  const scores::LocalScore* score_;
  LabeledGraph dag_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<double> local_;
};

}  // namespace benchpress::learn::detail
