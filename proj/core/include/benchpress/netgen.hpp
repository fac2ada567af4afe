#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "benchpress/graph.hpp"

namespace benchpress::netgen {

/// Erdos-Renyi random DAG with a cap on the number of parents per node.
struct RandDagSpec {
  std::size_t n = 1;
  double d = 0.0;                          ///< expected neighbours per node
  std::optional<std::size_t> max_parents;  ///< nullopt = unbounded
  std::string method = "er";
  std::uint64_t seed = 0;
};

struct BandSpec {
  std::size_t p = 1;
  std::size_t bandwidth = 0;  ///< fixed width, or maximum width for the random variant
  std::uint64_t seed = 0;     ///< random variant only
};

void validate(const RandDagSpec& spec);

/// ER skeleton with edge probability d/(n-1), oriented along a uniformly random
/// node permutation, then excess in-edges deleted uniformly at random per node.
/// Node labels are "1".."n".
LabeledGraph gen_rand_dag(const RandDagSpec& spec);

/// Undirected graph with i-j iff 0 < |i-j| <= bandwidth.
LabeledGraph gen_bandmat(const BandSpec& spec);

/// Per-node widths b_i ~ Unif{0..bandwidth}; edge i-j (i<j) iff j-i <= b_i.
LabeledGraph gen_rand_bandmat(const BandSpec& spec);

}  // namespace benchpress::netgen
