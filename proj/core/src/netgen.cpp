#include "benchpress/netgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "benchpress/error.hpp"
#include "benchpress/rng.hpp"

namespace benchpress::netgen {

void validate(const RandDagSpec& spec) {
  if (spec.n < 1) throw InvalidArgument("pcalg_randdag: n must be >= 1");
  if (!(spec.d >= 0.0) || !std::isfinite(spec.d))
    throw InvalidArgument("pcalg_randdag: d must be a finite number >= 0");
  if (spec.d > static_cast<double>(spec.n - 1))
    throw InvalidArgument("pcalg_randdag: d must not exceed n-1");
  if (spec.method != "er")
    throw InvalidArgument("pcalg_randdag: unsupported method '" + spec.method + "' (only \"er\")");
}

LabeledGraph gen_rand_dag(const RandDagSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);
  const std::size_t n = spec.n;
  LabeledGraph g = LabeledGraph::with_numeric_labels(n);
  if (n == 1) return g;

  // Fisher-Yates permutation; edges point from earlier to later positions.
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);

  const double prob = spec.d / static_cast<double>(n - 1);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (rng.uniform() < prob) g.add_directed(perm[a], perm[b]);

  if (spec.max_parents) {
    const std::size_t cap = *spec.max_parents;
    for (std::size_t v = 0; v < n; ++v) {
      auto pa = g.parents(v);
      if (pa.size() <= cap) continue;
      // Partial shuffle: the first (size - cap) entries are the ones dropped.
      const std::size_t excess = pa.size() - cap;
      for (std::size_t i = 0; i < excess; ++i) std::swap(pa[i], pa[i + rng.below(pa.size() - i)]);
      for (std::size_t i = 0; i < excess; ++i) g.remove(pa[i], v);
    }
  }
  return g;
}

LabeledGraph gen_bandmat(const BandSpec& spec) {
  if (spec.p < 1) throw InvalidArgument("bandmat: p must be >= 1");
  if (spec.bandwidth >= spec.p) throw InvalidArgument("bandmat: bandwidth must be < p");
  LabeledGraph g = LabeledGraph::with_numeric_labels(spec.p);
  for (std::size_t i = 0; i < spec.p; ++i)
    for (std::size_t j = i + 1; j < spec.p && j - i <= spec.bandwidth; ++j) g.add_undirected(i, j);
  return g;
}

LabeledGraph gen_rand_bandmat(const BandSpec& spec) {
  if (spec.p < 1) throw InvalidArgument("rand_bandmat: p must be >= 1");
  if (spec.bandwidth >= spec.p) throw InvalidArgument("rand_bandmat: max_bandwidth must be < p");
  Rng rng(spec.seed);
  LabeledGraph g = LabeledGraph::with_numeric_labels(spec.p);
  for (std::size_t i = 0; i < spec.p; ++i) {
    const std::size_t width = rng.below(spec.bandwidth + 1);
    for (std::size_t j = i + 1; j < spec.p && j - i <= width; ++j) g.add_undirected(i, j);
  }
  return g;
}

}  // namespace benchpress::netgen
