#include <algorithm>
#include <set>

#include "benchpress/learners.hpp"

namespace benchpress::learn {

namespace {

// Calls fn on every size-k subset of `items` in lexicographic order until fn returns true.
template <typename Fn>
bool any_subset(const std::vector<std::size_t>& items, std::size_t k, Fn&& fn) {
  if (k > items.size()) return false;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  std::vector<std::size_t> subset(k);
  while (true) {
    for (std::size_t i = 0; i < k; ++i) subset[i] = items[idx[i]];
    if (fn(subset)) return true;
    std::size_t pos = k;
    while (pos > 0 && idx[pos - 1] == items.size() - k + pos - 1) --pos;
    if (pos == 0) return false;
    ++idx[pos - 1];
    for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
  }
}

}  // namespace

PcResult pc(const citests::CITest& test, const std::vector<std::string>& labels, const PcOptions& options,
            const StopToken& stop) {
  const std::size_t p = labels.size();
  if (test.num_vars() != p) throw InvalidArgument("PC: label count does not match the test's variables");
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw InvalidArgument("PC: alpha must lie in (0, 1)");

  PcResult res{LabeledGraph(labels), 0, 0};
  LabeledGraph& g = res.graph;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j) g.add_undirected(i, j);

  std::vector<std::vector<std::set<std::size_t>>> sepset(p, std::vector<std::set<std::size_t>>(p));

  // Every loop runs in label order, so the result does not depend on column order.
  std::vector<std::size_t> order(p);
  for (std::size_t i = 0; i < p; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return labels[a] < labels[b]; });
  std::vector<std::size_t> rank(p);
  for (std::size_t r = 0; r < p; ++r) rank[order[r]] = r;
  const auto by_label = [&](std::size_t a, std::size_t b) { return rank[a] < rank[b]; };

  // Adjacency search, PC-stable: neighbourhoods are frozen at the start of each level.
  for (std::size_t level = 0;; ++level) {
    if (options.max_cond && level > *options.max_cond) break;
    std::vector<std::vector<std::size_t>> frozen(p);
    for (std::size_t i = 0; i < p; ++i) {
      frozen[i] = g.neighbors(i);
      std::sort(frozen[i].begin(), frozen[i].end(), by_label);
    }

    bool any_candidate = false;
    for (std::size_t i : order) {
      for (std::size_t j : frozen[i]) {
        if (!g.adjacent(i, j)) continue;
        std::vector<std::size_t> others;
        for (std::size_t k : frozen[i])
          if (k != j) others.push_back(k);
        if (others.size() < level) continue;
        any_candidate = true;
        stop.throw_if_stopped();
        any_subset(others, level, [&](const std::vector<std::size_t>& s) {
          ++res.ntests;
          if (!test.test(i, j, s, options.alpha).independent) return false;
          g.remove(i, j);
          sepset[i][j] = sepset[j][i] = std::set<std::size_t>(s.begin(), s.end());
          return true;
        });
      }
    }
    if (!any_candidate) break;
  }

  // Unshielded triples i - k - j, i before j: collider iff k is not in sepset(i, j).
  const LabeledGraph skel = g;
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = a + 1; b < p; ++b) {
      const std::size_t i = order[a], j = order[b];
      if (skel.adjacent(i, j)) continue;
      for (std::size_t k : order) {
        if (!skel.adjacent(i, k) || !skel.adjacent(j, k) || sepset[i][j].count(k)) continue;
        stop.throw_if_stopped();
        for (std::size_t end : {i, j}) {
          if (g.directed(k, end)) ++res.conflicts;  // later orientation wins
          g.add_directed(end, k);
        }
      }
    }
  }

  apply_meek_rules(g);
  return res;
}

}  // namespace benchpress::learn
