#include <algorithm>
#include <deque>

#include "benchpress/learners.hpp"
#include "dag_moves.hpp"

namespace benchpress::learn {

namespace detail {

std::vector<std::uint8_t> reachability(const LabeledGraph& dag) {
  const std::size_t p = dag.size();
  std::vector<std::vector<std::size_t>> children(p);
  for (std::size_t i = 0; i < p; ++i) children[i] = dag.children(i);
  std::vector<std::uint8_t> reach(p * p, 0);
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < p; ++s) {
    stack.assign(children[s].begin(), children[s].end());
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      if (reach[s * p + v]) continue;
      reach[s * p + v] = 1;
      for (std::size_t c : children[v])
        if (!reach[s * p + c]) stack.push_back(c);
    }
  }
  return reach;
}

namespace {

// Reversing from->to is legal iff no other path from ~> to exists.
bool reversible(const LabeledGraph& dag, const std::vector<std::uint8_t>& reach, std::size_t from, std::size_t to) {
  const std::size_t p = dag.size();
  for (std::size_t c = 0; c < p; ++c)
    if (c != to && dag.directed(from, c) && reach[c * p + to]) return false;
  return true;
}

template <typename Fn>
void for_each_legal(const LabeledGraph& dag, Fn&& fn) {
  const std::size_t p = dag.size();
  const auto reach = reachability(dag);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      if (i != j && !dag.adjacent(i, j) && !reach[j * p + i]) fn(Move{MoveType::Add, i, j});
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      if (dag.directed(i, j)) fn(Move{MoveType::Delete, i, j});
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      if (dag.directed(i, j) && reversible(dag, reach, i, j)) fn(Move{MoveType::Reverse, i, j});
}

}  // namespace

std::vector<Move> legal_moves(const LabeledGraph& dag) {
  std::vector<Move> out;
  for_each_legal(dag, [&](const Move& m) { out.push_back(m); });
  return out;
}

std::size_t count_legal_moves(const LabeledGraph& dag) {
  std::size_t n = 0;
  for_each_legal(dag, [&](const Move&) { ++n; });
  return n;
}

void apply_move(LabeledGraph& dag, const Move& m) {
  switch (m.type) {
    case MoveType::Add: dag.add_directed(m.from, m.to); break;
    case MoveType::Delete: dag.remove(m.from, m.to); break;
    case MoveType::Reverse: dag.add_directed(m.to, m.from); break;
  }
}

ScoredDag::ScoredDag(const scores::LocalScore& score, LabeledGraph dag)
    : score_(&score), dag_(std::move(dag)), parents_(dag_.size()), local_(dag_.size()) {
  if (score.num_nodes() != dag_.size()) throw InvalidArgument("score and graph sizes differ");
  for (std::size_t v = 0; v < dag_.size(); ++v) {
    parents_[v] = dag_.parents(v);
    local_[v] = score_->local(v, parents_[v]);
  }
}

double ScoredDag::total() const {
  double s = 0.0;
  for (double x : local_) s += x;
  return s;
}

double ScoredDag::local_with(std::size_t node, std::size_t extra) const {
  std::vector<std::size_t> pa = parents_[node];
  pa.insert(std::upper_bound(pa.begin(), pa.end(), extra), extra);
  return score_->local(node, pa);
}

double ScoredDag::local_without(std::size_t node, std::size_t dropped) const {
  std::vector<std::size_t> pa;
  pa.reserve(parents_[node].size());
  for (std::size_t x : parents_[node])
    if (x != dropped) pa.push_back(x);
  return score_->local(node, pa);
}

double ScoredDag::delta(const Move& m) const {
  switch (m.type) {
    case MoveType::Add: return local_with(m.to, m.from) - local_[m.to];
    case MoveType::Delete: return local_without(m.to, m.from) - local_[m.to];
    case MoveType::Reverse:
      return (local_without(m.to, m.from) - local_[m.to]) + (local_with(m.from, m.to) - local_[m.from]);
  }
  return 0.0;
}

void ScoredDag::apply(const Move& m) {
  apply_move(dag_, m);
  for (std::size_t v : {m.from, m.to}) {
    parents_[v] = dag_.parents(v);
    local_[v] = score_->local(v, parents_[v]);
  }
}

}  // namespace detail

namespace {

using detail::Move;
using detail::ScoredDag;

// Score changes at or below this are treated as no improvement, which keeps
// score-equivalent reversals (delta ~ 1e-14) from being taken as progress.
constexpr double kMinImprovement = 1e-9;

struct BestMove {
  Move move{};
  double delta = 0.0;
  bool found = false;
};

// Highest-delta move passing `allowed`; ties keep the first in (type, from, to) order.
template <typename Pred>
BestMove best_move(const ScoredDag& state, Pred&& allowed) {
  BestMove best;
  for (const Move& m : detail::legal_moves(state.dag())) {
    if (!allowed(m)) continue;
    const double d = state.delta(m);
    if (!best.found || d > best.delta) best = {m, d, true};
  }
  return best;
}

}  // namespace

SearchResult hill_climb(const scores::LocalScore& score, const std::vector<std::string>& labels,
                        const StopToken& stop) {
  ScoredDag state(score, LabeledGraph(labels));
  SearchResult res;
  res.trace.push_back(state.total());
  while (true) {
    stop.throw_if_stopped();
    const BestMove best = best_move(state, [](const Move&) { return true; });
    if (!best.found || best.delta <= kMinImprovement) break;
    state.apply(best.move);
    ++res.iterations;
    res.trace.push_back(state.total());
  }
  res.dag = state.dag();
  res.score = state.total();
  return res;
}

SearchResult tabu(const scores::LocalScore& score, const std::vector<std::string>& labels, const TabuOptions& options,
                  const StopToken& stop) {
  ScoredDag state(score, LabeledGraph(labels));
  SearchResult res;
  res.trace.push_back(state.total());
  res.dag = state.dag();
  res.score = state.total();

  std::deque<std::vector<std::uint8_t>> recent;  // last tabu_len visited graphs
  const auto remember = [&](const LabeledGraph& g) {
    if (options.tabu_len == 0) return;
    recent.push_back(g.adjacency());
    if (recent.size() > options.tabu_len) recent.pop_front();
  };
  remember(state.dag());

  std::size_t stagnation = 0;
  while (true) {
    stop.throw_if_stopped();
    const BestMove best = best_move(state, [&](const Move& m) {
      if (recent.empty()) return true;
      LabeledGraph next = state.dag();
      detail::apply_move(next, m);
      return std::find(recent.begin(), recent.end(), next.adjacency()) == recent.end();
    });
    if (!best.found) break;
    if (best.delta <= kMinImprovement) {
      if (stagnation >= options.stagnation_max) break;
      ++stagnation;
    }
    state.apply(best.move);
    ++res.iterations;
    remember(state.dag());
    const double now = state.total();
    res.trace.push_back(now);
    if (now > res.score + kMinImprovement) {
      res.score = now;
      res.dag = state.dag();
      stagnation = 0;
    }
  }
  return res;
}

}  // namespace benchpress::learn
