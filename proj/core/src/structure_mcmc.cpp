#include <cmath>

#include "benchpress/learners.hpp"
#include "benchpress/rng.hpp"
#include "dag_moves.hpp"

namespace benchpress::learn {

namespace {

void record_move(TrajectoryRecord& rec, const detail::Move& m) {
  using detail::MoveType;
  switch (m.type) {
    case MoveType::Add: rec.added.push_back({m.from, m.to, true}); break;
    case MoveType::Delete: rec.removed.push_back({m.from, m.to, true}); break;
    case MoveType::Reverse:
      rec.removed.push_back({m.from, m.to, true});
      rec.added.push_back({m.to, m.from, true});
      break;
  }
}

}  // namespace

GraphTrajectory structure_mcmc(const scores::LocalScore& score, const std::vector<std::string>& labels,
                               std::size_t iterations, std::uint64_t seed, const StopToken& stop) {
  Rng rng(seed);
  detail::ScoredDag state(score, LabeledGraph(labels));
  GraphTrajectory traj{labels, {}};
  traj.records.push_back(TrajectoryRecord{0, state.total(), {}, {}});

  auto moves = detail::legal_moves(state.dag());
  bool last_accepted = true;
  for (std::size_t it = 1; it <= iterations; ++it) {
    if ((it & 0x3ff) == 0) stop.throw_if_stopped();
    last_accepted = false;
    if (moves.empty()) continue;
    const detail::Move m = moves[rng.below(moves.size())];
    const double delta = state.delta(m);

    LabeledGraph proposed = state.dag();
    detail::apply_move(proposed, m);
    const double forward = static_cast<double>(moves.size());
    auto proposed_moves = detail::legal_moves(proposed);
    const double backward = static_cast<double>(proposed_moves.size());

    // Accept with min(1, exp(delta) |N(G)| / |N(G')|).
    const double log_ratio = delta + std::log(forward) - std::log(backward);
    if (log_ratio < 0.0 && std::log(rng.uniform()) >= log_ratio) continue;

    state.apply(m);
    moves = std::move(proposed_moves);
    TrajectoryRecord rec{static_cast<std::int64_t>(it), state.total(), {}, {}};
    record_move(rec, m);
    traj.records.push_back(std::move(rec));
    last_accepted = true;
  }
  if (iterations > 0 && !last_accepted)
    traj.records.push_back(TrajectoryRecord{static_cast<std::int64_t>(iterations), state.total(), {}, {}});
  return traj;
}

}  // namespace benchpress::learn
