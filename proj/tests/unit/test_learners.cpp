#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <thread>

#include "benchpress/io.hpp"
#include "benchpress/learners.hpp"
#include "benchpress/modelgen.hpp"
#include "benchpress/netgen.hpp"
#include "oracles.hpp"

using namespace benchpress;
namespace fs = std::filesystem;

namespace {

const fs::path kPlugins = fs::path(BENCHPRESS_FIXTURES) / "plugins";

DataMatrix gaussian_from(const LabeledGraph& g, const std::vector<std::tuple<int, int, double>>& edges, std::size_t n,
                         std::uint64_t seed) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(g.size()));
  for (auto [i, j, v] : edges) w(i, j) = v;
  return modelgen::sample_iid_gaussian(modelgen::sem_from_weights(g, w), n, false, seed);
}

LabeledGraph with_edges(std::size_t p, std::initializer_list<std::pair<int, int>> directed,
                        std::initializer_list<std::pair<int, int>> undirected = {}) {
  LabeledGraph g(oracle::letters(p));
  for (auto [i, j] : directed) g.add_directed(i, j);
  for (auto [i, j] : undirected) g.add_undirected(i, j);
  return g;
}

DataMatrix coupled_pair(std::size_t n, double agree, std::uint64_t seed) {
  Rng rng(seed);
  DataMatrix d;
  d.labels = {"x", "y"};
  d.values.resize(static_cast<Eigen::Index>(n), 2);
  for (Eigen::Index r = 0; r < d.values.rows(); ++r) {
    const int x = static_cast<int>(rng.below(2));
    d.values(r, 0) = x;
    d.values(r, 1) = rng.uniform() < agree ? x : 1 - x;
  }
  d.cardinalities = std::vector<int>{2, 2};
  return d;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("bp-learn-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

}  // namespace

TEST(Pc, RecoversCollider) {
  const auto g = with_edges(3, {{0, 2}, {1, 2}});
  const auto d = gaussian_from(g, {{0, 2, 0.8}, {1, 2, 0.8}}, 50000, 1);
  const citests::FisherZ t(d);
  const auto r = learn::pc(t, d.labels, {0.01, std::nullopt});
  EXPECT_EQ(r.graph, g);
  EXPECT_GT(r.ntests, 0u);
}

TEST(Pc, ChainGivesUndirectedSkeleton) {
  const auto g = with_edges(3, {{0, 2}, {2, 1}});
  const auto d = gaussian_from(g, {{0, 2, 0.8}, {2, 1, 0.8}}, 50000, 2);
  const auto r = learn::pc(citests::FisherZ(d), d.labels, {0.01, std::nullopt});
  EXPECT_EQ(r.graph, with_edges(3, {}, {{0, 2}, {1, 2}}));
}

TEST(Pc, IndependentColumnsMostlyEmpty) {
  int empty = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto d = modelgen::sample_iid_gaussian(
        modelgen::GaussianSEM{LabeledGraph(oracle::letters(4)), Eigen::MatrixXd::Zero(4, 4)}, 200, false, seed);
    const auto r = learn::pc(citests::FisherZ(d), d.labels, {0.01, std::nullopt});
    if (r.graph.num_edges() == 0) EXPECT_EQ(r.ntests, 6u);
    empty += r.graph.num_edges() == 0;
  }
  // (1 - 0.01)^6 ~ 0.94
  EXPECT_GE(empty, 42);
}

TEST(Pc, DiscreteAndCapped) {
  const auto g = netgen::gen_rand_dag({8, 2.0, std::nullopt, "er", 3});
  const auto d = modelgen::sample_iid_discrete(modelgen::sample_bin_bn(g, 0.1, 0.9, 3), 2000, 4);
  const auto capped = learn::pc(citests::G2Test(d), d.labels, {0.05, 0});
  const auto full = learn::pc(citests::G2Test(d), d.labels, {0.05, std::nullopt});
  EXPECT_TRUE(directed_part_acyclic(full.graph));
  EXPECT_LE(capped.ntests, full.ntests);
  // Level 0 tests each pair once from each endpoint that still sees it.
  EXPECT_EQ(capped.ntests, 28u + capped.graph.num_edges());
}

TEST(Pc, InvariantToColumnPermutation) {
  const auto g = netgen::gen_rand_dag({7, 3.0, std::nullopt, "er", 5});
  const auto d = modelgen::sample_iid_gaussian(modelgen::sample_sem_params(g, 0.25, 1.0, 5), 500, false, 6);
  const auto base = learn::pc(citests::FisherZ(d), d.labels, {0.05, std::nullopt});
  Rng rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<std::size_t> perm(7);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t k = 6; k > 0; --k) std::swap(perm[k], perm[rng.below(k + 1)]);
    DataMatrix pd;
    pd.values.resize(d.values.rows(), 7);
    for (std::size_t c = 0; c < 7; ++c) {
      pd.labels.push_back(d.labels[perm[c]]);
      pd.values.col(static_cast<Eigen::Index>(c)) = d.values.col(static_cast<Eigen::Index>(perm[c]));
    }
    const auto r = learn::pc(citests::FisherZ(pd), pd.labels, {0.05, std::nullopt});
    // Map the permuted estimate back onto the original column order.
    LabeledGraph back(d.labels);
    for (std::size_t a = 0; a < 7; ++a)
      for (std::size_t b = 0; b < 7; ++b) {
        if (r.graph.undirected(a, b)) back.add_undirected(perm[a], perm[b]);
        else if (r.graph.directed(a, b)) back.add_directed(perm[a], perm[b]);
      }
    EXPECT_EQ(back, base.graph) << rep;
    EXPECT_EQ(r.ntests, base.ntests);
  }
}

TEST(Pc, Cancellation) {
  const auto d = gaussian_from(with_edges(3, {{0, 2}}), {{0, 2, 0.5}}, 100, 1);
  std::atomic<bool> flag{true};
  EXPECT_THROW(learn::pc(citests::FisherZ(d), d.labels, {}, learn::StopToken(std::nullopt, &flag)), learn::Cancelled);
}

TEST(HillClimb, SingleColumnIsEmpty) {
  DataMatrix d = coupled_pair(50, 0.5, 1);
  d.labels = {"x"};
  d.values.conservativeResize(Eigen::NoChange, 1);
  d.cardinalities = std::vector<int>{2};
  const auto r = learn::hill_climb(scores::BDeuScore(d, 1.0), d.labels);
  EXPECT_EQ(r.dag, LabeledGraph({"x"}));
}

TEST(HillClimb, CoupledPairGetsOneEdge) {
  const auto d = coupled_pair(5000, 0.95, 2);
  const scores::BDeuScore s(d, 1.0);
  // Oracle: direct comparison of the empty and one-edge factorisations.
  const std::vector<std::size_t> x{0};
  ASSERT_GT(s.local(0, {}) + s.local(1, x), s.local(0, {}) + s.local(1, {}));
  const auto r = learn::hill_climb(s, d.labels);
  EXPECT_EQ(r.dag.num_edges(), 1u);
  EXPECT_TRUE(is_dag(r.dag));
}

TEST(HillClimb, TraceStrictlyIncreasingAndScoreMatchesTotal) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = netgen::gen_rand_dag({8, 2.0, std::nullopt, "er", seed});
    const auto dd = modelgen::sample_iid_discrete(modelgen::sample_bin_bn(g, 0.1, 0.9, seed), 1000, seed);
    const auto dc = modelgen::sample_iid_gaussian(modelgen::sample_sem_params(g, 0.25, 1.0, seed), 300, true, seed);
    const scores::BDeuScore bdeu(dd, 1.0);
    const scores::BGeScore bge(dc, {});
    for (const scores::LocalScore* s : {static_cast<const scores::LocalScore*>(&bdeu), static_cast<const scores::LocalScore*>(&bge)}) {
      const auto r = learn::hill_climb(*s, dd.labels);
      ASSERT_FALSE(r.trace.empty());
      EXPECT_NEAR(r.trace.front(), s->total(LabeledGraph(dd.labels)), 1e-9);
      for (std::size_t k = 1; k < r.trace.size(); ++k) EXPECT_GT(r.trace[k], r.trace[k - 1]);
      EXPECT_TRUE(is_dag(r.dag));
      EXPECT_NEAR(r.score, s->total(r.dag), 1e-8);
      EXPECT_NEAR(r.trace.back(), r.score, 1e-8);
    }
  }
}

TEST(Tabu, DegenerateParametersMatchHillClimb) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = netgen::gen_rand_dag({7, 2.0, std::nullopt, "er", seed});
    const auto d = modelgen::sample_iid_discrete(modelgen::sample_bin_bn(g, 0.1, 0.9, seed), 800, seed);
    const scores::BDeuScore s(d, 1.0);
    const auto hc = learn::hill_climb(s, d.labels);
    const auto tb = learn::tabu(s, d.labels, {0, 0});
    EXPECT_EQ(tb.dag, hc.dag);
    EXPECT_EQ(tb.score, hc.score);
  }
}

TEST(Tabu, NeverWorseThanHillClimb) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = netgen::gen_rand_dag({8, 2.0, std::nullopt, "er", seed});
    const auto d = modelgen::sample_iid_discrete(modelgen::sample_bin_bn(g, 0.1, 0.9, seed), 500, seed);
    const scores::BDeuScore s(d, 1.0);
    const auto tb = learn::tabu(s, d.labels, {10, 10});
    EXPECT_GE(tb.score, learn::hill_climb(s, d.labels).score - 1e-9);
    EXPECT_NEAR(tb.score, s.total(tb.dag), 1e-8);
    EXPECT_TRUE(is_dag(tb.dag));
  }
}

TEST(Tabu, FindsExhaustiveOptimumOnFourNodes) {
  const auto dags = oracle::all_dags(4);
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const auto g = oracle::random_dag(4, rng, 0.5);
    const auto d = modelgen::sample_iid_discrete(modelgen::sample_bin_bn(g, 0.1, 0.9, seed), 200, seed + 1000);
    const scores::BDeuScore s(d, 1.0);
    double best = -INFINITY;
    for (const auto& h : dags) best = std::max(best, s.total(h));
    hits += learn::tabu(s, d.labels, {10, 10}).score >= best - 1e-9;
  }
  EXPECT_GE(hits, 45);
}

TEST(StructureMcmc, ZeroIterations) {
  const auto d = coupled_pair(100, 0.9, 1);
  const scores::BDeuScore s(d, 1.0);
  const auto t = learn::structure_mcmc(s, d.labels, 0, 1);
  ASSERT_EQ(t.records.size(), 1u);
  EXPECT_EQ(t.records[0].index, 0);
  EXPECT_TRUE(t.records[0].added.empty());
  EXPECT_NEAR(t.records[0].score, s.total(LabeledGraph(d.labels)), 1e-12);
}

TEST(StructureMcmc, RecordedScoresMatchRecomputation) {
  const auto g = netgen::gen_rand_dag({6, 2.0, std::nullopt, "er", 4});
  const auto d = modelgen::sample_iid_gaussian(modelgen::sample_sem_params(g, 0.25, 1.0, 4), 200, true, 4);
  const scores::BGeScore s(d, {});
  const auto t = learn::structure_mcmc(s, d.labels, 3000, 9);
  EXPECT_NO_THROW(t.validate());
  EXPECT_EQ(t.last_index(), 3000);
  for (const auto& rec : t.records) {
    const auto h = graph_at(t, rec.index);
    ASSERT_TRUE(is_dag(h));
    EXPECT_NEAR(rec.score, s.total(h), 1e-9);
  }
  EXPECT_EQ(learn::structure_mcmc(s, d.labels, 3000, 9), t);
}

TEST(StructureMcmc, VisitFrequenciesMatchExactPosterior) {
  const auto d = coupled_pair(30, 0.7, 3);
  const scores::BDeuScore s(d, 1.0);
  const LabeledGraph empty(d.labels);
  LabeledGraph xy(d.labels), yx(d.labels);
  xy.add_directed(0, 1);
  yx.add_directed(1, 0);
  const std::vector<LabeledGraph> states{empty, xy, yx};
  std::vector<double> w;
  for (const auto& h : states) w.push_back(s.total(h));
  const double top = *std::max_element(w.begin(), w.end());
  double z = 0.0;
  for (double& v : w) z += (v = std::exp(v - top));
  for (double& v : w) v /= z;

  const std::int64_t m = 200000, burn = m / 10;
  const auto t = learn::structure_mcmc(s, d.labels, static_cast<std::size_t>(m), 11);
  std::vector<double> freq(3, 0.0);
  for_each_segment(t, burn, m, [&](std::int64_t a, std::int64_t b, const LabeledGraph& h, double) {
    for (std::size_t k = 0; k < 3; ++k)
      if (h == states[k]) freq[k] += static_cast<double>(b - a + 1);
  });
  const double total = static_cast<double>(m - burn + 1);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(freq[k] / total, w[k], 0.02) << k;
  EXPECT_NEAR((freq[1] + freq[2]) / total, w[1] + w[2], 0.02);
}

TEST(WithTimeout, CompletesWithoutLimit) {
  const auto r = learn::with_timeout(std::nullopt, [](const learn::StopToken&) {
    return learn::LearnerOutput{LabeledGraph({"a"}), 3};
  });
  EXPECT_EQ(r.status, learn::Status::Ok);
  ASSERT_TRUE(r.estimate.has_value());
  EXPECT_EQ(*r.ntests, 3);
}

TEST(WithTimeout, CooperativeCancellation) {
  const auto start = std::chrono::steady_clock::now();
  const auto r = learn::with_timeout(0.2, [](const learn::StopToken& stop) -> learn::LearnerOutput {
    while (true) {
      stop.throw_if_stopped();
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
  });
  EXPECT_EQ(r.status, learn::Status::TimedOut);
  EXPECT_FALSE(r.estimate.has_value());
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 2.0);
}

TEST(WithTimeout, ExceptionsBecomeFailures) {
  const auto r = learn::with_timeout(std::nullopt, [](const learn::StopToken&) -> learn::LearnerOutput {
    throw InvalidArgument("boom");
  });
  EXPECT_EQ(r.status, learn::Status::Failed);
  EXPECT_NE(r.diagnostic.find("boom"), std::string::npos);
  EXPECT_THROW(learn::with_timeout(0.0, [](const learn::StopToken&) { return learn::LearnerOutput{LabeledGraph({"a"}), {}}; }),
               InvalidArgument);
}

TEST(External, EchoPlugin) {
  TempDir tmp("echo");
  const auto r = learn::run_external({"sh " + (kPlugins / "echo_fixed.sh").string() + " {adjmat} {time} {ntests}", {}, {}},
                                     tmp.path / "unused.csv", tmp.path, 1);
  ASSERT_EQ(r.status, learn::Status::Ok) << r.diagnostic;
  LabeledGraph ab({"a", "b"});
  ab.add_directed(0, 1);
  EXPECT_EQ(std::get<LabeledGraph>(*r.estimate), ab);
  EXPECT_EQ(r.wall_time, 0.1);
  EXPECT_FALSE(r.ntests.has_value());
}

TEST(External, MalformedAdjmatFails) {
  TempDir tmp("bad");
  const auto r = learn::run_external({"sh " + (kPlugins / "malformed.sh").string() + " {adjmat} {time} {ntests}", {}, {}},
                                     tmp.path / "unused.csv", tmp.path, 1);
  EXPECT_EQ(r.status, learn::Status::Failed);
  EXPECT_FALSE(r.estimate.has_value());
  EXPECT_NE(r.diagnostic.find("adjmat"), std::string::npos) << r.diagnostic;
}

TEST(External, NonzeroExitAndMissingFiles) {
  TempDir tmp("exit");
  auto r = learn::run_external({"echo oops >&2; exit 3", {}, {}}, tmp.path / "d.csv", tmp.path, 1);
  EXPECT_EQ(r.status, learn::Status::Failed);
  EXPECT_NE(r.diagnostic.find("status 3"), std::string::npos);
  EXPECT_NE(r.diagnostic.find("oops"), std::string::npos);
  r = learn::run_external({"true", {}, {}}, tmp.path / "d.csv", tmp.path, 1);
  EXPECT_EQ(r.status, learn::Status::Failed);
  EXPECT_NE(r.diagnostic.find("did not write"), std::string::npos);
  EXPECT_THROW(learn::expand_command({"run {nope}", {}, {}}, "d", "a", "t", "n", 1), InvalidArgument);
}

TEST(External, RandomSymmetricTemplate) {
  TempDir tmp("sym");
  const auto g = netgen::gen_rand_dag({12, 2.0, std::nullopt, "er", 1});
  io::write_data(modelgen::sample_iid_gaussian(modelgen::sample_sem_params(g, 0.25, 1.0, 1), 20, false, 1),
                 tmp.path / "data.csv");
  learn::ExternalSpec spec{"python3 " + (kPlugins / "random_symmetric.py").string() +
                               " {data} {adjmat} {time} {ntests} {replicate} {myparam1}",
                           {{"myparam1", "somevalue"}},
                           {}};
  EXPECT_NE(learn::expand_command(spec, "d", "a", "t", "n", 7).find("somevalue"), std::string::npos);
  for (std::uint64_t rep = 1; rep <= 3; ++rep) {
    const auto r = learn::run_external(spec, tmp.path / "data.csv", tmp.path / "out", rep);
    ASSERT_EQ(r.status, learn::Status::Ok) << r.diagnostic;
    const auto& est = std::get<LabeledGraph>(*r.estimate);
    EXPECT_EQ(est.labels(), g.labels());
    for (std::size_t i = 0; i < 12; ++i)
      for (std::size_t j = 0; j < 12; ++j) {
        EXPECT_FALSE(est.directed(i, j));
        if (i == j) EXPECT_FALSE(est.adjacent(i, j));
      }
  }
}

TEST(External, TimeoutKillsPlugin) {
  TempDir tmp("sleep");
  const auto start = std::chrono::steady_clock::now();
  const auto r = learn::run_external({"sh " + (kPlugins / "sleeper.sh").string() + " {adjmat} {time} {ntests}", {}, 1.0},
                                     tmp.path / "d.csv", tmp.path, 1);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_EQ(r.status, learn::Status::TimedOut);
  EXPECT_FALSE(r.estimate.has_value());
  EXPECT_LT(wall, 2.0);
}
