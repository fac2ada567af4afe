#include <gtest/gtest.h>

#include <filesystem>

#include "benchpress/error.hpp"
#include "benchpress/io.hpp"
#include "benchpress/modelgen.hpp"
#include "benchpress/netgen.hpp"
#include "oracles.hpp"

using namespace benchpress;
namespace fs = std::filesystem;

namespace {

const fs::path kFormats = fs::path(BENCHPRESS_FIXTURES) / "formats";

TrajectoryEdge und(std::size_t a, std::size_t b) { return {a, b, false}; }

}  // namespace

TEST(Data, CategoricalExample) {
  const auto d = io::read_data(kFormats / "data_categorical.csv");
  EXPECT_EQ(d.labels, oracle::letters(4));
  ASSERT_TRUE(d.categorical());
  EXPECT_EQ(*d.cardinalities, (std::vector<int>{2, 3, 2, 2}));
  ASSERT_EQ(d.rows(), 2u);
  Eigen::MatrixXd want(2, 4);
  want << 1, 2, 0, 1, 0, 1, 1, 1;
  EXPECT_EQ(d.values, want);
  EXPECT_EQ(io::format_data(d), io::read_file(kFormats / "data_categorical.csv"));
}

TEST(Data, ContinuousExample) {
  const auto d = io::read_data(kFormats / "data_continuous.csv");
  EXPECT_FALSE(d.categorical());
  Eigen::MatrixXd want(2, 4);
  want << 0.2, 2.3, 5.3, 0.5, 3.2, 1.5, 2.5, 1.2;
  EXPECT_EQ(d.values, want);
  EXPECT_EQ(io::format_data(d), io::read_file(kFormats / "data_continuous.csv"));
}

TEST(Data, HeaderOnlyAndOverrides) {
  const auto d = io::parse_data("a,b,c\n");
  EXPECT_EQ(d.rows(), 0u);
  EXPECT_EQ(d.cols(), 3u);
  EXPECT_FALSE(d.categorical());
  // An integer second row is data when the override says so.
  const auto c = io::parse_data("a,b\n2,3\n1,2\n", {false});
  EXPECT_FALSE(c.categorical());
  EXPECT_EQ(c.rows(), 2u);
  EXPECT_TRUE(io::parse_data("a,b\n2,3\n1,2\n").categorical());
  EXPECT_FALSE(io::parse_data("a,b\n2,3\n1,5\n").categorical());
}

TEST(Data, Errors) {
  EXPECT_THROW(io::parse_data("a,b\n1\n"), ParseError);
  EXPECT_THROW(io::parse_data("a,b\n1,x\n"), ParseError);
  EXPECT_THROW(io::parse_data("a,b\n2,2\n0,2\n", {true}), ParseError);
}

TEST(Data, RoundTripGenerated) {
  const auto g = netgen::gen_rand_dag({6, 2.0, std::nullopt, "er", 1});
  const auto c = modelgen::sample_iid_gaussian(modelgen::sample_sem_params(g, 0.25, 1.0, 1), 30, true, 2);
  const auto back = io::parse_data(io::format_data(c));
  EXPECT_EQ(back.values, c.values);
  EXPECT_EQ(back.labels, c.labels);
  const auto d = modelgen::sample_iid_discrete(modelgen::sample_bin_bn(g, 0.1, 0.9, 1), 30, 2);
  const auto dback = io::parse_data(io::format_data(d));
  EXPECT_EQ(dback.fingerprint(), d.fingerprint());
}

TEST(Adjmat, FormatExamples) {
  const auto u = io::read_adjmat(kFormats / "adjmat_undirected.csv");
  EXPECT_TRUE(u.undirected(0, 1) && u.undirected(0, 2) && u.undirected(2, 3));
  EXPECT_EQ(u.num_edges(), 3u);
  EXPECT_EQ(io::format_adjmat(u), io::read_file(kFormats / "adjmat_undirected.csv"));

  const auto d = io::read_adjmat(kFormats / "adjmat_directed.csv");
  EXPECT_TRUE(is_dag(d));
  EXPECT_TRUE(d.directed(0, 1) && d.directed(0, 2) && d.directed(2, 3));
  EXPECT_EQ(io::format_adjmat(d), io::read_file(kFormats / "adjmat_directed.csv"));
}

TEST(Adjmat, Errors) {
  EXPECT_THROW(io::parse_adjmat("a,b\n0,1\n"), ParseError);
  EXPECT_THROW(io::parse_adjmat("a,b\n1,0\n0,0\n"), ParseError);
  EXPECT_THROW(io::parse_adjmat("a,b\n0,2\n0,0\n"), ParseError);
  EXPECT_THROW(io::parse_adjmat("a,b\n0,1,0\n0,0\n"), ParseError);
}

TEST(Adjmat, RoundTripRandomGraphs) {
  Rng rng(1);
  for (int rep = 0; rep < 500; ++rep) {
    const auto g = oracle::random_mixed(1 + rng.below(8), rng);
    const std::string text = io::format_adjmat(g);
    const auto back = io::parse_adjmat(text);
    ASSERT_EQ(back, g);
    ASSERT_EQ(io::format_adjmat(back), text);
  }
}

TEST(Trajectory, FormatExamplesParsesAndReplays) {
  const auto t = io::read_trajectory(kFormats / "trajectory.csv");
  EXPECT_EQ(t.labels, oracle::letters(4));
  ASSERT_EQ(t.records.size(), 3u);
  EXPECT_EQ(t.records[0].index, 0);
  EXPECT_EQ(t.records[0].score, -2325.52);
  EXPECT_EQ(t.records[1].index, 34);
  EXPECT_EQ(t.records[1].score, -2311.94);
  EXPECT_EQ(t.records[2].index, 89);
  EXPECT_EQ(t.records[2].score, -2310.81);
  EXPECT_EQ(t.records[0].added, (std::vector<TrajectoryEdge>{und(1, 2), und(0, 3)}));
  EXPECT_EQ(t.records[1].removed, (std::vector<TrajectoryEdge>{und(1, 2)}));

  // E_i = {b-c, a-d} for i <= 33, {a-d} for 34..88, {c-d, a-d} at 89.
  const auto at = [&](std::int64_t i) { return graph_at(t, i); };
  for (std::int64_t i : {0, 33}) {
    EXPECT_TRUE(at(i).undirected(1, 2) && at(i).undirected(0, 3));
    EXPECT_EQ(at(i).num_edges(), 2u);
  }
  for (std::int64_t i : {34, 88}) {
    EXPECT_TRUE(at(i).undirected(0, 3));
    EXPECT_EQ(at(i).num_edges(), 1u);
  }
  EXPECT_TRUE(at(89).undirected(2, 3) && at(89).undirected(0, 3));
  EXPECT_EQ(at(89).num_edges(), 2u);
  EXPECT_EQ(io::format_trajectory(t), io::read_file(kFormats / "trajectory.csv"));
}

TEST(Trajectory, DirectedRoundTrip) {
  GraphTrajectory t{oracle::letters(3), {{0, -10.5, {}, {}}, {3, -9.0, {{0, 1, true}}, {}}, {7, -8.25, {{2, 1, true}}, {{0, 1, true}}}}};
  const std::string text = io::format_trajectory(t);
  EXPECT_NE(text.find("[a->b]"), std::string::npos);
  const auto back = io::parse_trajectory(text);
  EXPECT_EQ(back, t);
  EXPECT_EQ(io::format_trajectory(back), text);
}

TEST(Trajectory, Violations) {
  const std::string head = "index,score,added,removed\n-2,0.0,[a-b;a-c],[]\n-1,0.0,[],[a-b;a-c]\n";
  EXPECT_THROW(io::parse_trajectory(head + "0,-1.0,[],[]\n5,-1.0,[],[b-c]\n"), ParseError);
  EXPECT_THROW(io::parse_trajectory(head + "0,-1.0,[a-b],[]\n5,-1.0,[a-b],[]\n"), ParseError);
  EXPECT_THROW(io::parse_trajectory(head + "0,-1.0,[],[]\n5,-1.0,[],[]\n5,-1.0,[],[]\n"), ParseError);
  EXPECT_THROW(io::parse_trajectory(head + "0,-1.0,[a=>b],[]\n"), ParseError);
  EXPECT_THROW(io::parse_trajectory(head + "0,-1.0,[a-z],[]\n"), ParseError);
  EXPECT_NO_THROW(io::parse_trajectory(head + "0,-1.0,[],[]\n"));
}

TEST(Trajectory, SingleNodeNeedsLabelHint) {
  GraphTrajectory t{{"x"}, {{0, -3.0, {}, {}}}};
  const std::string text = io::format_trajectory(t);
  EXPECT_EQ(io::parse_trajectory(text, std::vector<std::string>{"x"}), t);
}

TEST(Numbers, Formatting) {
  EXPECT_EQ(io::format_number(3.0), "3");
  EXPECT_EQ(io::format_number(0.1), "0.1");
  EXPECT_EQ(io::format_real(3.0), "3.0");
  EXPECT_EQ(io::format_real(-2325.52), "-2325.52");
  EXPECT_EQ(*io::parse_number("1e-3"), 0.001);
  EXPECT_FALSE(io::parse_number("1.0x").has_value());
  Rng rng(3);
  for (int k = 0; k < 1000; ++k) {
    const double v = rng.normal() * std::pow(10.0, static_cast<double>(rng.below(20)) - 10.0);
    EXPECT_EQ(*io::parse_number(io::format_number(v)), v);
  }
}
