#include <gtest/gtest.h>

#include "benchpress/error.hpp"
#include "benchpress/metrics.hpp"
#include "oracles.hpp"

using namespace benchpress;

namespace {

LabeledGraph g2(std::initializer_list<std::pair<int, int>> directed, std::initializer_list<std::pair<int, int>> undirected = {},
                std::size_t p = 2) {
  LabeledGraph g(oracle::letters(p));
  for (auto [i, j] : directed) g.add_directed(i, j);
  for (auto [i, j] : undirected) g.add_undirected(i, j);
  return g;
}

}  // namespace

TEST(EdgeScores, Examples) {
  auto s = metrics::compare(g2({{0, 1}}), g2({{0, 1}}));
  EXPECT_EQ(s.tp(), 1.0);
  EXPECT_EQ(s.fp(), 0.0);
  EXPECT_EQ(s.fn, 0);
  EXPECT_EQ(s.shd, 0);

  s = metrics::compare(g2({{0, 1}}), g2({{1, 0}}));
  EXPECT_EQ(s.tp(), 0.5);
  EXPECT_EQ(s.fp(), 0.5);
  EXPECT_EQ(s.fn, 0);
  EXPECT_EQ(s.shd, 1);
  EXPECT_EQ(*metrics::tpr_fprp(s), std::make_pair(0.5, 0.5));

  s = metrics::compare(g2({{0, 1}}), g2({}, {{0, 1}}));
  EXPECT_EQ(s.tp(), 0.5);
  EXPECT_EQ(s.fp(), 0.5);

  s = metrics::compare(g2({{0, 1}, {1, 2}}, {}, 3), g2({{0, 1}}, {}, 3));
  EXPECT_EQ(s.shd, 1);
  EXPECT_EQ(s.fn, 1);
  EXPECT_EQ(s.positives, 2);
}

TEST(EdgeScores, Rates) {
  const auto truth = g2({{0, 1}, {1, 2}}, {}, 3);
  auto s = metrics::compare(truth, truth);
  EXPECT_EQ(*metrics::tpr_fprp(s), std::make_pair(1.0, 0.0));
  s = metrics::compare(truth, LabeledGraph(oracle::letters(3)));
  EXPECT_EQ(*metrics::tpr_fprp(s), std::make_pair(0.0, 0.0));
  EXPECT_EQ(*s.fnr(), 1.0);
  s = metrics::compare(LabeledGraph(oracle::letters(3)), truth);
  EXPECT_FALSE(metrics::tpr_fprp(s).has_value());
  EXPECT_FALSE(s.tpr().has_value());
}

TEST(EdgeScores, LabelMismatch) {
  EXPECT_THROW(metrics::compare(LabeledGraph({"a", "b"}), LabeledGraph({"a", "c"})), InvalidArgument);
  EXPECT_THROW(metrics::shd(LabeledGraph({"a", "b"}), LabeledGraph({"a"})), InvalidArgument);
}

TEST(FBeta, Examples) {
  EXPECT_NEAR(*metrics::f_beta(2, 1, 1), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(*metrics::f_beta(3, 0, 0), 1.0);
  EXPECT_EQ(*metrics::f_beta(0, 2, 0), 0.0);
  EXPECT_FALSE(metrics::f_beta(0, 0, 0).has_value());
  // beta = 2 weights recall: PR = 1/2, RE = 1 -> 5 * 0.5 / (4 * 0.5 + 1).
  EXPECT_NEAR(*metrics::f_beta(1, 1, 0, 2.0), 2.5 / 3.0, 1e-15);
}

TEST(FBeta, F1FormulaOnHalfIntegers) {
  for (int tp2 = 0; tp2 <= 12; ++tp2)
    for (int fp2 = 0; fp2 <= 12; ++fp2)
      for (int fn = 0; fn <= 6; ++fn) {
        const double tp = tp2 / 2.0, fp = fp2 / 2.0;
        const auto f = metrics::f_beta(tp, fp, fn);
        if (tp == 0 && fp == 0 && fn == 0) {
          EXPECT_FALSE(f.has_value());
          continue;
        }
        ASSERT_TRUE(f.has_value());
        EXPECT_NEAR(*f, 2 * tp / (2 * tp + fp + fn), 1e-14);
        EXPECT_GE(*f, 0.0);
        EXPECT_LE(*f, 1.0);
      }
}

TEST(Shd, IdentityAgainstExactRationalOracle) {
  Rng rng(2024);
  int checked = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t p = 2 + rng.below(7);
    const auto truth = oracle::random_mixed(p, rng, 0.2 + 0.6 * rng.uniform());
    const auto est = oracle::random_mixed(p, rng, 0.2 + 0.6 * rng.uniform());
    const auto ex = oracle::edge_counts(truth, est);
    const auto s = metrics::compare(truth, est);
    ASSERT_EQ(oracle::Frac(s.tp2, 2), ex.tp);
    ASSERT_EQ(oracle::Frac(s.fp2, 2), ex.fp);
    ASSERT_EQ(oracle::Frac(s.fn), ex.fn);
    ASSERT_EQ(s.positives, ex.positives);
    ASSERT_EQ(s.shd, ex.shd);
    if (ex.positives == 0) continue;
    // SHD / P == 1 - TP / P + FP / P, i.e. SHD == P - TP + FP.
    const oracle::Frac lhs{ex.shd, 1};
    const oracle::Frac rhs = oracle::Frac{ex.positives, 1} - ex.tp + ex.fp;
    EXPECT_EQ(lhs, rhs) << rep;
    EXPECT_EQ(2 * s.shd, 2 * s.positives - s.tp2 + s.fp2);
    ++checked;
  }
  EXPECT_GT(checked, 900);
}

TEST(Shd, SymmetricAndZeroOnSelf) {
  Rng rng(77);
  for (int rep = 0; rep < 500; ++rep) {
    const std::size_t p = 1 + rng.below(8);
    const auto a = oracle::random_mixed(p, rng), b = oracle::random_mixed(p, rng);
    EXPECT_EQ(metrics::shd(a, b), metrics::shd(b, a));
    EXPECT_EQ(metrics::shd(a, a), 0);
    const auto s = metrics::compare(a, a);
    EXPECT_EQ(s.tp2, 2 * s.positives);
    EXPECT_EQ(s.fp2, 0);
    EXPECT_EQ(s.fn, 0);
  }
}
