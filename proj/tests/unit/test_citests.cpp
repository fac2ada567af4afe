#include <gtest/gtest.h>

#include <cmath>

#include "benchpress/citests.hpp"
#include "benchpress/error.hpp"
#include "benchpress/modelgen.hpp"
#include "oracles.hpp"

using namespace benchpress;

namespace {

DataMatrix discrete(const std::vector<std::vector<int>>& cols, std::vector<int> card) {
  DataMatrix d;
  d.labels = oracle::letters(cols.size());
  d.values.resize(static_cast<Eigen::Index>(cols[0].size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (std::size_t r = 0; r < cols[c].size(); ++r)
      d.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = cols[c][r];
  d.cardinalities = std::move(card);
  return d;
}

DataMatrix continuous(const Eigen::MatrixXd& v) {
  DataMatrix d;
  d.labels = oracle::letters(static_cast<std::size_t>(v.cols()));
  d.values = v;
  return d;
}

}  // namespace

TEST(FisherZ, ZeroCorrelation) {
  Eigen::MatrixXd v(4, 2);
  v << 1, 1, -1, 1, 1, -1, -1, -1;
  const citests::FisherZ fz(continuous(v));
  const auto r = fz.test(0, 1, {}, 0.05);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_TRUE(r.independent);
}

TEST(FisherZ, PerfectCorrelationRejects) {
  Rng rng(1);
  Eigen::MatrixXd v(100, 2);
  for (Eigen::Index r = 0; r < 100; ++r) v(r, 0) = v(r, 1) = rng.normal();
  const auto res = citests::FisherZ(continuous(v)).test(0, 1, {}, 0.05);
  EXPECT_LT(res.p_value, 1e-10);
  EXPECT_FALSE(res.independent);
}

TEST(FisherZ, StatisticMatchesFormula) {
  Rng rng(4);
  Eigen::MatrixXd v(200, 3);
  for (Eigen::Index r = 0; r < 200; ++r) {
    v(r, 2) = rng.normal();
    v(r, 0) = 0.5 * v(r, 2) + rng.normal();
    v(r, 1) = 0.3 * v(r, 0) - 0.4 * v(r, 2) + rng.normal();
  }
  const citests::FisherZ fz(continuous(v));
  // Oracle partial correlation by regressing both variables on the conditioner.
  const Eigen::VectorXd z = v.col(2).array() - v.col(2).mean();
  const auto resid = [&](Eigen::Index c) {
    const Eigen::VectorXd y = v.col(c).array() - v.col(c).mean();
    return Eigen::VectorXd(y - z * (z.dot(y) / z.dot(z)));
  };
  const Eigen::VectorXd ex = resid(0), ey = resid(1);
  const double r = ex.dot(ey) / std::sqrt(ex.dot(ex) * ey.dot(ey));
  const std::vector<std::size_t> s{2};
  EXPECT_NEAR(*fz.partial_correlation(0, 1, s), r, 1e-10);
  const auto res = fz.test(0, 1, s, 0.05);
  const double stat = std::sqrt(200.0 - 1.0 - 3.0) * 0.5 * std::log((1 + r) / (1 - r));
  EXPECT_NEAR(std::abs(res.statistic), std::abs(stat), 1e-8);
  EXPECT_NEAR(res.p_value, std::erfc(std::abs(stat) / std::sqrt(2.0)), 1e-10);
  EXPECT_EQ(res.df, 1.0);
}

TEST(FisherZ, ChainNullRejectionRateNearAlpha) {
  LabeledGraph g(oracle::letters(3));
  g.add_directed(0, 2);
  g.add_directed(2, 1);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(3, 3);
  w(0, 2) = 0.7;
  w(2, 1) = 0.6;
  const auto sem = modelgen::sem_from_weights(g, w);
  const std::vector<std::size_t> s{2};
  int rejected = 0;
  const int reps = 2000;
  for (int k = 0; k < reps; ++k) {
    const auto d = modelgen::sample_iid_gaussian(sem, 5000, false, static_cast<std::uint64_t>(k));
    rejected += !citests::FisherZ(d).test(0, 1, s, 0.05).independent;
  }
  EXPECT_NEAR(static_cast<double>(rejected) / reps, 0.05, 0.02);
}

TEST(FisherZ, SingularSubmatrixIsDegenerate) {
  Rng rng(2);
  Eigen::MatrixXd v(50, 3);
  for (Eigen::Index r = 0; r < 50; ++r) {
    v(r, 0) = rng.normal();
    v(r, 1) = rng.normal();
    v(r, 2) = v(r, 0);
  }
  const std::vector<std::size_t> s{2};
  const auto res = citests::FisherZ(continuous(v)).test(0, 1, s, 0.05);
  EXPECT_TRUE(res.degenerate);
  EXPECT_EQ(res.p_value, 0.0);
  EXPECT_FALSE(res.independent);
}

TEST(FisherZ, Errors) {
  Eigen::MatrixXd v = Eigen::MatrixXd::Random(4, 3);
  const citests::FisherZ fz(continuous(v));
  const std::vector<std::size_t> s{2};
  EXPECT_THROW(fz.test(0, 1, s, 0.05), InvalidArgument);
  EXPECT_THROW(fz.test(0, 0, {}, 0.05), InvalidArgument);
  EXPECT_THROW(citests::FisherZ(discrete({{0, 1}}, {2})), InvalidArgument);
}

TEST(G2, BalancedTableIsZero) {
  std::vector<int> x, y;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int k = 0; k < 25; ++k) {
        x.push_back(a);
        y.push_back(b);
      }
  const auto res = citests::G2Test(discrete({x, y}, {2, 2})).test(0, 1, {}, 0.05);
  EXPECT_NEAR(res.statistic, 0.0, 1e-12);
  EXPECT_NEAR(res.p_value, 1.0, 1e-12);
  EXPECT_EQ(res.df, 1.0);
}

TEST(G2, DegreesOfFreedomWithTernaryConditioner) {
  Rng rng(3);
  std::vector<int> x, y, z;
  for (int r = 0; r < 300; ++r) {
    x.push_back(static_cast<int>(rng.below(2)));
    y.push_back(static_cast<int>(rng.below(2)));
    z.push_back(static_cast<int>(rng.below(3)));
  }
  const std::vector<std::size_t> s{2};
  EXPECT_EQ(citests::G2Test(discrete({x, y, z}, {2, 2, 3})).test(0, 1, s, 0.05).df, 3.0);
}

TEST(G2, DeterministicCopy) {
  std::vector<int> x;
  for (int r = 0; r < 100; ++r) x.push_back(r % 2);
  const auto res = citests::G2Test(discrete({x, x}, {2, 2})).test(0, 1, {}, 0.05);
  EXPECT_NEAR(res.statistic, 2.0 * 100.0 * std::log(2.0), 1e-9);
  EXPECT_LT(res.p_value, 1e-10);
}

TEST(G2, StatisticMatchesDirectSum) {
  Rng rng(6);
  std::vector<int> x, y, z;
  for (int r = 0; r < 400; ++r) {
    z.push_back(static_cast<int>(rng.below(2)));
    x.push_back(rng.uniform() < (z.back() ? 0.8 : 0.3));
    y.push_back(static_cast<int>(rng.below(3)));
    if (rng.uniform() < 0.3) y.back() = x.back();
  }
  const auto d = discrete({x, y, z}, {2, 3, 2});
  double g2 = 0.0;
  for (int c = 0; c < 2; ++c) {
    double n[2][3] = {}, nc = 0;
    for (int r = 0; r < 400; ++r)
      if (z[r] == c) {
        n[x[r]][y[r]] += 1;
        nc += 1;
      }
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 3; ++b) {
        const double ra = n[a][0] + n[a][1] + n[a][2], cb = n[0][b] + n[1][b];
        if (n[a][b] > 0) g2 += 2.0 * n[a][b] * std::log(n[a][b] * nc / (ra * cb));
      }
  }
  const std::vector<std::size_t> s{2};
  const auto res = citests::G2Test(d).test(0, 1, s, 0.05);
  EXPECT_NEAR(res.statistic, g2, 1e-9);
  EXPECT_EQ(res.df, 4.0);
  EXPECT_NEAR(res.p_value, citests::chi_square_sf(g2, 4.0), 1e-15);
}

TEST(ChiSquare, KnownValues) {
  EXPECT_NEAR(citests::chi_square_sf(3.841458820694124, 1.0), 0.05, 1e-12);
  EXPECT_NEAR(citests::chi_square_sf(2.0, 2.0), std::exp(-1.0), 1e-14);
  EXPECT_EQ(citests::chi_square_sf(0.0, 3.0), 1.0);
  EXPECT_THROW(citests::chi_square_sf(1.0, 0.0), InvalidArgument);
  EXPECT_NEAR(citests::normal_two_sided(1.959963984540054), 0.05, 1e-12);
}

TEST(CITests, SymmetricAndInUnitInterval) {
  Rng rng(10);
  for (int rep = 0; rep < 30; ++rep) {
    const auto g = oracle::random_dag(5, rng);
    const auto dc = modelgen::sample_iid_gaussian(modelgen::sample_sem_params(g, 0.25, 1.0, rep), 60, false, rep);
    const auto dd = modelgen::sample_iid_discrete(modelgen::sample_bin_bn(g, 0.1, 0.9, rep), 60, rep);
    const citests::FisherZ fz(dc);
    const citests::G2Test g2(dd);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = i + 1; j < 5; ++j) {
        std::vector<std::size_t> s;
        for (std::size_t k = 0; k < 5; ++k)
          if (k != i && k != j && rng.uniform() < 0.4) s.push_back(k);
        for (const citests::CITest* t : {static_cast<const citests::CITest*>(&fz), static_cast<const citests::CITest*>(&g2)}) {
          const auto a = t->test(i, j, s, 0.05), b = t->test(j, i, s, 0.05);
          EXPECT_GE(a.p_value, 0.0);
          EXPECT_LE(a.p_value, 1.0);
          EXPECT_NEAR(a.p_value, b.p_value, 1e-12);
          EXPECT_EQ(a.independent, a.p_value > 0.05);
        }
      }
  }
}
