#include "benchpress/citests.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <unordered_map>

#include "benchpress/error.hpp"

namespace benchpress::citests {

double chi_square_sf(double x, double df) {
  if (!(df > 0.0)) throw InvalidArgument("chi-square degrees of freedom must be > 0");
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * df, 0.5 * x);
}

double normal_two_sided(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

namespace {

void check_args(std::size_t i, std::size_t j, std::span<const std::size_t> cond, std::size_t p) {
  if (i >= p || j >= p) throw InvalidArgument("test variable out of range");
  if (i == j) throw InvalidArgument("cannot test a variable against itself");
  for (std::size_t k : cond)
    if (k >= p || k == i || k == j) throw InvalidArgument("invalid conditioning variable");
}

}  // namespace

FisherZ::FisherZ(const DataMatrix& data) : n_(data.rows()) {
  if (data.categorical()) throw InvalidArgument("Fisher-z test needs continuous data");
  const auto& x = data.values;
  const Eigen::MatrixXd centred = x.rowwise() - x.colwise().mean();
  Eigen::MatrixXd cov = centred.transpose() * centred;
  const Eigen::VectorXd sd = cov.diagonal().array().sqrt();
  corr_ = cov;
  for (Eigen::Index a = 0; a < cov.rows(); ++a)
    for (Eigen::Index b = 0; b < cov.cols(); ++b)
      corr_(a, b) = (sd(a) > 0 && sd(b) > 0) ? cov(a, b) / (sd(a) * sd(b)) : (a == b ? 1.0 : 0.0);
}

std::optional<double> FisherZ::partial_correlation(std::size_t i, std::size_t j,
                                                   std::span<const std::size_t> cond) const {
  if (cond.empty()) return std::clamp(corr_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), -1.0, 1.0);
  std::vector<std::size_t> idx{i, j};
  idx.insert(idx.end(), cond.begin(), cond.end());
  const auto k = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd sub(k, k);
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = 0; b < k; ++b)
      sub(a, b) = corr_(static_cast<Eigen::Index>(idx[a]), static_cast<Eigen::Index>(idx[b]));
  Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) return std::nullopt;
  const Eigen::MatrixXd prec = lu.inverse();
  const double r = -prec(0, 1) / std::sqrt(prec(0, 0) * prec(1, 1));
  if (!std::isfinite(r)) return std::nullopt;
  return std::clamp(r, -1.0, 1.0);
}

CITestResult FisherZ::test(std::size_t i, std::size_t j, std::span<const std::size_t> cond, double alpha) const {
  check_args(i, j, cond, num_vars());
  if (n_ <= cond.size() + 3)
    throw InvalidArgument("Fisher-z test needs n > |S| + 3");
  CITestResult res;
  res.df = static_cast<double>(cond.size());
  const auto r = partial_correlation(i, j, cond);
  if (!r) {
    res.degenerate = true;
    res.statistic = std::numeric_limits<double>::infinity();
    res.p_value = 0.0;
    res.independent = false;
    return res;
  }
  const double scale = std::sqrt(static_cast<double>(n_ - cond.size() - 3));
  // atanh(+-1) is infinite, which correctly yields p = 0.
  res.statistic = scale * std::atanh(*r);
  res.p_value = std::isfinite(res.statistic) ? normal_two_sided(res.statistic) : 0.0;
  res.independent = res.p_value > alpha;
  return res;
}

G2Test::G2Test(const DataMatrix& data) : data_(&data) {
  if (!data.categorical()) throw InvalidArgument("G2 test needs categorical data");
}

CITestResult G2Test::test(std::size_t i, std::size_t j, std::span<const std::size_t> cond, double alpha) const {
  const auto& d = *data_;
  check_args(i, j, cond, d.cols());
  const int ri = d.cardinality(i), rj = d.cardinality(j);
  double df = static_cast<double>(ri - 1) * static_cast<double>(rj - 1);
  for (std::size_t k : cond) df *= d.cardinality(k);
  if (!(df > 0.0)) throw InvalidArgument("G2 test has non-positive degrees of freedom");

  // Per S-configuration: joint (i,j) counts.
  const auto cells = static_cast<std::size_t>(ri * rj);
  std::unordered_map<std::uint64_t, std::vector<double>> tables;
  for (std::size_t row = 0; row < d.rows(); ++row) {
    std::uint64_t config = 0, stride = 1;
    for (std::size_t k : cond) {
      config += static_cast<std::uint64_t>(d.level(row, k)) * stride;
      stride *= static_cast<std::uint64_t>(d.cardinality(k));
    }
    auto& t = tables[config];
    if (t.empty()) t.assign(cells, 0.0);
    t[static_cast<std::size_t>(d.level(row, i) * rj + d.level(row, j))] += 1.0;
  }

  double g2 = 0.0;
  std::vector<double> row_sum(static_cast<std::size_t>(ri)), col_sum(static_cast<std::size_t>(rj));
  for (const auto& [config, t] : tables) {
    std::fill(row_sum.begin(), row_sum.end(), 0.0);
    std::fill(col_sum.begin(), col_sum.end(), 0.0);
    double total = 0.0;
    for (int a = 0; a < ri; ++a)
      for (int b = 0; b < rj; ++b) {
        const double o = t[static_cast<std::size_t>(a * rj + b)];
        row_sum[static_cast<std::size_t>(a)] += o;
        col_sum[static_cast<std::size_t>(b)] += o;
        total += o;
      }
    for (int a = 0; a < ri; ++a)
      for (int b = 0; b < rj; ++b) {
        const double o = t[static_cast<std::size_t>(a * rj + b)];
        if (o == 0.0) continue;
        const double e = row_sum[static_cast<std::size_t>(a)] * col_sum[static_cast<std::size_t>(b)] / total;
        g2 += o * std::log(o / e);
      }
  }
  g2 = std::max(0.0, 2.0 * g2);

  CITestResult res;
  res.statistic = g2;
  res.df = df;
  res.p_value = chi_square_sf(g2, df);
  res.independent = res.p_value > alpha;
  return res;
}

}  // namespace benchpress::citests
