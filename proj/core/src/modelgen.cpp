#include "benchpress/modelgen.hpp"

#include <cmath>

#include "benchpress/error.hpp"
#include "benchpress/rng.hpp"

namespace benchpress::modelgen {

namespace {

void require_dag(const LabeledGraph& g, const char* who) {
  if (!is_dag(g)) throw InvalidArgument(std::string(who) + " requires a DAG");
}

}  // namespace

Eigen::MatrixXd GaussianSEM::implied_covariance() const {
  const auto p = weights.rows();
  const Eigen::MatrixXd inv = (Eigen::MatrixXd::Identity(p, p) - weights).inverse();
  return noise_sd * noise_sd * inv * inv.transpose();
}

DiscreteBN sample_bin_bn(const LabeledGraph& g, double a, double b, std::uint64_t seed) {
  require_dag(g, "bin_bn");
  if (!(a >= 0.0 && a < b && b <= 1.0)) throw InvalidArgument("bin_bn: need 0 <= min < max <= 1");
  Rng rng(seed);
  DiscreteBN bn{g, std::vector<int>(g.size(), 2), {}};
  bn.cpts.resize(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    const std::size_t rows = std::size_t{1} << g.parents(v).size();
    auto& table = bn.cpts[v];
    table.resize(2 * rows);
    for (std::size_t r = 0; r < rows; ++r) {
      const double q = rng.uniform(a, b);
      table[2 * r] = q;
      table[2 * r + 1] = 1.0 - q;
    }
  }
  return bn;
}

GaussianSEM sample_sem_params(const LabeledGraph& g, double a, double b, std::uint64_t seed) {
  require_dag(g, "sem_params");
  if (!(a >= 0.0 && a < b)) throw InvalidArgument("sem_params: need 0 <= min < max");
  Rng rng(seed);
  const auto p = static_cast<Eigen::Index>(g.size());
  GaussianSEM sem{g, Eigen::MatrixXd::Zero(p, p), 0.0, 1.0};
  for (std::size_t child = 0; child < g.size(); ++child) {
    for (std::size_t parent : g.parents(child)) {
      const double magnitude = rng.uniform(a, b);
      const double sign = rng.coin() ? 1.0 : -1.0;
      sem.weights(static_cast<Eigen::Index>(child), static_cast<Eigen::Index>(parent)) = sign * magnitude;
    }
  }
  return sem;
}

GaussianSEM sem_from_weights(const LabeledGraph& g, const Eigen::MatrixXd& m) {
  require_dag(g, "fixed SEM parameters");
  const auto p = static_cast<Eigen::Index>(g.size());
  if (m.rows() != p || m.cols() != p) throw InvalidArgument("SEM weight matrix size does not match the graph");
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      if ((m(i, j) != 0.0) != g.directed(static_cast<std::size_t>(i), static_cast<std::size_t>(j)))
        throw InvalidArgument("SEM weight matrix pattern differs from the graph at (" + g.label(i) + ", " +
                              g.label(j) + ")");
  return GaussianSEM{g, m.transpose(), 0.0, 1.0};
}

DataMatrix sample_iid_discrete(const DiscreteBN& model, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("iid: sample size must be >= 1");
  const auto& g = model.graph;
  const auto order = topological_order(g);
  std::vector<std::vector<std::size_t>> parents(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) parents[v] = g.parents(v);

  Rng rng(seed);
  DataMatrix out{g.labels(), Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(g.size())),
                 model.cardinalities};
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t v : order) {
      std::size_t row = 0, stride = 1;
      for (std::size_t pa : parents[v]) {
        row += static_cast<std::size_t>(out.level(r, pa)) * stride;
        stride *= static_cast<std::size_t>(model.cardinalities[pa]);
      }
      const int card = model.cardinalities[v];
      const double u = rng.uniform();
      double acc = 0.0;
      int level = card - 1;
      for (int k = 0; k < card; ++k) {
        acc += model.prob(v, row, k);
        if (u < acc) {
          level = k;
          break;
        }
      }
      out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(v)) = level;
    }
  }
  return out;
}

void standardize(DataMatrix& data) {
  const auto n = data.values.rows();
  if (n < 2) throw InvalidArgument("standardization needs at least 2 rows");
  for (Eigen::Index c = 0; c < data.values.cols(); ++c) {
    auto col = data.values.col(c);
    const double mean = col.mean();
    col.array() -= mean;
    const double sd = std::sqrt(col.squaredNorm() / static_cast<double>(n - 1));
    if (!(sd > 0.0))
      throw InvalidArgument("cannot standardize zero-variance column '" + data.labels[static_cast<std::size_t>(c)] + "'");
    col /= sd;
  }
}

DataMatrix sample_iid_gaussian(const GaussianSEM& model, std::size_t n, bool standardized, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("iid: sample size must be >= 1");
  if (standardized && n < 2) throw InvalidArgument("iid: standardized data need n >= 2");
  const auto& g = model.graph;
  const auto order = topological_order(g);
  std::vector<std::vector<std::size_t>> parents(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) parents[v] = g.parents(v);

  Rng rng(seed);
  DataMatrix out{g.labels(), Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(g.size())),
                 std::nullopt};
  for (std::size_t r = 0; r < n; ++r) {
    const auto ri = static_cast<Eigen::Index>(r);
    for (std::size_t v : order) {
      const auto vi = static_cast<Eigen::Index>(v);
      double y = model.noise_mean + model.noise_sd * rng.normal();
      for (std::size_t pa : parents[v]) y += model.weights(vi, static_cast<Eigen::Index>(pa)) * out.values(ri, static_cast<Eigen::Index>(pa));
      out.values(ri, vi) = y;
    }
  }
  if (standardized) standardize(out);
  return out;
}

}  // namespace benchpress::modelgen
