#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <vector>

#include "benchpress/data_matrix.hpp"
#include "benchpress/graph.hpp"

namespace benchpress::scores {

/// BDeu local log marginal likelihood of `node` given `parents`.
/// Requires categorical data and ess > 0.
double bdeu_local(const DataMatrix& data, std::size_t node, std::span<const std::size_t> parents, double ess);

struct BGeParams {
  double am = 1.0;
  /// Wishart degrees of freedom; nullopt means p + 2.
  std::optional<double> aw;
};

/// BGe local log marginal likelihood with zero prior mean and
/// T0 = am (aw - p - 1) / (am + 1) I.
double bge_local(const DataMatrix& data, std::size_t node, std::span<const std::size_t> parents,
                 const BGeParams& params = {});

/// Insert-only (node, parent set) -> local score map, shareable between threads.
/// Duplicate concurrent computation is allowed; the first stored value wins.
class ScoreCache {
 public:
  explicit ScoreCache(std::uint64_t data_fingerprint) : fingerprint_(data_fingerprint) {}

  std::uint64_t fingerprint() const { return fingerprint_; }
  std::optional<double> find(std::size_t node, std::span<const std::size_t> parents) const;
  double insert(std::size_t node, std::span<const std::size_t> parents, double value);
  std::size_t size() const;

 private:
  using Key = std::vector<std::size_t>;  // node followed by sorted parents
  static Key make_key(std::size_t node, std::span<const std::size_t> parents);

  std::uint64_t fingerprint_;
  mutable std::shared_mutex mutex_;
  std::map<Key, double> table_;
};

/// Decomposable score over DAGs on a fixed dataset.
class LocalScore {
 public:
  virtual ~LocalScore() = default;

  virtual std::size_t num_nodes() const = 0;
  /// Local score; `parents` need not be sorted.
  virtual double local(std::size_t node, std::span<const std::size_t> parents) const = 0;

  /// Sum of local scores over a DAG.
  double total(const LabeledGraph& dag) const;
};

class BDeuScore final : public LocalScore {
 public:
  BDeuScore(const DataMatrix& data, double ess, std::shared_ptr<ScoreCache> cache = nullptr);
  std::size_t num_nodes() const override { return data_->cols(); }
  double local(std::size_t node, std::span<const std::size_t> parents) const override;

 private:
  const DataMatrix* data_;
  double ess_;
  std::shared_ptr<ScoreCache> cache_;
};

class BGeScore final : public LocalScore {
 public:
  BGeScore(const DataMatrix& data, BGeParams params, std::shared_ptr<ScoreCache> cache = nullptr);
  std::size_t num_nodes() const override { return static_cast<std::size_t>(posterior_.rows()); }
  double local(std::size_t node, std::span<const std::size_t> parents) const override;

  /// Evaluates without consulting or filling the cache.
  double compute(std::size_t node, std::span<const std::size_t> parents) const;

 private:
  double log_det(std::span<const std::size_t> idx) const;

  std::size_t n_;
  double am_, aw_, t_;
  Eigen::MatrixXd posterior_;  // T0 + S_N + (N am / (N + am)) xbar xbar^T
  std::shared_ptr<ScoreCache> cache_;
};

}  // namespace benchpress::scores
