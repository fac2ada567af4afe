#include "benchpress/scores.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <unordered_map>

#include "benchpress/error.hpp"

namespace benchpress::scores {

namespace {

void check_parents(std::size_t node, std::span<const std::size_t> parents, std::size_t p) {
  if (node >= p) throw InvalidArgument("node index out of range");
  for (std::size_t pa : parents) {
    if (pa == node) throw InvalidArgument("node listed among its own parents");
    if (pa >= p) throw InvalidArgument("parent index out of range");
  }
}

}  // namespace

double bdeu_local(const DataMatrix& data, std::size_t node, std::span<const std::size_t> parents, double ess) {
  if (!data.categorical()) throw InvalidArgument("BDeu needs categorical data");
  if (!(ess > 0.0)) throw InvalidArgument("BDeu equivalent sample size must be > 0");
  check_parents(node, parents, data.cols());

  const int r = data.cardinality(node);
  double q = 1.0;
  for (std::size_t pa : parents) q *= data.cardinality(pa);
  const double alpha_j = ess / q;
  const double alpha_jk = ess / (q * r);

  // Only observed parent configurations contribute; unobserved ones give 0.
  std::unordered_map<std::uint64_t, std::vector<int>> counts;
  const std::size_t n = data.rows();
  for (std::size_t row = 0; row < n; ++row) {
    std::uint64_t config = 0, stride = 1;
    for (std::size_t pa : parents) {
      config += static_cast<std::uint64_t>(data.level(row, pa)) * stride;
      stride *= static_cast<std::uint64_t>(data.cardinality(pa));
    }
    auto& c = counts[config];
    if (c.empty()) c.assign(static_cast<std::size_t>(r), 0);
    ++c[static_cast<std::size_t>(data.level(row, node))];
  }

  const double lg_aj = std::lgamma(alpha_j);
  const double lg_ajk = std::lgamma(alpha_jk);
  double score = 0.0;
  for (const auto& [config, c] : counts) {
    int nj = 0;
    for (int x : c) {
      nj += x;
      if (x > 0) score += std::lgamma(alpha_jk + x) - lg_ajk;
    }
    score += lg_aj - std::lgamma(alpha_j + nj);
  }
  return score;
}

double bge_local(const DataMatrix& data, std::size_t node, std::span<const std::size_t> parents,
                 const BGeParams& params) {
  return BGeScore(data, params).compute(node, parents);
}

ScoreCache::Key ScoreCache::make_key(std::size_t node, std::span<const std::size_t> parents) {
  Key key;
  key.reserve(parents.size() + 1);
  key.push_back(node);
  key.insert(key.end(), parents.begin(), parents.end());
  std::sort(key.begin() + 1, key.end());
  return key;
}

std::optional<double> ScoreCache::find(std::size_t node, std::span<const std::size_t> parents) const {
  const Key key = make_key(node, parents);
  std::shared_lock lock(mutex_);
  auto it = table_.find(key);
  if (it == table_.end()) return std::nullopt;
  return it->second;
}

double ScoreCache::insert(std::size_t node, std::span<const std::size_t> parents, double value) {
  Key key = make_key(node, parents);
  std::unique_lock lock(mutex_);
  return table_.emplace(std::move(key), value).first->second;
}

std::size_t ScoreCache::size() const {
  std::shared_lock lock(mutex_);
  return table_.size();
}

double LocalScore::total(const LabeledGraph& dag) const {
  double s = 0.0;
  for (std::size_t v = 0; v < dag.size(); ++v) {
    const auto pa = dag.parents(v);
    s += local(v, pa);
  }
  return s;
}

namespace {

// Sorted copy so that evaluation order (and thus floating point rounding)
// does not depend on the caller's parent order.
std::vector<std::size_t> sorted(std::span<const std::size_t> parents) {
  std::vector<std::size_t> out(parents.begin(), parents.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

BDeuScore::BDeuScore(const DataMatrix& data, double ess, std::shared_ptr<ScoreCache> cache)
    : data_(&data), ess_(ess), cache_(std::move(cache)) {
  if (!data.categorical()) throw InvalidArgument("BDeu needs categorical data");
  if (!(ess > 0.0)) throw InvalidArgument("BDeu equivalent sample size must be > 0");
}

double BDeuScore::local(std::size_t node, std::span<const std::size_t> parents) const {
  if (cache_) {
    if (auto hit = cache_->find(node, parents)) return *hit;
  }
  const auto pa = sorted(parents);
  const double value = bdeu_local(*data_, node, pa, ess_);
  return cache_ ? cache_->insert(node, pa, value) : value;
}

BGeScore::BGeScore(const DataMatrix& data, BGeParams params, std::shared_ptr<ScoreCache> cache)
    : n_(data.rows()), am_(params.am), cache_(std::move(cache)) {
  if (data.categorical()) throw InvalidArgument("BGe needs continuous data");
  const auto p = static_cast<double>(data.cols());
  aw_ = params.aw.value_or(p + 2.0);
  if (!(am_ > 0.0)) throw InvalidArgument("BGe am must be > 0");
  if (!(aw_ > p - 1.0)) throw InvalidArgument("BGe aw must exceed p - 1");
  if (n_ < 1) throw InvalidArgument("BGe needs at least one observation");
  t_ = am_ * (aw_ - p - 1.0) / (am_ + 1.0);
  if (!(t_ > 0.0)) throw InvalidArgument("BGe prior scale am (aw - p - 1) / (am + 1) must be > 0");

  const auto& x = data.values;
  const double n = static_cast<double>(n_);
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Eigen::MatrixXd centred = x.rowwise() - mean;
  const Eigen::Index pp = x.cols();
  posterior_ = t_ * Eigen::MatrixXd::Identity(pp, pp) + centred.transpose() * centred +
               (n * am_ / (n + am_)) * mean.transpose() * mean;
}

double BGeScore::log_det(std::span<const std::size_t> idx) const {
  if (idx.empty()) return 0.0;
  const auto k = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd sub(k, k);
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = 0; b < k; ++b)
      sub(a, b) = posterior_(static_cast<Eigen::Index>(idx[a]), static_cast<Eigen::Index>(idx[b]));
  Eigen::LLT<Eigen::MatrixXd> llt(sub);
  if (llt.info() != Eigen::Success) throw InvalidArgument("BGe posterior scale matrix is singular");
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

double BGeScore::compute(std::size_t node, std::span<const std::size_t> parents) const {
  const std::size_t p = num_nodes();
  check_parents(node, parents, p);
  const auto pa = sorted(parents);
  std::vector<std::size_t> family(pa);
  family.push_back(node);

  const double n = static_cast<double>(n_);
  const double l = static_cast<double>(pa.size());
  const double dp = static_cast<double>(p);
  const double a = aw_ - dp + l + 1.0;  // Wishart dof of the family marginal

  return 0.5 * std::log(am_ / (n + am_)) + std::lgamma(0.5 * (n + a)) - std::lgamma(0.5 * a) -
         0.5 * n * std::log(std::numbers::pi) + 0.5 * (aw_ - dp + 2.0 * l + 1.0) * std::log(t_) +
         0.5 * (n + a - 1.0) * log_det(pa) - 0.5 * (n + a) * log_det(family);
}

double BGeScore::local(std::size_t node, std::span<const std::size_t> parents) const {
  if (cache_) {
    if (auto hit = cache_->find(node, parents)) return *hit;
  }
  const double value = compute(node, parents);
  return cache_ ? cache_->insert(node, parents, value) : value;
}

}  // namespace benchpress::scores
