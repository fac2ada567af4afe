#include "benchpress/metrics.hpp"

#include "benchpress/error.hpp"

namespace benchpress::metrics {

namespace {

void check_labels(const LabeledGraph& truth, const LabeledGraph& est) {
  if (truth.labels() != est.labels()) throw InvalidArgument("compared graphs have different node labels");
}

std::optional<double> ratio(double num, double den) {
  if (den == 0.0) return std::nullopt;
  return num / den;
}

}  // namespace

std::optional<double> ComparisonScores::tpr() const { return ratio(tp(), static_cast<double>(positives)); }
std::optional<double> ComparisonScores::fprp() const { return ratio(fp(), static_cast<double>(positives)); }
std::optional<double> ComparisonScores::fnr() const {
  return ratio(static_cast<double>(fn), static_cast<double>(positives));
}
std::optional<double> ComparisonScores::precision() const { return ratio(tp(), tp() + fp()); }
std::optional<double> ComparisonScores::recall() const { return ratio(tp(), tp() + static_cast<double>(fn)); }
std::optional<double> ComparisonScores::f1() const { return f_beta(tp(), fp(), static_cast<double>(fn)); }

ComparisonScores edge_scores(const LabeledGraph& truth, const LabeledGraph& est) {
  check_labels(truth, est);
  ComparisonScores s;
  const std::size_t p = truth.size();
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i + 1; j < p; ++j) {
      const bool in_truth = truth.adjacent(i, j), in_est = est.adjacent(i, j);
      if (in_truth) ++s.positives;
      if (in_truth && !in_est) ++s.fn;
      if (!in_est) continue;
      if (!in_truth) {
        s.fp2 += 2;
      } else if (truth.entry(i, j) == est.entry(i, j) && truth.entry(j, i) == est.entry(j, i)) {
        s.tp2 += 2;
      } else {
        s.tp2 += 1;
        s.fp2 += 1;
      }
    }
  }
  return s;
}

std::optional<std::pair<double, double>> tpr_fprp(const ComparisonScores& s) {
  if (s.positives == 0) return std::nullopt;
  return std::pair{*s.tpr(), *s.fprp()};
}

std::int64_t shd(const LabeledGraph& truth, const LabeledGraph& est) {
  check_labels(truth, est);
  std::int64_t d = 0;
  const std::size_t p = truth.size();
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j)
      if (truth.entry(i, j) != est.entry(i, j) || truth.entry(j, i) != est.entry(j, i)) ++d;
  return d;
}

ComparisonScores compare(const LabeledGraph& truth, const LabeledGraph& est) {
  ComparisonScores s = edge_scores(truth, est);
  s.shd = shd(truth, est);
  return s;
}

std::optional<double> f_beta(double tp, double fp, double fn, double beta) {
  if (beta < 0.0) throw InvalidArgument("beta must be nonnegative");
  if (tp == 0.0 && fp == 0.0 && fn == 0.0) return std::nullopt;
  const double b2 = beta * beta;
  return (1.0 + b2) * tp / ((1.0 + b2) * tp + b2 * fn + fp);
}

}  // namespace benchpress::metrics
