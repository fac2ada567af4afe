#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "benchpress/graph.hpp"

namespace benchpress::metrics {

/// Edge-level comparison of an estimate against a true graph.
///
/// Half credits make TP and FP half-integers, so they are stored doubled to
/// keep every identity exact.
struct ComparisonScores {
  std::int64_t tp2 = 0;        ///< 2 * TP
  std::int64_t fp2 = 0;        ///< 2 * FP
  std::int64_t fn = 0;         ///< true edges whose pair is absent in the estimate
  std::int64_t positives = 0;  ///< P, edges in the true graph
  std::int64_t shd = 0;

  double tp() const { return static_cast<double>(tp2) / 2.0; }
  double fp() const { return static_cast<double>(fp2) / 2.0; }

  /// TP/P, FP/P and FN/P; nullopt when P = 0.
  std::optional<double> tpr() const;
  std::optional<double> fprp() const;
  std::optional<double> fnr() const;
  /// nullopt when the denominator is zero.
  std::optional<double> precision() const;
  std::optional<double> recall() const;
  std::optional<double> f1() const;
};

/// TP/FP/FN with half credit for adjacent pairs whose orientation differs.
/// Throws InvalidArgument if the label lists differ.
ComparisonScores edge_scores(const LabeledGraph& truth, const LabeledGraph& est);

/// (TPR, FPRp); nullopt when the truth has no edges.
std::optional<std::pair<double, double>> tpr_fprp(const ComparisonScores& s);

/// Per unordered pair: 1 if adjacency differs, else 1 if the edge kinds differ.
std::int64_t shd(const LabeledGraph& truth, const LabeledGraph& est);

/// edge_scores plus shd.
ComparisonScores compare(const LabeledGraph& truth, const LabeledGraph& est);

/// (1 + b^2) TP / ((1 + b^2) TP + b^2 FN + FP); 0 when TP = 0 and FP + FN > 0,
/// nullopt when all three are 0.
std::optional<double> f_beta(double tp, double fp, double fn, double beta = 1.0);

}  // namespace benchpress::metrics
