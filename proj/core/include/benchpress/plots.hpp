#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "benchpress/evalreport.hpp"

// Minimal SVG charts. Output depends only on the input values, so equal
// inputs give identical bytes.

namespace benchpress::eval {

struct RocPlotOptions {
  std::string title = "ROC";
  bool errorbar = true;    ///< vertical TPR 5%-95% bars
  bool errorbarh = false;  ///< horizontal FPRp 5%-95% bars
  bool path = true;        ///< connect points of the same id
  bool text = false;       ///< annotate points with their parameter value
  bool scatter = false;    ///< draw the per-seed points underneath
  bool show_seed = false;  ///< annotate per-seed points with their seed
};

std::string roc_svg(const std::vector<RocPoint>& points, const std::vector<BenchmarkRow>& rows,
                    const RocPlotOptions& options);

std::string series_svg(const std::vector<SeriesPoint>& series, const std::string& title, const std::string& ylabel);

/// Stem plot of r_0..r_lags.
std::string autocorr_svg(const std::vector<double>& acf, const std::string& title);

/// Grey-scale grid of values in [0, 1], rows = sources.
std::string heatmap_svg(const std::vector<std::string>& labels, const Eigen::MatrixXd& m, const std::string& title);

}  // namespace benchpress::eval
