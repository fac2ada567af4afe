#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace benchpress {

/// n x p observations, continuous or categorical.
///
/// Categorical levels are stored 0-based as exact integers in `values`;
/// `cardinalities` is present iff the data are categorical.
struct DataMatrix {
  std::vector<std::string> labels;
  Eigen::MatrixXd values;  // rows = observations
  std::optional<std::vector<int>> cardinalities;

  std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t cols() const { return labels.size(); }
  bool categorical() const { return cardinalities.has_value(); }
  int level(std::size_t r, std::size_t c) const { return static_cast<int>(values(r, c)); }
  int cardinality(std::size_t c) const { return (*cardinalities)[c]; }

  /// Throws InvalidArgument if the shape or category ranges are inconsistent.
  void validate() const;

  /// Stable content fingerprint (labels, cardinalities, values bit patterns).
  std::uint64_t fingerprint() const;
};

}  // namespace benchpress
