#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>

#include "benchpress/data_matrix.hpp"

namespace benchpress::citests {

struct CITestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  bool independent = true;    ///< p_value > alpha
  double df = 0.0;            ///< G2 degrees of freedom; conditioning-set size for Fisher-z
  bool degenerate = false;    ///< singular correlation submatrix (reported as dependent)
};

/// Conditional independence test on a fixed dataset.
class CITest {
 public:
  virtual ~CITest() = default;
  virtual std::size_t num_vars() const = 0;
  virtual CITestResult test(std::size_t i, std::size_t j, std::span<const std::size_t> cond, double alpha) const = 0;
};

/// Fisher z-transform test of the partial correlation of (i, j) given S.
class FisherZ final : public CITest {
 public:
  explicit FisherZ(const DataMatrix& data);
  std::size_t num_vars() const override { return static_cast<std::size_t>(corr_.rows()); }
  CITestResult test(std::size_t i, std::size_t j, std::span<const std::size_t> cond, double alpha) const override;

  /// Partial correlation by inverting the correlation submatrix of {i, j} u S.
  /// nullopt if that submatrix is singular.
  std::optional<double> partial_correlation(std::size_t i, std::size_t j, std::span<const std::size_t> cond) const;

 private:
  std::size_t n_;
  Eigen::MatrixXd corr_;
};

/// Likelihood-ratio G2 test on the (i, j, S-configuration) contingency table.
class G2Test final : public CITest {
 public:
  explicit G2Test(const DataMatrix& data);
  std::size_t num_vars() const override { return data_->cols(); }
  CITestResult test(std::size_t i, std::size_t j, std::span<const std::size_t> cond, double alpha) const override;

 private:
  const DataMatrix* data_;
};

/// Upper tail P(X > x) of a chi-square distribution with df degrees of freedom.
double chi_square_sf(double x, double df);

/// Two-sided standard normal tail probability 2 (1 - Phi(|z|)).
double normal_two_sided(double z);

}  // namespace benchpress::citests
