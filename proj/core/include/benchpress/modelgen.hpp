#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "benchpress/data_matrix.hpp"
#include "benchpress/graph.hpp"

namespace benchpress::modelgen {

/// Discrete Bayesian network.
///
/// cpts[v] is a flat (rows x cardinality[v]) table. Row index is the mixed-radix
/// parent configuration with parents in ascending node order, first parent
/// varying fastest.
struct DiscreteBN {
  LabeledGraph graph;
  std::vector<int> cardinalities;
  std::vector<std::vector<double>> cpts;

  std::size_t rows(std::size_t v) const { return cpts[v].size() / static_cast<std::size_t>(cardinalities[v]); }
  double prob(std::size_t v, std::size_t row, int level) const {
    return cpts[v][row * static_cast<std::size_t>(cardinalities[v]) + static_cast<std::size_t>(level)];
  }
};

/// Linear Gaussian SEM: Y_i = sum_j weights(i, j) Y_j + Z_i, Z_i ~ N(noise_mean, noise_sd^2).
/// weights(i, j) != 0 only for edges j -> i.
struct GaussianSEM {
  LabeledGraph graph;
  Eigen::MatrixXd weights;
  double noise_mean = 0.0;
  double noise_sd = 1.0;

  /// (I - W)^-1 sigma^2 (I - W)^-T.
  Eigen::MatrixXd implied_covariance() const;
};

/// Binary BN with P(node = 0 | config) ~ Unif[a, b] per parent configuration.
DiscreteBN sample_bin_bn(const LabeledGraph& g, double a, double b, std::uint64_t seed);

/// SEM weights |W_ij| ~ Unif[a, b] with a random sign on every edge; mu = 0, sigma = 1.
GaussianSEM sample_sem_params(const LabeledGraph& g, double a, double b, std::uint64_t seed);

/// SEM from a user weight matrix in adjacency layout (entry (i,j) weights i -> j).
/// The nonzero pattern must match g's edges exactly.
GaussianSEM sem_from_weights(const LabeledGraph& g, const Eigen::MatrixXd& adjacency_layout_weights);

/// n rows by ancestral sampling.
DataMatrix sample_iid_discrete(const DiscreteBN& model, std::size_t n, std::uint64_t seed);

/// n rows by ancestral sampling; optionally centred and scaled to unit (n-1) sd.
DataMatrix sample_iid_gaussian(const GaussianSEM& model, std::size_t n, bool standardized, std::uint64_t seed);

/// Centres each column and divides by its (n-1) sample standard deviation.
/// Throws InvalidArgument on a zero-variance column or n < 2.
void standardize(DataMatrix& data);

}  // namespace benchpress::modelgen
