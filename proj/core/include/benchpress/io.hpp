#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "benchpress/data_matrix.hpp"
#include "benchpress/graph.hpp"
#include "benchpress/trajectory.hpp"

namespace benchpress::io {

// Formats: comma separated, header row of labels, LF line endings, no quoting.
//
//   data      labels / [cardinalities] / one row per observation
//   adjmat    labels / p rows of 0,1
//   trajectory  index,score,added,removed with edge lists like [a-b;c->d]

/// Shortest decimal that round-trips; integral values print bare ("3").
std::string format_number(double v);
/// Like format_number but integral values keep a fractional part ("3.0").
std::string format_real(double v);
/// Parses a whole cell as a double; nullopt if it is not a number.
std::optional<double> parse_number(std::string_view cell);

std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temp file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

struct DataReadOptions {
  /// Force categorical (true) or continuous (false) instead of auto-detecting.
  std::optional<bool> discrete;
};

/// Second row counts as a cardinality row iff every cell is an integer >= 2
/// and every later cell of that column is an integer below it.
DataMatrix parse_data(std::string_view text, const DataReadOptions& options = {});
DataMatrix read_data(const std::filesystem::path& path, const DataReadOptions& options = {});
std::string format_data(const DataMatrix& data);
void write_data(const DataMatrix& data, const std::filesystem::path& path);

LabeledGraph parse_adjmat(std::string_view text);
LabeledGraph read_adjmat(const std::filesystem::path& path);
std::string format_adjmat(const LabeledGraph& g);
void write_adjmat(const LabeledGraph& g, const std::filesystem::path& path);

/// Labelled real matrix in adjacency layout (fixed SEM weights).
struct LabeledMatrix {
  std::vector<std::string> labels;
  Eigen::MatrixXd values;
};
LabeledMatrix read_labeled_matrix(const std::filesystem::path& path);

/// `labels_hint`, when given, must agree with the labels encoded in the
/// header rows and is used when they cannot encode them (p < 2).
GraphTrajectory parse_trajectory(std::string_view text, const std::optional<std::vector<std::string>>& labels_hint = {});
GraphTrajectory read_trajectory(const std::filesystem::path& path,
                                const std::optional<std::vector<std::string>>& labels_hint = {});
std::string format_trajectory(const GraphTrajectory& traj);
void write_trajectory(const GraphTrajectory& traj, const std::filesystem::path& path);

}  // namespace benchpress::io
