#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace heavytail {

struct GroundTruth {
  Eigen::VectorXd w_opt;
  Eigen::MatrixXd sigma;  // population second moment E[x x^T]
  std::optional<double> noise_variance;
};

// Rows of X are covariate vectors; y has one response per row.
struct Dataset {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  std::optional<GroundTruth> truth;

  std::size_t n() const { return static_cast<std::size_t>(X.rows()); }
  std::size_t d() const { return static_cast<std::size_t>(X.cols()); }

  // Throws std::invalid_argument on shape mismatch, d == 0 or non-finite entries.
  void validate() const;
  // Rows in the given order.
  Dataset subset(const std::vector<std::size_t>& rows) const;
};

// CSV with header x1,...,xd,y. Ground truth is not serialized.
void write_dataset_csv(std::ostream& out, const Dataset& data);
Dataset read_dataset_csv(std::istream& in);

// Dense matrix CSV without header.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_csv(std::istream& in);

}  // namespace heavytail
