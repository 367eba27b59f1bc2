#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "predassign/types.hpp"

namespace predassign {

struct KMeansOptions {
  std::size_t restarts = 10;
  std::size_t max_lloyd = 100;
  double tol = 1e-6;  // relative objective change
};

struct KMeansResult {
  Membership labels;
  Eigen::MatrixXd centroids;  // K x d
  double objective = 0.0;
  /// Objective after every assignment step of the winning restart.
  std::vector<double> trace;
  std::size_t best_restart = 0;
};

/// Best of `restarts` k-means++ seeded Lloyd runs on the rows of `points`.
/// Nearest-centroid ties go to the lowest index. An empty cluster takes the
/// point farthest from its centroid (from a cluster with more than one point).
KMeansResult kmeans(const Eigen::MatrixXd& points, Label K, const KMeansOptions& opts,
                    std::uint64_t seed);

/// Sum of squared distances of each row to the centroid of its label.
double kmeans_objective(const Eigen::MatrixXd& points, const std::vector<Label>& labels, Label K);

}  // namespace predassign
