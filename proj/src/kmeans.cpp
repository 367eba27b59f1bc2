#include "predassign/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "predassign/error.hpp"
#include "predassign/rng.hpp"

namespace predassign {

namespace {

struct LloydRun {
  std::vector<Label> labels;
  Eigen::MatrixXd centroids;
  double objective = std::numeric_limits<double>::infinity();
  std::vector<double> trace;
};

/// k-means++: first centre uniform, then proportional to squared distance.
Eigen::MatrixXd seed_centroids(const Eigen::MatrixXd& x, Label K, Rng& rng) {
  const Eigen::Index m = x.rows();
  Eigen::MatrixXd c(K, x.cols());
  c.row(0) = x.row(static_cast<Eigen::Index>(uniform_below(rng, m)));
  Eigen::VectorXd d2 = (x.rowwise() - c.row(0)).rowwise().squaredNorm();
  for (Label k = 1; k < K; ++k) {
    const double total = d2.sum();
    Eigen::Index pick = 0;
    if (total > 0.0) {
      const double target = uniform01(rng) * total;
      double acc = 0.0;
      pick = m - 1;
      for (Eigen::Index i = 0; i < m; ++i) {
        acc += d2[i];
        if (acc > target) {
          pick = i;
          break;
        }
      }
      while (d2[pick] == 0.0 && pick > 0) --pick;
    } else {
      pick = static_cast<Eigen::Index>(uniform_below(rng, m));
    }
    c.row(k) = x.row(pick);
    d2 = d2.cwiseMin((x.rowwise() - c.row(k)).rowwise().squaredNorm());
  }
  return c;
}

/// Assigns every row to its nearest centroid; returns per-row squared distance.
Eigen::VectorXd assign(const Eigen::MatrixXd& x, const Eigen::MatrixXd& c, std::vector<Label>& labels) {
  const Eigen::Index m = x.rows();
  Eigen::VectorXd dist(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    double best = std::numeric_limits<double>::infinity();
    Label arg = 0;
    for (Eigen::Index k = 0; k < c.rows(); ++k) {
      const double d = (x.row(i) - c.row(k)).squaredNorm();
      if (d < best) {
        best = d;
        arg = static_cast<Label>(k);
      }
    }
    labels[static_cast<std::size_t>(i)] = arg;
    dist[i] = best;
  }
  return dist;
}

/// Moves the farthest point of a multi-point cluster into each empty cluster.
void refill_empty(const Eigen::MatrixXd& x, Eigen::MatrixXd& c, std::vector<Label>& labels,
                  Eigen::VectorXd& dist) {
  const Label K = static_cast<Label>(c.rows());
  std::vector<std::size_t> size(K, 0);
  for (Label l : labels) ++size[l];
  for (Label k = 0; k < K; ++k) {
    if (size[k] > 0) continue;
    Eigen::Index far = -1;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      if (size[labels[static_cast<std::size_t>(i)]] < 2) continue;
      if (far < 0 || dist[i] > dist[far]) far = i;
    }
    if (far < 0) break;
    --size[labels[static_cast<std::size_t>(far)]];
    ++size[k];
    labels[static_cast<std::size_t>(far)] = k;
    c.row(k) = x.row(far);
    dist[far] = 0.0;
  }
}

Eigen::MatrixXd means(const Eigen::MatrixXd& x, const std::vector<Label>& labels,
                      const Eigen::MatrixXd& previous) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(previous.rows(), x.cols());
  std::vector<std::size_t> size(static_cast<std::size_t>(previous.rows()), 0);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const Label l = labels[static_cast<std::size_t>(i)];
    c.row(l) += x.row(i);
    ++size[l];
  }
  for (Eigen::Index k = 0; k < c.rows(); ++k) {
    if (size[static_cast<std::size_t>(k)] > 0) {
      c.row(k) /= static_cast<double>(size[static_cast<std::size_t>(k)]);
    } else {
      c.row(k) = previous.row(k);
    }
  }
  return c;
}

LloydRun lloyd(const Eigen::MatrixXd& x, Label K, const KMeansOptions& opts, Rng& rng) {
  LloydRun run;
  run.centroids = seed_centroids(x, K, rng);
  run.labels.assign(static_cast<std::size_t>(x.rows()), 0);
  std::vector<Label> previous;
  for (std::size_t it = 0; it < std::max<std::size_t>(opts.max_lloyd, 1); ++it) {
    Eigen::VectorXd dist = assign(x, run.centroids, run.labels);
    refill_empty(x, run.centroids, run.labels, dist);
    const double obj = dist.sum();
    run.trace.push_back(obj);
    const bool stable = run.labels == previous;
    const double change = run.objective - obj;
    run.objective = obj;
    if (stable || (it > 0 && change <= opts.tol * std::max(obj, std::numeric_limits<double>::min()))) {
      break;
    }
    previous = run.labels;
    run.centroids = means(x, run.labels, run.centroids);
  }
  run.centroids = means(x, run.labels, run.centroids);
  run.objective = kmeans_objective(x, run.labels, K);
  return run;
}

}  // namespace

double kmeans_objective(const Eigen::MatrixXd& points, const std::vector<Label>& labels, Label K) {
  const Eigen::MatrixXd c = means(points, labels, Eigen::MatrixXd::Zero(K, points.cols()));
  double obj = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    obj += (points.row(i) - c.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
  }
  return obj;
}

KMeansResult kmeans(const Eigen::MatrixXd& points, Label K, const KMeansOptions& opts,
                    std::uint64_t seed) {
  const auto m = static_cast<std::size_t>(points.rows());
  if (K == 0 || K > m) {
    throw InvalidParams("k-means needs 1 <= K <= number of points (K=" + std::to_string(K) +
                        ", points=" + std::to_string(m) + ")");
  }
  KMeansResult best;
  best.objective = std::numeric_limits<double>::infinity();
  const std::size_t restarts = std::max<std::size_t>(opts.restarts, 1);
  for (std::size_t r = 0; r < restarts; ++r) {
    Rng rng(derive_seed(seed, r));
    LloydRun run = lloyd(points, K, opts, rng);
    if (run.objective < best.objective) {
      best.objective = run.objective;
      best.labels = Membership{std::move(run.labels), K};
      best.centroids = std::move(run.centroids);
      best.trace = std::move(run.trace);
      best.best_restart = r;
    }
  }
  return best;
}

}  // namespace predassign
