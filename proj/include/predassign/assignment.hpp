#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "predassign/graph.hpp"
#include "predassign/metrics.hpp"
#include "predassign/sampling.hpp"
#include "predassign/spectral.hpp"
#include "predassign/subsample.hpp"
#include "predassign/types.hpp"

namespace predassign {

/// Estimated mean connectivity of every S^c node to every estimated
/// community, kept as integer edge counts and community sizes:
/// value(i, k) = counts(i, k) / sizes[k].
class ThetaHat {
 public:
  ThetaHat(std::size_t rows, std::vector<std::uint32_t> sizes);

  std::size_t rows() const noexcept { return rows_; }
  Label K() const noexcept { return static_cast<Label>(sizes_.size()); }
  std::span<const std::uint32_t> sizes() const noexcept { return sizes_; }

  std::uint32_t& count(std::size_t i, Label k) { return counts_[i * sizes_.size() + k]; }
  std::uint32_t count(std::size_t i, Label k) const { return counts_[i * sizes_.size() + k]; }
  std::span<const std::uint32_t> row_counts(std::size_t i) const {
    return {counts_.data() + i * sizes_.size(), sizes_.size()};
  }
  double value(std::size_t i, Label k) const {
    return static_cast<double>(count(i, k)) / sizes_[k];
  }

  /// sum_i counts(i, k)^2, so that ||column k||^2 = column_sq[k] / sizes[k]^2.
  std::vector<std::int64_t> column_square_sums() const;

 private:
  std::size_t rows_;
  std::vector<std::uint32_t> sizes_;
  std::vector<std::uint32_t> counts_;
};

/// Within-subgraph edge counts between estimated communities (each
/// within-community edge counted twice, as in M^T A M).
class OmegaHat {
 public:
  explicit OmegaHat(Label K) : K_(K), counts_(static_cast<std::size_t>(K) * K, 0) {}

  Label K() const noexcept { return K_; }
  std::uint64_t& operator()(Label k, Label l) { return counts_[static_cast<std::size_t>(k) * K_ + l]; }
  std::uint64_t operator()(Label k, Label l) const { return counts_[static_cast<std::size_t>(k) * K_ + l]; }
  std::uint64_t row_sum(Label k) const;

 private:
  Label K_;
  std::vector<std::uint64_t> counts_;
};

/// Row i of the result belongs to s.complement()[i]. `labels_S` is indexed by
/// position in s.selected(). Throws EmptyEstimatedCommunity.
ThetaHat estimate_theta(const SparseGraph& g, const SubsampleIndex& s,
                        std::span<const Label> labels_S, Label K, unsigned threads = 1);

/// Closest community rule over S^c: argmin_k ||a_j - theta_hat(., k)||, with
/// a_j the adjacency of j restricted to S^c. Uses the expansion
/// ||col_k||^2 - 2 <a_j, col_k>, evaluated exactly in integers. Ties go to
/// the lowest k. Result is indexed by position in s.complement().
std::vector<Label> closest_community_assign(const SparseGraph& g, const SubsampleIndex& s,
                                            const ThetaHat& theta_hat, unsigned threads = 1);

OmegaHat estimate_omega(const SparseGraph& g, const SubsampleIndex& s,
                        std::span<const Label> labels_S, Label K);

struct PopularityAssignment {
  std::vector<Label> labels;  // by position in s.complement()
  /// Nodes with no edge into S; they take the largest estimated community.
  std::uint64_t fallback_count = 0;
};

/// Node popularity rule: argmin_k ||N_i - omega_hat(k, .) / rowsum_k|| where
/// N_i holds the shares of i's edges into S per estimated community.
/// Throws DisconnectedEstimatedCommunity on a zero row of omega_hat.
PopularityAssignment node_popularity_assign(const SparseGraph& g, const SubsampleIndex& s,
                                            std::span<const Label> labels_S,
                                            const OmegaHat& omega_hat, unsigned threads = 1);

enum class Model { Sbm, Dcbm };

Model parse_model(std::string_view name);
std::string_view to_string(Model m);

struct PredictiveConfig {
  Model model = Model::Sbm;
  Sampler sampler = Sampler::Srs;
  NodeId m = 0;
  SpectralVariant method = SpectralVariant::Sc;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  SpectralParams spectral;
};

struct PredictiveResult {
  Membership labels;  // all n nodes
  SubsampleIndex subsample;
  StepTimings timings;
  std::uint64_t fallback_count = 0;
  std::uint64_t sampler_filled = 0;
};

/// Clusters an entire graph with one of the spectral variants.
Membership cluster_full_network(const SparseGraph& g, Label K, SpectralVariant method,
                                const SpectralParams& params, std::uint64_t seed);

/// Subsample, cluster the subgraph, estimate the structural link, assign the
/// rest. Timings: sample = step 1, cluster = step 2a, assign = estimation
/// plus step 3.
PredictiveResult predictive_assign(const SparseGraph& g, Label K, const PredictiveConfig& cfg);

}  // namespace predassign
