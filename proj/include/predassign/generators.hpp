#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "predassign/graph.hpp"
#include "predassign/types.hpp"

namespace predassign {

/// Symmetric K x K matrix of link probabilities.
class BlockMatrix {
 public:
  BlockMatrix() = default;
  /// `entries` is row-major; must be symmetric with values in [0, 1].
  BlockMatrix(Label K, std::vector<double> entries);

  static BlockMatrix constant(Label K, double p);

  Label K() const noexcept { return K_; }
  double operator()(Label r, Label s) const { return entries_[static_cast<std::size_t>(r) * K_ + s]; }
  std::span<const double> entries() const noexcept { return entries_; }

  BlockMatrix scaled(double factor) const;

 private:
  Label K_ = 0;
  std::vector<double> entries_;
};

/// Homophily design with expected density alpha under balanced communities:
/// diagonal alpha*K*h/(h+K-1), off-diagonal alpha*K/(h+K-1).
BlockMatrix sbm_block_matrix(Label K, double alpha, double h);

/// Degree-corrected design: diagonal alpha, off-diagonal alpha/h. h may be +inf.
BlockMatrix dcbm_block_matrix(Label K, double alpha, double h);

/// Community sizes by largest-remainder rounding of n * proportions.
/// Ties in the remainder go to the lower community index.
std::vector<NodeId> block_sizes(NodeId n, std::span<const double> proportions);

std::vector<double> balanced_proportions(Label K);

/// Block-contiguous labels for the given community sizes.
Membership contiguous_membership(std::span<const NodeId> sizes);

struct SbmSample {
  SparseGraph graph;
  Membership membership;
};

SbmSample sample_sbm(NodeId n, const BlockMatrix& omega, std::span<const double> proportions,
                     std::uint64_t seed);

/// Distribution of the raw degree parameters before per-community
/// normalisation. Beta(a, b) by default; Constant forces theta = 1.
struct ThetaDistribution {
  enum class Kind { Beta, Constant };
  Kind kind = Kind::Beta;
  double a = 1.0;
  double b = 5.0;

  static ThetaDistribution beta(double a, double b) { return {Kind::Beta, a, b}; }
  static ThetaDistribution constant() { return {Kind::Constant, 1.0, 1.0}; }
};

struct DcbmSample {
  SparseGraph graph;
  Membership membership;
  std::vector<double> theta;
  /// Scalar s with P_ij = min(1, s * theta_i * theta_j * omega0(c_i, c_j)).
  double scale = 0.0;
  /// Number of pairs whose probability was capped at 1.
  std::uint64_t capped_pairs = 0;
};

/// theta_i drawn i.i.d., renormalised so every community's maximum is 1, then
/// s chosen so the uncapped expected edge count equals
/// density * n(n-1)/2. Probabilities above 1 are capped.
DcbmSample sample_dcbm(NodeId n, const BlockMatrix& omega0, std::span<const double> proportions,
                       double density, ThetaDistribution theta_dist, std::uint64_t seed);

/// Draws theta for the given membership and renormalises per community.
std::vector<double> draw_theta(const Membership& membership, ThetaDistribution dist,
                               std::uint64_t seed);

/// Closed-form s for the DCBM expected-density constraint (pre-cap).
double dcbm_scale(const Membership& membership, std::span<const double> theta,
                  const BlockMatrix& omega0, double density);

}  // namespace predassign
