#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "predassign/graph.hpp"
#include "predassign/kmeans.hpp"
#include "predassign/types.hpp"

namespace predassign {

/// Matrix-free symmetric linear operator y = B x.
///
/// Operators built from a graph or slice hold a pointer to it; the source must
/// outlive the operator.
class SymmetricOperator {
 public:
  using ApplyFn = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

  SymmetricOperator(std::size_t dim, ApplyFn apply) : dim_(dim), apply_(std::move(apply)) {}

  std::size_t dim() const noexcept { return dim_; }

  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
    y.resize(static_cast<Eigen::Index>(dim_));
    apply_(x, y);
  }
  Eigen::VectorXd operator*(const Eigen::VectorXd& x) const {
    Eigen::VectorXd y;
    apply(x, y);
    return y;
  }

 private:
  std::size_t dim_;
  ApplyFn apply_;
};

/// y = A x.
SymmetricOperator adjacency_op(const SparseGraph& g);

/// y = (D + tau I)^{-1/2} A (D + tau I)^{-1/2} x. Without a regulariser tau is
/// the mean degree. Rows with D + tau = 0 are zero.
SymmetricOperator laplacian_op(const SparseGraph& g, std::optional<double> regularizer = {});

/// y = S^T (S x) - D x for the slice S = A(., cols) and the given degrees of
/// the column nodes. The m x m product is never formed.
SymmetricOperator basc_op(const RectSlice& slice, std::span<const std::uint32_t> col_degrees);

/// Leading eigenpairs by absolute eigenvalue.
struct Embedding {
  Eigen::MatrixXd vectors;  // dim x K, orthonormal columns
  Eigen::VectorXd values;   // |values(0)| >= |values(1)| >= ...
  std::vector<double> residuals;  // ||B v - lambda v|| per pair, recomputed
  double norm_estimate = 0.0;
  std::size_t krylov_dim = 0;
};

struct EigOptions {
  double tol = 1e-8;  // relative to the operator norm estimate
  std::size_t max_iter = 600;  // maximum Krylov basis size
  std::uint64_t seed = 0;
};

/// Lanczos with full reorthogonalisation. Invariant subspaces are left by
/// restarting from a fresh random vector orthogonal to the basis, so repeated
/// eigenvalues are found with their multiplicity.
Embedding topk_eig(const SymmetricOperator& op, std::size_t K, const EigOptions& opts = {});

enum class SpectralVariant { Sc, ScLap, Rsc, RscLap, Basc };

SpectralVariant parse_variant(std::string_view name);
std::string_view to_string(SpectralVariant v);
inline bool uses_full_columns(SpectralVariant v) { return v == SpectralVariant::Basc; }

struct SpectralParams {
  EigOptions eig;
  KMeansOptions kmeans;
  std::optional<double> laplacian_tau;
};

/// Rows scaled to unit Euclidean norm; zero rows stay zero.
Eigen::MatrixXd normalize_rows(const Eigen::MatrixXd& x);

/// Clusters the nodes of `sub` (sc, sc_lap, rsc, rsc_lap).
Membership spectral_cluster(const SparseGraph& sub, Label K, SpectralVariant variant,
                            const SpectralParams& params, std::uint64_t seed);

/// BASC on the slice A(., S) with full-graph degrees of the S nodes.
Membership spectral_cluster_basc(const RectSlice& slice, std::span<const std::uint32_t> col_degrees,
                                 Label K, const SpectralParams& params, std::uint64_t seed);

}  // namespace predassign
