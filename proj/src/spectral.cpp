#include "predassign/spectral.hpp"

#include <string>

#include "predassign/error.hpp"
#include "predassign/rng.hpp"

namespace predassign {

SpectralVariant parse_variant(std::string_view name) {
  if (name == "sc") return SpectralVariant::Sc;
  if (name == "sc_lap") return SpectralVariant::ScLap;
  if (name == "rsc") return SpectralVariant::Rsc;
  if (name == "rsc_lap") return SpectralVariant::RscLap;
  if (name == "basc") return SpectralVariant::Basc;
  throw InvalidParams("unknown method '" + std::string(name) +
                      "' (expected sc, sc_lap, rsc, rsc_lap or basc)");
}

std::string_view to_string(SpectralVariant v) {
  switch (v) {
    case SpectralVariant::Sc: return "sc";
    case SpectralVariant::ScLap: return "sc_lap";
    case SpectralVariant::Rsc: return "rsc";
    case SpectralVariant::RscLap: return "rsc_lap";
    case SpectralVariant::Basc: return "basc";
  }
  return "?";
}

Eigen::MatrixXd normalize_rows(const Eigen::MatrixXd& x) {
  Eigen::MatrixXd out = x;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    if (norm > 0.0) out.row(i) /= norm;
  }
  return out;
}

namespace {

Membership embed_and_cluster(const SymmetricOperator& op, Label K, bool row_normalize,
                             const SpectralParams& params, std::uint64_t seed) {
  if (op.dim() < K) {
    throw InvalidParams("cannot find " + std::to_string(K) + " communities among " +
                        std::to_string(op.dim()) + " nodes");
  }
  EigOptions eig = params.eig;
  eig.seed = derive_seed(seed, 0);
  const Embedding emb = topk_eig(op, K, eig);
  const Eigen::MatrixXd points = row_normalize ? normalize_rows(emb.vectors) : emb.vectors;
  return kmeans(points, K, params.kmeans, derive_seed(seed, 1)).labels;
}

}  // namespace

Membership spectral_cluster(const SparseGraph& sub, Label K, SpectralVariant variant,
                            const SpectralParams& params, std::uint64_t seed) {
  switch (variant) {
    case SpectralVariant::Sc:
      return embed_and_cluster(adjacency_op(sub), K, false, params, seed);
    case SpectralVariant::Rsc:
      return embed_and_cluster(adjacency_op(sub), K, true, params, seed);
    case SpectralVariant::ScLap:
      return embed_and_cluster(laplacian_op(sub, params.laplacian_tau), K, false, params, seed);
    case SpectralVariant::RscLap:
      return embed_and_cluster(laplacian_op(sub, params.laplacian_tau), K, true, params, seed);
    case SpectralVariant::Basc:
      break;
  }
  throw InvalidParams("basc clusters a column slice; use spectral_cluster_basc");
}

Membership spectral_cluster_basc(const RectSlice& slice, std::span<const std::uint32_t> col_degrees,
                                 Label K, const SpectralParams& params, std::uint64_t seed) {
  return embed_and_cluster(basc_op(slice, col_degrees), K, false, params, seed);
}

}  // namespace predassign
