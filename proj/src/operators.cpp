#include <cmath>
#include <string>

#include "predassign/error.hpp"
#include "predassign/spectral.hpp"

namespace predassign {

SymmetricOperator adjacency_op(const SparseGraph& g) {
  const SparseGraph* graph = &g;
  return SymmetricOperator(g.num_nodes(), [graph](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    const auto row_ptr = graph->row_ptr();
    const auto col = graph->col_idx();
    for (NodeId v = 0; v < graph->num_nodes(); ++v) {
      double acc = 0.0;
      for (EdgeOffset e = row_ptr[v]; e < row_ptr[v + 1]; ++e) acc += x[col[e]];
      y[v] = acc;
    }
  });
}

SymmetricOperator laplacian_op(const SparseGraph& g, std::optional<double> regularizer) {
  const double tau = regularizer.value_or(g.mean_degree());
  if (!(tau >= 0.0)) throw InvalidParams("laplacian regulariser must be non-negative");
  Eigen::VectorXd scale(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    const double d = g.degree(v) + tau;
    scale[v] = d > 0.0 ? 1.0 / std::sqrt(d) : 0.0;
  }
  const SparseGraph* graph = &g;
  return SymmetricOperator(g.num_nodes(), [graph, scale](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    const auto row_ptr = graph->row_ptr();
    const auto col = graph->col_idx();
    for (NodeId v = 0; v < graph->num_nodes(); ++v) {
      double acc = 0.0;
      for (EdgeOffset e = row_ptr[v]; e < row_ptr[v + 1]; ++e) acc += scale[col[e]] * x[col[e]];
      y[v] = scale[v] * acc;
    }
  });
}

SymmetricOperator basc_op(const RectSlice& slice, std::span<const std::uint32_t> col_degrees) {
  if (col_degrees.size() != slice.num_cols()) {
    throw InvalidParams("basc operator needs one degree per slice column (" +
                        std::to_string(slice.num_cols()) + ")");
  }
  Eigen::VectorXd degrees(static_cast<Eigen::Index>(col_degrees.size()));
  for (std::size_t i = 0; i < col_degrees.size(); ++i) degrees[static_cast<Eigen::Index>(i)] = col_degrees[i];
  const RectSlice* s = &slice;
  return SymmetricOperator(slice.num_cols(), [s, degrees](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    // y = S^T (S x) - D x, one row of S at a time: z_r = <S_r, x>, y += z_r S_r.
    y = -degrees.cwiseProduct(x);
    for (std::size_t r = 0; r < s->num_rows(); ++r) {
      const auto row = s->row(r);
      double z = 0.0;
      for (std::uint32_t c : row) z += x[c];
      if (z == 0.0) continue;
      for (std::uint32_t c : row) y[c] += z;
    }
  });
}

}  // namespace predassign
