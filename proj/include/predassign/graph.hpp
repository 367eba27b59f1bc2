#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "predassign/subsample.hpp"
#include "predassign/types.hpp"

namespace predassign {

/// Symmetric CSR adjacency of an undirected simple graph.
///
/// Every undirected edge is stored in both rows, rows are strictly increasing,
/// and there are no self-loops. Immutable after construction.
class SparseGraph {
 public:
  SparseGraph() : row_ptr_(1, 0) {}

  /// Builds from an arbitrary edge list. Self-loops are dropped, both
  /// orientations are inserted, and duplicates collapse.
  static SparseGraph from_edges(NodeId n, std::span<const std::pair<NodeId, NodeId>> edges);

  /// Adopts a CSR that already satisfies the class invariants (checked).
  static SparseGraph from_csr(std::vector<EdgeOffset> row_ptr, std::vector<NodeId> col_idx);

  NodeId num_nodes() const noexcept { return static_cast<NodeId>(row_ptr_.size() - 1); }
  EdgeOffset nnz() const noexcept { return col_idx_.size(); }
  EdgeOffset num_edges() const noexcept { return col_idx_.size() / 2; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {col_idx_.data() + row_ptr_[v], col_idx_.data() + row_ptr_[v + 1]};
  }
  std::uint32_t degree(NodeId v) const {
    return static_cast<std::uint32_t>(row_ptr_[v + 1] - row_ptr_[v]);
  }
  std::vector<std::uint32_t> degrees() const;
  double mean_degree() const;

  bool has_edge(NodeId u, NodeId v) const;

  std::span<const EdgeOffset> row_ptr() const noexcept { return row_ptr_; }
  std::span<const NodeId> col_idx() const noexcept { return col_idx_; }

  /// Full invariant check; returns false on the first violation.
  bool is_valid() const;

  bool operator==(const SparseGraph&) const = default;

 private:
  std::vector<EdgeOffset> row_ptr_;
  std::vector<NodeId> col_idx_;
};

/// A rows x cols restriction of a graph's adjacency with columns reindexed to
/// positions in `cols`. No symmetry requirement.
struct RectSlice {
  std::vector<NodeId> rows;
  std::vector<NodeId> cols;
  std::vector<EdgeOffset> row_ptr;
  std::vector<std::uint32_t> col_idx;

  std::size_t num_rows() const noexcept { return rows.size(); }
  std::size_t num_cols() const noexcept { return cols.size(); }
  EdgeOffset nnz() const noexcept { return col_idx.size(); }

  std::span<const std::uint32_t> row(std::size_t r) const {
    return {col_idx.data() + row_ptr[r], col_idx.data() + row_ptr[r + 1]};
  }
};

/// Parses a whitespace separated "u v" edge list. Lines starting with '#' or
/// '%' are comments, except a "# nodes=N" header which fixes the node count.
SparseGraph read_edge_list(std::istream& in);

/// Writes "# nodes=N" followed by one "u v" line per undirected edge, u < v.
void write_edge_list(const SparseGraph& g, std::ostream& out);

SparseGraph induced_subgraph(const SparseGraph& g, const SubsampleIndex& s);
SparseGraph induced_subgraph(const SparseGraph& g, std::span<const NodeId> nodes);

/// `rows` and `cols` must be sorted, distinct and in range.
RectSlice rect_slice(const SparseGraph& g, std::span<const NodeId> rows,
                     std::span<const NodeId> cols);

/// Global-id indexed group lookup; nodes outside every group hold kNoLabel.
std::vector<Label> make_group_map(NodeId n, std::span<const NodeId> nodes,
                                  std::span<const Label> labels);

/// out[k] = number of neighbours of v whose group is k. `out` must have K
/// entries; it is overwritten.
void group_counts(const SparseGraph& g, NodeId v, std::span<const Label> group_of,
                  std::span<std::uint32_t> out);

std::vector<std::uint32_t> group_counts(const SparseGraph& g, NodeId v,
                                        std::span<const Label> group_of, Label K);

/// Sorted node ids of the largest connected component (lowest id wins ties).
std::vector<NodeId> largest_component(const SparseGraph& g);

/// Relabels node v as perm[v].
SparseGraph permute_nodes(const SparseGraph& g, std::span<const NodeId> perm);

/// Edge density of g: edges / (n choose 2). Zero for n < 2.
double edge_density(const SparseGraph& g);

}  // namespace predassign
