#include "predassign/graph.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "predassign/error.hpp"

namespace predassign {

std::vector<std::size_t> Membership::counts() const {
  std::vector<std::size_t> c(K, 0);
  for (Label l : labels) ++c.at(l);
  return c;
}

void Membership::validate() const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= K) {
      throw InvalidParams("label " + std::to_string(labels[i]) + " of node " +
                          std::to_string(i) + " is not below K=" + std::to_string(K));
    }
  }
}

SubsampleIndex::SubsampleIndex(NodeId n, std::vector<NodeId> selected)
    : n_(n), selected_(std::move(selected)), position_(n), in_selected_(n, 0) {
  std::sort(selected_.begin(), selected_.end());
  for (std::size_t i = 0; i < selected_.size(); ++i) {
    const NodeId v = selected_[i];
    if (v >= n) throw IndexError("subsample node " + std::to_string(v) + " out of range");
    if (in_selected_[v]) throw InvalidParams("duplicate subsample node " + std::to_string(v));
    in_selected_[v] = 1;
    position_[v] = static_cast<NodeId>(i);
  }
  complement_.reserve(n - selected_.size());
  for (NodeId v = 0; v < n; ++v) {
    if (!in_selected_[v]) {
      position_[v] = static_cast<NodeId>(complement_.size());
      complement_.push_back(v);
    }
  }
}

SubsampleIndex SubsampleIndex::all(NodeId n) {
  std::vector<NodeId> nodes(n);
  std::iota(nodes.begin(), nodes.end(), NodeId{0});
  return SubsampleIndex(n, std::move(nodes));
}

SparseGraph SparseGraph::from_edges(NodeId n,
                                    std::span<const std::pair<NodeId, NodeId>> edges) {
  std::vector<EdgeOffset> row_ptr(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) {
      throw IndexError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                       ") out of range for n=" + std::to_string(n));
    }
    if (u == v) continue;
    ++row_ptr[u + 1];
    ++row_ptr[v + 1];
  }
  std::partial_sum(row_ptr.begin(), row_ptr.end(), row_ptr.begin());

  std::vector<NodeId> col_idx(row_ptr.back());
  std::vector<EdgeOffset> fill(row_ptr.begin(), row_ptr.end() - 1);
  for (const auto& [u, v] : edges) {
    if (u == v) continue;
    col_idx[fill[u]++] = v;
    col_idx[fill[v]++] = u;
  }

  // Sort rows and squeeze out duplicates in place.
  EdgeOffset write = 0;
  EdgeOffset row_begin = 0;
  for (NodeId v = 0; v < n; ++v) {
    const EdgeOffset row_end = row_ptr[v + 1];
    auto first = col_idx.begin() + static_cast<std::ptrdiff_t>(row_begin);
    auto last = col_idx.begin() + static_cast<std::ptrdiff_t>(row_end);
    std::sort(first, last);
    last = std::unique(first, last);
    const EdgeOffset len = static_cast<EdgeOffset>(last - first);
    std::copy(first, last, col_idx.begin() + static_cast<std::ptrdiff_t>(write));
    row_begin = row_end;
    row_ptr[v] = write;
    write += len;
  }
  row_ptr[n] = write;
  col_idx.resize(write);
  col_idx.shrink_to_fit();

  SparseGraph g;
  g.row_ptr_ = std::move(row_ptr);
  g.col_idx_ = std::move(col_idx);
  return g;
}

SparseGraph SparseGraph::from_csr(std::vector<EdgeOffset> row_ptr, std::vector<NodeId> col_idx) {
  SparseGraph g;
  g.row_ptr_ = std::move(row_ptr);
  g.col_idx_ = std::move(col_idx);
  if (!g.is_valid()) throw InvalidParams("CSR arrays violate the SparseGraph invariants");
  return g;
}

std::vector<std::uint32_t> SparseGraph::degrees() const {
  std::vector<std::uint32_t> d(num_nodes());
  for (NodeId v = 0; v < num_nodes(); ++v) d[v] = degree(v);
  return d;
}

double SparseGraph::mean_degree() const {
  return num_nodes() == 0 ? 0.0 : static_cast<double>(nnz()) / num_nodes();
}

bool SparseGraph::has_edge(NodeId u, NodeId v) const {
  const auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

bool SparseGraph::is_valid() const {
  if (row_ptr_.empty() || row_ptr_.front() != 0 || row_ptr_.back() != col_idx_.size()) {
    return false;
  }
  const NodeId n = num_nodes();
  for (NodeId v = 0; v < n; ++v) {
    if (row_ptr_[v] > row_ptr_[v + 1]) return false;
    const auto nb = neighbors(v);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      if (nb[i] >= n || nb[i] == v) return false;
      if (i > 0 && nb[i - 1] >= nb[i]) return false;
      if (!has_edge(nb[i], v)) return false;
    }
  }
  return true;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n\v\f";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::uint64_t parse_id(std::string_view tok, std::size_t line_no) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec == std::errc::result_out_of_range) {
    throw ParseError(line_no, "node id '" + std::string(tok) + "' overflows");
  }
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError(line_no, "malformed token '" + std::string(tok) + "'");
  }
  // n = max id + 1 must still fit in NodeId
  if (value >= std::numeric_limits<NodeId>::max()) {
    throw ParseError(line_no, "node id " + std::string(tok) + " overflows 32-bit node index");
  }
  return value;
}

}  // namespace

SparseGraph read_edge_list(std::istream& in) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::optional<std::uint64_t> header_n;
  std::uint64_t max_id = 0;
  bool any = false;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    if (body.front() == '#' || body.front() == '%') {
      const std::string_view rest = trim(body.substr(1));
      constexpr std::string_view key = "nodes=";
      if (rest.starts_with(key)) {
        header_n = parse_id(trim(rest.substr(key.size())), line_no);
      }
      continue;
    }

    std::string_view toks[2];
    std::size_t count = 0;
    std::string_view rest = body;
    while (!rest.empty()) {
      const auto end = rest.find_first_of(" \t");
      const std::string_view tok = rest.substr(0, end);
      if (count == 2) throw ParseError(line_no, "expected two node ids, found more");
      toks[count++] = tok;
      rest = end == std::string_view::npos ? std::string_view{} : trim(rest.substr(end));
    }
    if (count != 2) throw ParseError(line_no, "expected two node ids");
    const std::uint64_t u = parse_id(toks[0], line_no);
    const std::uint64_t v = parse_id(toks[1], line_no);
    if (header_n && (u >= *header_n || v >= *header_n)) {
      throw ParseError(line_no, "node id exceeds header node count " + std::to_string(*header_n));
    }
    max_id = std::max({max_id, u, v});
    any = true;
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }

  const std::uint64_t n = header_n ? *header_n : (any ? max_id + 1 : 0);
  return SparseGraph::from_edges(static_cast<NodeId>(n), edges);
}

void write_edge_list(const SparseGraph& g, std::ostream& out) {
  out << "# nodes=" << g.num_nodes() << '\n';
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    for (NodeId v : g.neighbors(u)) {
      if (u < v) out << u << ' ' << v << '\n';
    }
  }
}

SparseGraph induced_subgraph(const SparseGraph& g, const SubsampleIndex& s) {
  if (s.n() != g.num_nodes()) {
    throw IndexError("subsample index was built for n=" + std::to_string(s.n()) +
                     " but the graph has n=" + std::to_string(g.num_nodes()));
  }
  const auto sel = s.selected();
  std::vector<EdgeOffset> row_ptr(sel.size() + 1, 0);
  std::vector<NodeId> col_idx;
  for (std::size_t r = 0; r < sel.size(); ++r) {
    for (NodeId v : g.neighbors(sel[r])) {
      if (s.contains(v)) col_idx.push_back(s.position(v));
    }
    row_ptr[r + 1] = col_idx.size();
  }
  SparseGraph out = SparseGraph::from_csr(std::move(row_ptr), std::move(col_idx));
  return out;
}

SparseGraph induced_subgraph(const SparseGraph& g, std::span<const NodeId> nodes) {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] >= g.num_nodes()) throw IndexError("node " + std::to_string(nodes[i]) + " out of range");
    if (i > 0 && nodes[i - 1] >= nodes[i]) throw InvalidParams("node list must be sorted and distinct");
  }
  return induced_subgraph(g, SubsampleIndex(g.num_nodes(), {nodes.begin(), nodes.end()}));
}

namespace {

void check_sorted_in_range(std::span<const NodeId> ids, NodeId n, const char* what) {
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] >= n) {
      throw IndexError(std::string(what) + " index " + std::to_string(ids[i]) + " out of range");
    }
    if (i > 0 && ids[i - 1] >= ids[i]) {
      throw InvalidParams(std::string(what) + " must be sorted and distinct");
    }
  }
}

}  // namespace

RectSlice rect_slice(const SparseGraph& g, std::span<const NodeId> rows,
                     std::span<const NodeId> cols) {
  const NodeId n = g.num_nodes();
  check_sorted_in_range(rows, n, "row");
  check_sorted_in_range(cols, n, "column");

  std::vector<std::uint32_t> col_pos(n, std::numeric_limits<std::uint32_t>::max());
  for (std::size_t c = 0; c < cols.size(); ++c) col_pos[cols[c]] = static_cast<std::uint32_t>(c);

  RectSlice out;
  out.rows.assign(rows.begin(), rows.end());
  out.cols.assign(cols.begin(), cols.end());
  out.row_ptr.assign(rows.size() + 1, 0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (NodeId v : g.neighbors(rows[r])) {
      if (col_pos[v] != std::numeric_limits<std::uint32_t>::max()) {
        out.col_idx.push_back(col_pos[v]);
      }
    }
    out.row_ptr[r + 1] = out.col_idx.size();
  }
  return out;
}

std::vector<Label> make_group_map(NodeId n, std::span<const NodeId> nodes,
                                  std::span<const Label> labels) {
  if (nodes.size() != labels.size()) throw InvalidParams("node and label lists differ in length");
  std::vector<Label> map(n, kNoLabel);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] >= n) throw IndexError("node " + std::to_string(nodes[i]) + " out of range");
    map[nodes[i]] = labels[i];
  }
  return map;
}

void group_counts(const SparseGraph& g, NodeId v, std::span<const Label> group_of,
                  std::span<std::uint32_t> out) {
  if (v >= g.num_nodes()) throw IndexError("node " + std::to_string(v) + " out of range");
  std::fill(out.begin(), out.end(), 0u);
  for (NodeId u : g.neighbors(v)) {
    const Label k = group_of[u];
    if (k != kNoLabel) ++out[k];
  }
}

std::vector<std::uint32_t> group_counts(const SparseGraph& g, NodeId v,
                                        std::span<const Label> group_of, Label K) {
  std::vector<std::uint32_t> out(K);
  group_counts(g, v, group_of, out);
  return out;
}

std::vector<NodeId> largest_component(const SparseGraph& g) {
  const NodeId n = g.num_nodes();
  std::vector<NodeId> comp(n, std::numeric_limits<NodeId>::max());
  std::vector<NodeId> stack;
  NodeId best = 0;
  std::size_t best_size = 0;
  NodeId next_comp = 0;
  for (NodeId root = 0; root < n; ++root) {
    if (comp[root] != std::numeric_limits<NodeId>::max()) continue;
    std::size_t size = 0;
    comp[root] = next_comp;
    stack.push_back(root);
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      ++size;
      for (NodeId u : g.neighbors(v)) {
        if (comp[u] == std::numeric_limits<NodeId>::max()) {
          comp[u] = next_comp;
          stack.push_back(u);
        }
      }
    }
    if (size > best_size) {
      best_size = size;
      best = next_comp;
    }
    ++next_comp;
  }
  std::vector<NodeId> nodes;
  nodes.reserve(best_size);
  for (NodeId v = 0; v < n; ++v) {
    if (comp[v] == best) nodes.push_back(v);
  }
  return nodes;
}

SparseGraph permute_nodes(const SparseGraph& g, std::span<const NodeId> perm) {
  const NodeId n = g.num_nodes();
  if (perm.size() != n) throw InvalidParams("permutation length differs from node count");
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(g.num_edges());
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v : g.neighbors(u)) {
      if (u < v) edges.emplace_back(perm[u], perm[v]);
    }
  }
  return SparseGraph::from_edges(n, edges);
}

double edge_density(const SparseGraph& g) {
  const double n = g.num_nodes();
  return n < 2 ? 0.0 : static_cast<double>(g.num_edges()) / (n * (n - 1) / 2);
}

}  // namespace predassign
