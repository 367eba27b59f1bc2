#include "predassign/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <unordered_set>

#include "predassign/error.hpp"
#include "predassign/rng.hpp"

namespace predassign {

BlockMatrix::BlockMatrix(Label K, std::vector<double> entries)
    : K_(K), entries_(std::move(entries)) {
  if (K == 0) throw InvalidParams("block matrix needs K >= 1");
  if (entries_.size() != static_cast<std::size_t>(K) * K) {
    throw InvalidParams("block matrix needs K*K entries");
  }
  for (Label r = 0; r < K; ++r) {
    for (Label s = 0; s < K; ++s) {
      const double p = (*this)(r, s);
      if (!(p >= 0.0 && p <= 1.0)) {
        throw InvalidParams("block probability " + std::to_string(p) + " outside [0,1]");
      }
      if (p != (*this)(s, r)) throw InvalidParams("block matrix must be symmetric");
    }
  }
}

BlockMatrix BlockMatrix::constant(Label K, double p) {
  return BlockMatrix(K, std::vector<double>(static_cast<std::size_t>(K) * K, p));
}

BlockMatrix BlockMatrix::scaled(double factor) const {
  std::vector<double> e(entries_);
  for (double& x : e) x *= factor;
  return BlockMatrix(K_, std::move(e));
}

namespace {

BlockMatrix two_level(Label K, double diag, double off) {
  std::vector<double> e(static_cast<std::size_t>(K) * K, off);
  for (Label k = 0; k < K; ++k) e[static_cast<std::size_t>(k) * K + k] = diag;
  return BlockMatrix(K, std::move(e));
}

void check_design(Label K, double alpha, double h) {
  if (K < 1) throw InvalidParams("K must be at least 1");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidParams("alpha must lie in (0, 1]");
  if (!(h > 0.0)) throw InvalidParams("homophily factor h must be positive");
}

}  // namespace

BlockMatrix sbm_block_matrix(Label K, double alpha, double h) {
  check_design(K, alpha, h);
  const double denom = h + (K - 1.0);
  const double diag = alpha * K * h / denom;
  const double off = alpha * K / denom;
  if (diag > 1.0 || off > 1.0) {
    throw InvalidParams("block probabilities exceed 1 (diag=" + std::to_string(diag) + ")");
  }
  return two_level(K, diag, off);
}

BlockMatrix dcbm_block_matrix(Label K, double alpha, double h) {
  check_design(K, alpha, h);
  return two_level(K, alpha, std::isinf(h) ? 0.0 : alpha / h);
}

std::vector<double> balanced_proportions(Label K) {
  return std::vector<double>(K, 1.0 / K);
}

std::vector<NodeId> block_sizes(NodeId n, std::span<const double> proportions) {
  if (proportions.empty()) throw InvalidParams("need at least one community proportion");
  double total = 0.0;
  for (double p : proportions) {
    if (!(p >= 0.0)) throw InvalidParams("community proportions must be non-negative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidParams("community proportions must sum to 1");

  const std::size_t K = proportions.size();
  std::vector<NodeId> sizes(K);
  std::vector<double> remainder(K);
  std::uint64_t assigned = 0;
  for (std::size_t k = 0; k < K; ++k) {
    const double exact = n * proportions[k] / total;
    sizes[k] = static_cast<NodeId>(std::floor(exact));
    remainder[k] = exact - sizes[k];
    assigned += sizes[k];
  }
  std::vector<std::size_t> order(K);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t i = 0; assigned < n; ++i, ++assigned) ++sizes[order[i % K]];
  return sizes;
}

Membership contiguous_membership(std::span<const NodeId> sizes) {
  Membership m;
  m.K = static_cast<Label>(sizes.size());
  for (Label k = 0; k < m.K; ++k) m.labels.insert(m.labels.end(), sizes[k], k);
  return m;
}

namespace {

/// Calls emit(t) for a uniformly random subset of [0, pairs) where each
/// element is included independently with probability p: a binomial count,
/// then a uniform placement of that many distinct indices.
template <class Emit>
void sample_pairs(Rng& rng, std::uint64_t pairs, double p, Emit&& emit) {
  if (pairs == 0 || p <= 0.0) return;
  if (p >= 1.0) {
    for (std::uint64_t t = 0; t < pairs; ++t) emit(t);
    return;
  }
  std::binomial_distribution<std::uint64_t> binom(pairs, p);
  const std::uint64_t count = binom(rng);
  if (count == 0) return;

  // Floyd's algorithm on the smaller of the chosen set and its complement.
  const bool invert = count > pairs / 2;
  const std::uint64_t draws = invert ? pairs - count : count;
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(draws * 2);
  for (std::uint64_t j = pairs - draws; j < pairs; ++j) {
    const std::uint64_t t = uniform_below(rng, j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::uint64_t> sorted(chosen.begin(), chosen.end());
  std::sort(sorted.begin(), sorted.end());
  if (!invert) {
    for (std::uint64_t t : sorted) emit(t);
    return;
  }
  auto it = sorted.begin();
  for (std::uint64_t t = 0; t < pairs; ++t) {
    if (it != sorted.end() && *it == t) {
      ++it;
      continue;
    }
    emit(t);
  }
}

/// Maps t in [0, s(s-1)/2) to (i, j) with j < i < s.
std::pair<std::uint64_t, std::uint64_t> triangle_pair(std::uint64_t t) {
  auto i = static_cast<std::uint64_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(t))) / 2.0);
  while (i * (i - 1) / 2 > t) --i;
  while ((i + 1) * i / 2 <= t) ++i;
  return {i, t - i * (i - 1) / 2};
}

/// Visits candidate pairs block by block. Within-block pairs are drawn from
/// the lower triangle; cross-block pairs from the full rectangle.
template <class PairProb, class Accept>
void sample_blocks(Rng& rng, std::span<const NodeId> sizes, PairProb&& block_prob,
                   Accept&& accept) {
  const std::size_t K = sizes.size();
  std::vector<NodeId> start(K + 1, 0);
  for (std::size_t k = 0; k < K; ++k) start[k + 1] = start[k] + sizes[k];
  for (std::size_t r = 0; r < K; ++r) {
    for (std::size_t s = r; s < K; ++s) {
      const double p = block_prob(r, s);
      if (r == s) {
        const std::uint64_t sz = sizes[r];
        sample_pairs(rng, sz * (sz - (sz > 0 ? 1 : 0)) / 2, p, [&](std::uint64_t t) {
          const auto [i, j] = triangle_pair(t);
          accept(start[r] + static_cast<NodeId>(i), start[r] + static_cast<NodeId>(j));
        });
      } else {
        const std::uint64_t cols = sizes[s];
        sample_pairs(rng, static_cast<std::uint64_t>(sizes[r]) * cols, p, [&](std::uint64_t t) {
          accept(start[r] + static_cast<NodeId>(t / cols), start[s] + static_cast<NodeId>(t % cols));
        });
      }
    }
  }
}

}  // namespace

SbmSample sample_sbm(NodeId n, const BlockMatrix& omega, std::span<const double> proportions,
                     std::uint64_t seed) {
  if (proportions.size() != omega.K()) throw InvalidParams("need one proportion per community");
  const auto sizes = block_sizes(n, proportions);
  Rng rng(seed);
  std::vector<std::pair<NodeId, NodeId>> edges;
  sample_blocks(
      rng, sizes, [&](std::size_t r, std::size_t s) { return omega(r, s); },
      [&](NodeId u, NodeId v) { edges.emplace_back(u, v); });
  return {SparseGraph::from_edges(n, edges), contiguous_membership(sizes)};
}

std::vector<double> draw_theta(const Membership& membership, ThetaDistribution dist,
                               std::uint64_t seed) {
  const std::size_t n = membership.size();
  std::vector<double> theta(n, 1.0);
  if (dist.kind == ThetaDistribution::Kind::Beta) {
    if (!(dist.a > 0.0 && dist.b > 0.0)) throw InvalidParams("Beta shape parameters must be positive");
    Rng rng(seed);
    for (double& t : theta) {
      if (dist.a == 1.0) {
        // Beta(1, b) by inversion: 1 - U^(1/b), written to stay positive.
        const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
        t = -std::expm1(std::log(u) / dist.b);
      } else {
        std::gamma_distribution<double> ga(dist.a, 1.0), gb(dist.b, 1.0);
        const double x = ga(rng);
        const double y = gb(rng);
        t = x / (x + y);
      }
      t = std::max(t, std::numeric_limits<double>::min());
    }
  }
  std::vector<double> max_theta(membership.K, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    max_theta[membership.labels[i]] = std::max(max_theta[membership.labels[i]], theta[i]);
  }
  for (std::size_t i = 0; i < n; ++i) theta[i] /= max_theta[membership.labels[i]];
  return theta;
}

double dcbm_scale(const Membership& membership, std::span<const double> theta,
                  const BlockMatrix& omega0, double density) {
  const Label K = membership.K;
  std::vector<double> sum(K, 0.0), sum_sq(K, 0.0);
  for (std::size_t i = 0; i < theta.size(); ++i) {
    sum[membership.labels[i]] += theta[i];
    sum_sq[membership.labels[i]] += theta[i] * theta[i];
  }
  double expected = 0.0;
  for (Label r = 0; r < K; ++r) {
    expected += omega0(r, r) * (sum[r] * sum[r] - sum_sq[r]) / 2.0;
    for (Label s = r + 1; s < K; ++s) expected += omega0(r, s) * sum[r] * sum[s];
  }
  const double n = static_cast<double>(theta.size());
  const double target = density * n * (n - 1.0) / 2.0;
  if (target == 0.0) return 0.0;
  if (!(expected > 0.0)) throw InvalidParams("DCBM design has zero expected edges");
  return target / expected;
}

DcbmSample sample_dcbm(NodeId n, const BlockMatrix& omega0, std::span<const double> proportions,
                       double density, ThetaDistribution theta_dist, std::uint64_t seed) {
  if (proportions.size() != omega0.K()) throw InvalidParams("need one proportion per community");
  if (!(density >= 0.0 && density < 1.0)) throw InvalidParams("density target must lie in [0, 1)");

  DcbmSample out;
  const auto sizes = block_sizes(n, proportions);
  out.membership = contiguous_membership(sizes);
  out.theta = draw_theta(out.membership, theta_dist, derive_seed(seed, 0));
  out.scale = dcbm_scale(out.membership, out.theta, omega0, density);

  // Thinning: every community has max theta 1, so s * omega0(r, s) bounds the
  // pair probability within a block; candidates are accepted with P_ij / bound.
  Rng rng(derive_seed(seed, 1));
  std::vector<std::pair<NodeId, NodeId>> edges;
  const auto& labels = out.membership.labels;
  sample_blocks(
      rng, sizes, [&](std::size_t r, std::size_t s) { return std::min(1.0, out.scale * omega0(r, s)); },
      [&](NodeId u, NodeId v) {
        const double raw = out.scale * out.theta[u] * out.theta[v] * omega0(labels[u], labels[v]);
        const double bound = std::min(1.0, out.scale * omega0(labels[u], labels[v]));
        if (raw >= 1.0) ++out.capped_pairs;
        const double p = std::min(1.0, raw);
        if (p >= bound || uniform01(rng) < p / bound) edges.emplace_back(u, v);
      });
  out.graph = SparseGraph::from_edges(n, edges);
  return out;
}

}  // namespace predassign
