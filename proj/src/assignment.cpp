#include "predassign/assignment.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <numeric>
#include <string>

#include <omp.h>

#include "predassign/error.hpp"
#include "predassign/rng.hpp"

namespace predassign {

ThetaHat::ThetaHat(std::size_t rows, std::vector<std::uint32_t> sizes)
    : rows_(rows), sizes_(std::move(sizes)), counts_(rows * sizes_.size(), 0) {}

std::vector<std::int64_t> ThetaHat::column_square_sums() const {
  std::vector<std::int64_t> sums(sizes_.size(), 0);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (Label k = 0; k < K(); ++k) {
      const auto c = static_cast<std::int64_t>(count(i, k));
      sums[k] += c * c;
    }
  }
  return sums;
}

std::uint64_t OmegaHat::row_sum(Label k) const {
  std::uint64_t sum = 0;
  for (Label l = 0; l < K_; ++l) sum += (*this)(k, l);
  return sum;
}

namespace {

int thread_count(unsigned threads) { return static_cast<int>(std::max(threads, 1u)); }

void check_labels(const SubsampleIndex& s, std::span<const Label> labels_S, Label K) {
  if (labels_S.size() != s.m()) {
    throw InvalidParams("expected " + std::to_string(s.m()) + " subgraph labels, got " +
                        std::to_string(labels_S.size()));
  }
  for (Label l : labels_S) {
    if (l >= K) throw InvalidParams("subgraph label " + std::to_string(l) + " not below K");
  }
}

std::vector<std::uint32_t> community_sizes(std::span<const Label> labels_S, Label K) {
  std::vector<std::uint32_t> sizes(K, 0);
  for (Label l : labels_S) ++sizes[l];
  return sizes;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

ThetaHat estimate_theta(const SparseGraph& g, const SubsampleIndex& s,
                        std::span<const Label> labels_S, Label K, unsigned threads) {
  check_labels(s, labels_S, K);
  auto sizes = community_sizes(labels_S, K);
  for (Label k = 0; k < K; ++k) {
    if (sizes[k] == 0) throw EmptyEstimatedCommunity(k);
  }
  const auto group_of = make_group_map(g.num_nodes(), s.selected(), labels_S);
  const auto comp = s.complement();
  ThetaHat theta(comp.size(), std::move(sizes));
  const auto rows = static_cast<std::int64_t>(comp.size());
#pragma omp parallel for num_threads(thread_count(threads)) schedule(static)
  for (std::int64_t i = 0; i < rows; ++i) {
    for (NodeId u : g.neighbors(comp[static_cast<std::size_t>(i)])) {
      const Label k = group_of[u];
      if (k != kNoLabel) ++theta.count(static_cast<std::size_t>(i), k);
    }
  }
  return theta;
}

std::vector<Label> closest_community_assign(const SparseGraph& g, const SubsampleIndex& s,
                                            const ThetaHat& theta_hat, unsigned threads) {
  const auto comp = s.complement();
  if (theta_hat.rows() != comp.size()) {
    throw InvalidParams("theta estimate has " + std::to_string(theta_hat.rows()) +
                        " rows for " + std::to_string(comp.size()) + " unassigned nodes");
  }
  const Label K = theta_hat.K();
  const auto col_sq = theta_hat.column_square_sums();
  const auto sizes = theta_hat.sizes();
  std::vector<Label> out(comp.size(), 0);

  const auto rows = static_cast<std::int64_t>(comp.size());
#pragma omp parallel num_threads(thread_count(threads))
  {
    std::vector<std::int64_t> inner(K);
#pragma omp for schedule(static)
    for (std::int64_t j = 0; j < rows; ++j) {
      std::fill(inner.begin(), inner.end(), 0);
      for (NodeId u : g.neighbors(comp[static_cast<std::size_t>(j)])) {
        if (s.contains(u)) continue;
        const auto row = theta_hat.row_counts(s.position(u));
        for (Label k = 0; k < K; ++k) inner[k] += row[k];
      }
      // distance^2 - ||a_j||^2 = (col_sq[k] - 2 size_k inner[k]) / size_k^2
      Label best = 0;
      __int128 best_num = 0;
      __int128 best_den = 1;
      for (Label k = 0; k < K; ++k) {
        const __int128 size = sizes[k];
        const __int128 num = static_cast<__int128>(col_sq[k]) - 2 * size * inner[k];
        const __int128 den = size * size;
        if (k == 0 || num * best_den < best_num * den) {
          best = k;
          best_num = num;
          best_den = den;
        }
      }
      out[static_cast<std::size_t>(j)] = best;
    }
  }
  return out;
}

OmegaHat estimate_omega(const SparseGraph& g, const SubsampleIndex& s,
                        std::span<const Label> labels_S, Label K) {
  check_labels(s, labels_S, K);
  OmegaHat omega(K);
  const auto sel = s.selected();
  for (std::size_t a = 0; a < sel.size(); ++a) {
    for (NodeId u : g.neighbors(sel[a])) {
      if (s.contains(u)) ++omega(labels_S[a], labels_S[s.position(u)]);
    }
  }
  return omega;
}

PopularityAssignment node_popularity_assign(const SparseGraph& g, const SubsampleIndex& s,
                                            std::span<const Label> labels_S,
                                            const OmegaHat& omega_hat, unsigned threads) {
  const Label K = omega_hat.K();
  check_labels(s, labels_S, K);

  std::vector<double> profile(static_cast<std::size_t>(K) * K);
  for (Label k = 0; k < K; ++k) {
    const std::uint64_t total = omega_hat.row_sum(k);
    if (total == 0) throw DisconnectedEstimatedCommunity(k);
    for (Label r = 0; r < K; ++r) {
      profile[static_cast<std::size_t>(k) * K + r] = static_cast<double>(omega_hat(k, r)) / total;
    }
  }
  const auto sizes = community_sizes(labels_S, K);
  const Label fallback = static_cast<Label>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  const auto group_of = make_group_map(g.num_nodes(), s.selected(), labels_S);

  const auto comp = s.complement();
  PopularityAssignment out;
  out.labels.assign(comp.size(), fallback);
  std::uint64_t fallbacks = 0;
  const auto rows = static_cast<std::int64_t>(comp.size());
#pragma omp parallel num_threads(thread_count(threads)) reduction(+ : fallbacks)
  {
    std::vector<std::uint32_t> counts(K);
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < rows; ++i) {
      group_counts(g, comp[static_cast<std::size_t>(i)], group_of, counts);
      const std::uint64_t into_s = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
      if (into_s == 0) {
        ++fallbacks;
        continue;
      }
      Label best = 0;
      double best_dist = std::numeric_limits<double>::infinity();
      for (Label k = 0; k < K; ++k) {
        double d = 0.0;
        for (Label r = 0; r < K; ++r) {
          const double diff = static_cast<double>(counts[r]) / into_s - profile[static_cast<std::size_t>(k) * K + r];
          d += diff * diff;
        }
        if (d < best_dist) {
          best_dist = d;
          best = k;
        }
      }
      out.labels[static_cast<std::size_t>(i)] = best;
    }
  }
  out.fallback_count = fallbacks;
  return out;
}

Model parse_model(std::string_view name) {
  if (name == "sbm") return Model::Sbm;
  if (name == "dcbm") return Model::Dcbm;
  throw InvalidParams("unknown model '" + std::string(name) + "' (expected sbm or dcbm)");
}

std::string_view to_string(Model m) {
  return m == Model::Sbm ? "sbm" : "dcbm";
}

Membership cluster_full_network(const SparseGraph& g, Label K, SpectralVariant method,
                                const SpectralParams& params, std::uint64_t seed) {
  if (method == SpectralVariant::Basc) {
    std::vector<NodeId> all(g.num_nodes());
    std::iota(all.begin(), all.end(), NodeId{0});
    const RectSlice slice = rect_slice(g, all, all);
    const auto degrees = g.degrees();
    return spectral_cluster_basc(slice, degrees, K, params, seed);
  }
  return spectral_cluster(g, K, method, params, seed);
}

PredictiveResult predictive_assign(const SparseGraph& g, Label K, const PredictiveConfig& cfg) {
  const NodeId n = g.num_nodes();
  if (K < 1) throw InvalidParams("K must be at least 1");
  if (cfg.m < 1 || cfg.m > n) {
    throw InvalidParams("subsample size m=" + std::to_string(cfg.m) + " must lie in [1, n=" +
                        std::to_string(n) + "]");
  }
  if (cfg.m < K) throw InvalidParams("subsample size m is smaller than K");

  PredictiveResult out;
  const auto t_start = std::chrono::steady_clock::now();

  // Step 1
  auto t0 = std::chrono::steady_clock::now();
  if (cfg.sampler == Sampler::Srs) {
    out.subsample = srs(n, cfg.m, derive_seed(cfg.seed, 1));
  } else {
    RandomWalkSample rws = random_walk_sample(g, cfg.m, derive_seed(cfg.seed, 1));
    out.subsample = std::move(rws.index);
    out.sampler_filled = rws.srs_filled;
  }
  out.timings.sample_s = seconds_since(t0);
  const SubsampleIndex& s = out.subsample;

  // Step 2a
  t0 = std::chrono::steady_clock::now();
  const std::uint64_t cluster_seed = derive_seed(cfg.seed, 2);
  Membership sub_labels;
  if (s.m() == n) {
    sub_labels = cluster_full_network(g, K, cfg.method, cfg.spectral, cluster_seed);
  } else if (cfg.method == SpectralVariant::Basc) {
    std::vector<NodeId> all(n);
    std::iota(all.begin(), all.end(), NodeId{0});
    const RectSlice slice = rect_slice(g, all, s.selected());
    std::vector<std::uint32_t> degrees;
    degrees.reserve(s.m());
    for (NodeId v : s.selected()) degrees.push_back(g.degree(v));
    sub_labels = spectral_cluster_basc(slice, degrees, K, cfg.spectral, cluster_seed);
  } else {
    const SparseGraph sub = induced_subgraph(g, s);
    sub_labels = spectral_cluster(sub, K, cfg.method, cfg.spectral, cluster_seed);
  }
  out.timings.cluster_s = seconds_since(t0);

  // Steps 2b and 3
  t0 = std::chrono::steady_clock::now();
  out.labels.K = K;
  out.labels.labels.assign(n, 0);
  const auto sel = s.selected();
  for (std::size_t a = 0; a < sel.size(); ++a) out.labels.labels[sel[a]] = sub_labels.labels[a];
  const auto comp = s.complement();
  if (!comp.empty()) {
    std::vector<Label> assigned;
    if (cfg.model == Model::Sbm) {
      const ThetaHat theta = estimate_theta(g, s, sub_labels.labels, K, cfg.threads);
      assigned = closest_community_assign(g, s, theta, cfg.threads);
    } else {
      const OmegaHat omega = estimate_omega(g, s, sub_labels.labels, K);
      PopularityAssignment pa = node_popularity_assign(g, s, sub_labels.labels, omega, cfg.threads);
      assigned = std::move(pa.labels);
      out.fallback_count = pa.fallback_count;
    }
    for (std::size_t i = 0; i < comp.size(); ++i) out.labels.labels[comp[i]] = assigned[i];
  }
  out.timings.assign_s = seconds_since(t0);
  out.timings.total_s = seconds_since(t_start);
  return out;
}

}  // namespace predassign
