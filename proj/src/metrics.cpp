#include "predassign/metrics.hpp"

#include <sys/resource.h>

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "predassign/error.hpp"

namespace predassign {

std::uint64_t ConfusionMatrix::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

ConfusionMatrix confusion(const Membership& truth, const Membership& estimate) {
  if (truth.size() != estimate.size()) {
    throw InvalidParams("truth has " + std::to_string(truth.size()) + " labels, estimate has " +
                        std::to_string(estimate.size()));
  }
  truth.validate();
  estimate.validate();
  ConfusionMatrix cm(std::max({truth.K, estimate.K, Label{1}}));
  for (std::size_t i = 0; i < truth.size(); ++i) ++cm(truth.labels[i], estimate.labels[i]);
  return cm;
}

namespace {

using Cost = std::int64_t;

/// Minimum-cost perfect matching on a square cost matrix (Hungarian algorithm
/// with potentials, O(n^3)). Returns the optimal cost; row_to_col is filled.
Cost hungarian(const std::vector<Cost>& cost, std::size_t n, std::vector<std::size_t>& row_to_col) {
  constexpr Cost kInf = std::numeric_limits<Cost>::max() / 4;
  std::vector<Cost> u(n + 1, 0), v(n + 1, 0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<Cost> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      Cost delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const Cost cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  row_to_col.assign(n, 0);
  Cost total = 0;
  for (std::size_t j = 1; j <= n; ++j) {
    row_to_col[p[j] - 1] = j - 1;
    total += cost[(p[j] - 1) * n + (j - 1)];
  }
  return total;
}

/// Best matched count on the rows/cols still free.
Cost best_remaining(const ConfusionMatrix& cm, const std::vector<Label>& rows,
                    const std::vector<Label>& cols) {
  const std::size_t r = rows.size();
  if (r == 0) return 0;
  std::vector<Cost> cost(r * r);
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t b = 0; b < r; ++b) {
      cost[a * r + b] = -static_cast<Cost>(cm(rows[a], cols[b]));
    }
  }
  std::vector<std::size_t> assignment;
  return -hungarian(cost, r, assignment);
}

}  // namespace

std::vector<Label> optimal_permutation(const ConfusionMatrix& cm) {
  const Label K = cm.K();
  std::vector<Label> rows(K), cols(K);
  std::iota(rows.begin(), rows.end(), Label{0});
  std::iota(cols.begin(), cols.end(), Label{0});
  const Cost optimum = best_remaining(cm, rows, cols);

  // Fix perm[0], perm[1], ... to the smallest label that keeps the optimum.
  std::vector<Label> perm(K);
  Cost fixed = 0;
  for (Label k = 0; k < K; ++k) {
    rows.erase(rows.begin());
    for (std::size_t c = 0; c < cols.size(); ++c) {
      std::vector<Label> rest = cols;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(c));
      const Cost here = static_cast<Cost>(cm(k, cols[c]));
      if (fixed + here + best_remaining(cm, rows, rest) == optimum) {
        perm[k] = cols[c];
        fixed += here;
        cols = std::move(rest);
        break;
      }
    }
  }
  return perm;
}

std::uint64_t matched_total(const ConfusionMatrix& cm, const std::vector<Label>& perm) {
  std::uint64_t total = 0;
  for (Label k = 0; k < cm.K(); ++k) total += cm(k, perm[k]);
  return total;
}

ErrorReport matched_errors(const Membership& truth, const Membership& estimate,
                           const SubsampleIndex& s) {
  const ConfusionMatrix cm = confusion(truth, estimate);
  if (s.n() != truth.size()) {
    throw InvalidParams("subsample index covers " + std::to_string(s.n()) + " nodes, labels cover " +
                        std::to_string(truth.size()));
  }
  const std::vector<Label> perm = optimal_permutation(cm);

  const Label K = cm.K();
  std::vector<std::uint64_t> true_in_s(K, 0), wrong_in_s(K, 0);
  std::uint64_t wrong_s = 0, wrong_sc = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const Label c = truth.labels[i];
    const bool wrong = estimate.labels[i] != perm[c];
    if (s.contains(static_cast<NodeId>(i))) {
      ++true_in_s[c];
      if (wrong) {
        ++wrong_s;
        ++wrong_in_s[c];
      }
    } else if (wrong) {
      ++wrong_sc;
    }
  }

  ErrorReport r;
  const double n = static_cast<double>(truth.size());
  const double m = s.m();
  r.delta_S = m > 0 ? wrong_s / m : 0.0;
  r.delta_Sc = n > m ? wrong_sc / (n - m) : 0.0;
  r.delta = n > 0 ? (m * r.delta_S + (n - m) * r.delta_Sc) / n : 0.0;
  for (Label k = 0; k < K; ++k) {
    if (true_in_s[k] > 0) {
      r.delta_tilde_S = std::max(r.delta_tilde_S, static_cast<double>(wrong_in_s[k]) / true_in_s[k]);
    }
  }
  return r;
}

std::uint64_t peak_memory_bytes() {
  rusage usage{};
  if (getrusage(RUSAGE_SELF, &usage) != 0) return 0;
  return static_cast<std::uint64_t>(usage.ru_maxrss) * 1024u;  // kilobytes on Linux
}

}  // namespace predassign
