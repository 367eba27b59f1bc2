#include "predassign/sampling.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "predassign/error.hpp"
#include "predassign/rng.hpp"

namespace predassign {

Sampler parse_sampler(std::string_view name) {
  if (name == "srs") return Sampler::Srs;
  if (name == "rws") return Sampler::Rws;
  throw InvalidParams("unknown sampler '" + std::string(name) + "' (expected srs or rws)");
}

std::string_view to_string(Sampler s) {
  return s == Sampler::Srs ? "srs" : "rws";
}

namespace {

void check_m(NodeId n, NodeId m) {
  if (m < 1 || m > n) {
    throw InvalidParams("subsample size m=" + std::to_string(m) + " must lie in [1, n=" +
                        std::to_string(n) + "]");
  }
}

}  // namespace

SubsampleIndex srs(NodeId n, NodeId m, std::uint64_t seed) {
  check_m(n, m);
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), NodeId{0});
  Rng rng(seed);
  for (NodeId i = 0; i < m; ++i) {
    const auto j = i + static_cast<NodeId>(uniform_below(rng, n - i));
    std::swap(perm[i], perm[j]);
  }
  perm.resize(m);
  return SubsampleIndex(n, std::move(perm));
}

RandomWalkSample random_walk_sample(const SparseGraph& g, NodeId m, std::uint64_t seed) {
  const NodeId n = g.num_nodes();
  if (n == 0) throw InvalidParams("random walk sampling needs a nonempty graph");
  check_m(n, m);

  Rng rng(seed);
  std::vector<unsigned char> visited(n, 0);
  std::vector<NodeId> chosen;
  chosen.reserve(m);
  RandomWalkSample out;

  const std::uint64_t stall_limit = 50ull * m;
  const std::uint64_t step_cap = 500ull * m;

  auto visit = [&](NodeId v) {
    if (visited[v]) return false;
    visited[v] = 1;
    chosen.push_back(v);
    return true;
  };

  NodeId current = static_cast<NodeId>(uniform_below(rng, n));
  visit(current);
  std::uint64_t since_new = 0;
  while (chosen.size() < m && out.steps < step_cap) {
    const auto nb = g.neighbors(current);
    if (nb.empty() || since_new >= stall_limit) {
      current = static_cast<NodeId>(uniform_below(rng, n));
      ++out.restarts;
      ++out.steps;
      visit(current);
      since_new = 0;
      continue;
    }
    current = nb[uniform_below(rng, nb.size())];
    ++out.steps;
    since_new = visit(current) ? 0 : since_new + 1;
  }

  if (chosen.size() < m) {
    std::vector<NodeId> rest;
    rest.reserve(n - chosen.size());
    for (NodeId v = 0; v < n; ++v) {
      if (!visited[v]) rest.push_back(v);
    }
    const std::size_t need = m - chosen.size();
    for (std::size_t i = 0; i < need; ++i) {
      const auto j = i + static_cast<std::size_t>(uniform_below(rng, rest.size() - i));
      std::swap(rest[i], rest[j]);
      chosen.push_back(rest[i]);
    }
    out.srs_filled = need;
  }
  out.index = SubsampleIndex(n, std::move(chosen));
  return out;
}

NodeId resolve_m(std::string_view spec, NodeId n) {
  auto fail = [&] {
    return InvalidParams("cannot parse subsample size '" + std::string(spec) +
                         "' (expected an integer, n, or n^gamma)");
  };
  double value = 0.0;
  if (spec == "n") {
    value = n;
  } else if (spec.starts_with("n^")) {
    double gamma = 0.0;
    const auto body = spec.substr(2);
    const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), gamma);
    if (ec != std::errc{} || ptr != body.data() + body.size()) throw fail();
    value = std::round(std::pow(static_cast<double>(n), gamma));
  } else {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(spec.data(), spec.data() + spec.size(), v);
    if (ec != std::errc{} || ptr != spec.data() + spec.size()) throw fail();
    value = static_cast<double>(v);
  }
  if (value < 1.0 || value > n) {
    throw InvalidParams("subsample size '" + std::string(spec) + "' resolves outside [1, n]");
  }
  return static_cast<NodeId>(value);
}

}  // namespace predassign
