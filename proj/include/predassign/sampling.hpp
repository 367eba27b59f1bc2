#pragma once

#include <cstdint>
#include <string_view>

#include "predassign/graph.hpp"
#include "predassign/subsample.hpp"

namespace predassign {

enum class Sampler { Srs, Rws };

Sampler parse_sampler(std::string_view name);
std::string_view to_string(Sampler s);

/// Uniformly random m-subset of 0..n-1 via partial Fisher-Yates.
SubsampleIndex srs(NodeId n, NodeId m, std::uint64_t seed);

struct RandomWalkSample {
  SubsampleIndex index;
  /// Nodes added by the uniform fill after the step cap was hit.
  std::uint64_t srs_filled = 0;
  std::uint64_t restarts = 0;
  std::uint64_t steps = 0;
};

/// Random walk sampling. A walk starts at a uniform node and moves to a
/// uniform neighbour, adding every visited node. The walk restarts from a
/// fresh uniform node at an isolated node or after 50*m steps without a new
/// node; after 500*m total steps the remainder is filled uniformly from the
/// unvisited nodes.
RandomWalkSample random_walk_sample(const SparseGraph& g, NodeId m, std::uint64_t seed);

/// Resolves "<int>", "n" or "n^<gamma>" against n; n^gamma rounds to nearest.
NodeId resolve_m(std::string_view spec, NodeId n);

}  // namespace predassign
