#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace predassign {

using NodeId = std::uint32_t;
using EdgeOffset = std::uint64_t;
using Label = std::uint32_t;

inline constexpr Label kNoLabel = std::numeric_limits<Label>::max();

/// Per-node community labels in 0..K-1.
struct Membership {
  std::vector<Label> labels;
  Label K = 0;

  std::size_t size() const noexcept { return labels.size(); }

  /// Number of nodes carrying each label.
  std::vector<std::size_t> counts() const;

  /// Throws InvalidParams unless every label is below K.
  void validate() const;

  bool operator==(const Membership&) const = default;
};

}  // namespace predassign
