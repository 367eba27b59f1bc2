#pragma once

#include <span>
#include <vector>

#include "predassign/types.hpp"

namespace predassign {

/// The selected node set S, its complement, and the maps between global ids
/// and positions inside either set.
class SubsampleIndex {
 public:
  SubsampleIndex() = default;

  /// `selected` may be in any order but must hold distinct ids below n.
  SubsampleIndex(NodeId n, std::vector<NodeId> selected);

  static SubsampleIndex all(NodeId n);

  NodeId n() const noexcept { return n_; }
  NodeId m() const noexcept { return static_cast<NodeId>(selected_.size()); }

  std::span<const NodeId> selected() const noexcept { return selected_; }
  std::span<const NodeId> complement() const noexcept { return complement_; }

  bool contains(NodeId v) const { return in_selected_[v] != 0; }

  /// Position of v within selected() or complement(), whichever holds it.
  NodeId position(NodeId v) const { return position_[v]; }

  bool operator==(const SubsampleIndex& o) const {
    return n_ == o.n_ && selected_ == o.selected_;
  }

 private:
  NodeId n_ = 0;
  std::vector<NodeId> selected_;
  std::vector<NodeId> complement_;
  std::vector<NodeId> position_;
  std::vector<unsigned char> in_selected_;
};

}  // namespace predassign
