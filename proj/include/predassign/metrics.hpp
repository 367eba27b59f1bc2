#pragma once

#include <cstdint>
#include <vector>

#include "predassign/subsample.hpp"
#include "predassign/types.hpp"

namespace predassign {

/// counts(k, l) = number of nodes with true label k and estimated label l.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(Label K) : K_(K), counts_(static_cast<std::size_t>(K) * K, 0) {}

  Label K() const noexcept { return K_; }
  std::uint64_t& operator()(Label k, Label l) { return counts_[static_cast<std::size_t>(k) * K_ + l]; }
  std::uint64_t operator()(Label k, Label l) const { return counts_[static_cast<std::size_t>(k) * K_ + l]; }
  std::uint64_t total() const;

 private:
  Label K_;
  std::vector<std::uint64_t> counts_;
};

ConfusionMatrix confusion(const Membership& truth, const Membership& estimate);

/// perm[k] is the estimated label matched to true label k; maximises
/// sum_k cm(k, perm[k]). Among optimal matchings the lexicographically
/// smallest perm is returned.
std::vector<Label> optimal_permutation(const ConfusionMatrix& cm);

/// Total matched count sum_k cm(k, perm[k]).
std::uint64_t matched_total(const ConfusionMatrix& cm, const std::vector<Label>& perm);

struct StepTimings {
  double sample_s = 0.0;
  double cluster_s = 0.0;
  double assign_s = 0.0;
  double total_s = 0.0;
};

struct ErrorReport {
  double delta_S = 0.0;
  double delta_Sc = 0.0;
  double delta = 0.0;
  double delta_tilde_S = 0.0;
  std::uint64_t fallback_count = 0;
  StepTimings timings;
  std::uint64_t peak_mem_bytes = 0;
};

/// Errors under one permutation fitted on all n nodes. delta_Sc is 0 when S
/// covers every node; delta_tilde_S skips true communities absent from S.
ErrorReport matched_errors(const Membership& truth, const Membership& estimate,
                           const SubsampleIndex& s);

/// Process resident-set high-water mark in bytes; approximate, 0 if unknown.
std::uint64_t peak_memory_bytes();

}  // namespace predassign
