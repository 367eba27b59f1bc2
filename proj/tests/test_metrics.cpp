#include <doctest.h>

#include "oracles.hpp"
#include "predassign/error.hpp"
#include "predassign/metrics.hpp"

using namespace predassign;

TEST_CASE("optimal permutation: identity and reversal") {
  ConfusionMatrix id(4), anti(4);
  for (Label k = 0; k < 4; ++k) {
    id(k, k) = 10;
    anti(k, 3 - k) = 10;
  }
  CHECK(optimal_permutation(id) == std::vector<Label>{0, 1, 2, 3});
  CHECK(optimal_permutation(anti) == std::vector<Label>{3, 2, 1, 0});
}

TEST_CASE("optimal permutation: all-zero matrix gives identity") {
  CHECK(optimal_permutation(ConfusionMatrix(5)) == std::vector<Label>{0, 1, 2, 3, 4});
}

TEST_CASE("optimal permutation: random 5x5 against all 120 permutations") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    ConfusionMatrix cm(5);
    for (Label a = 0; a < 5; ++a)
      for (Label b = 0; b < 5; ++b) cm(a, b) = uniform_below(rng, 6);
    std::vector<Label> best;
    const auto total = oracle::brute_force_matching(cm, &best);
    const auto perm = optimal_permutation(cm);
    CHECK(matched_total(cm, perm) == total);
    CHECK(perm == best);
  }
}

TEST_CASE("matched errors: identical and swapped labels") {
  const Membership truth{{0, 0, 1, 1, 2, 2}, 3};
  const SubsampleIndex s(6, {0, 2, 4});
  const auto r = matched_errors(truth, truth, s);
  CHECK(r.delta == 0.0);
  const Membership swapped{{2, 2, 0, 0, 1, 1}, 3};
  const auto q = matched_errors(truth, swapped, s);
  CHECK(q.delta_S == 0.0);
  CHECK(q.delta_Sc == 0.0);
  CHECK(q.delta == 0.0);
  CHECK(q.delta_tilde_S == 0.0);
}

TEST_CASE("matched errors: hand-counted n=8 example") {
  const Membership truth{{0, 0, 0, 0, 1, 1, 1, 1}, 2};
  const Membership est{{0, 0, 0, 1, 1, 1, 1, 1}, 2};
  const auto r = matched_errors(truth, est, SubsampleIndex(8, {0, 1, 2, 3}));
  CHECK(r.delta_S == doctest::Approx(0.25));
  CHECK(r.delta_Sc == 0.0);
  CHECK(r.delta == doctest::Approx(0.125));
  // community 1 is absent from S and skipped
  CHECK(r.delta_tilde_S == doctest::Approx(0.25));
}

TEST_CASE("matched errors: S covering every node") {
  const Membership truth{{0, 1, 1, 0}, 2};
  const Membership est{{0, 1, 0, 0}, 2};
  const auto r = matched_errors(truth, est, SubsampleIndex::all(4));
  CHECK(r.delta_Sc == 0.0);
  CHECK(r.delta == doctest::Approx(0.25));
  CHECK(r.delta_S == doctest::Approx(0.25));
  CHECK(r.delta_tilde_S == doctest::Approx(0.5));
}

TEST_CASE("matched errors: length mismatch") {
  const Membership a{{0, 1}, 2}, b{{0, 1, 1}, 2};
  CHECK_THROWS_AS(matched_errors(a, b, SubsampleIndex::all(2)), InvalidParams);
  CHECK_THROWS_AS(confusion(a, b), InvalidParams);
}

TEST_CASE("confusion matrix counts") {
  const Membership t{{0, 0, 1, 1, 1}, 2}, e{{1, 0, 1, 1, 0}, 2};
  const auto cm = confusion(t, e);
  CHECK(cm(0, 0) == 1);
  CHECK(cm(0, 1) == 1);
  CHECK(cm(1, 0) == 1);
  CHECK(cm(1, 1) == 2);
  CHECK(cm.total() == 5);
}

TEST_CASE("one extra flip raises delta by at most 1/n") {
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const NodeId n = 20 + static_cast<NodeId>(uniform_below(rng, 40));
    const Label K = 2 + static_cast<Label>(uniform_below(rng, 3));
    Membership t{std::vector<Label>(n), K}, e{std::vector<Label>(n), K};
    for (NodeId i = 0; i < n; ++i) {
      t.labels[i] = static_cast<Label>(uniform_below(rng, K));
      e.labels[i] = uniform01(rng) < 0.7 ? t.labels[i] : static_cast<Label>(uniform_below(rng, K));
    }
    const auto all = SubsampleIndex::all(n);
    const double before = matched_errors(t, e, all).delta;
    const NodeId v = static_cast<NodeId>(uniform_below(rng, n));
    e.labels[v] = (e.labels[v] + 1) % K;
    const double after = matched_errors(t, e, all).delta;
    CHECK(after >= before - 1.0 / n - 1e-12);
    CHECK(after <= before + 1.0 / n + 1e-12);
  }
}

TEST_CASE("peak memory is reported") {
  CHECK(peak_memory_bytes() > 0);
}
