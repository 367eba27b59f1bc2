#include <doctest.h>

#include "oracles.hpp"
#include "predassign/assignment.hpp"
#include "predassign/error.hpp"
#include "predassign/generators.hpp"

using namespace predassign;

namespace {

// Oracle labels of S taken from the truth.
std::vector<Label> truth_on(const Membership& truth, const SubsampleIndex& s) {
  std::vector<Label> out;
  for (NodeId v : s.selected()) out.push_back(truth.labels[v]);
  return out;
}

std::vector<Label> truth_off(const Membership& truth, const SubsampleIndex& s) {
  std::vector<Label> out;
  for (NodeId v : s.complement()) out.push_back(truth.labels[v]);
  return out;
}

SparseGraph two_cliques(NodeId size) {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId b = 0; b < 2 * size; b += size)
    for (NodeId i = 0; i < size; ++i)
      for (NodeId j = i + 1; j < size; ++j) e.emplace_back(b + i, b + j);
  return SparseGraph::from_edges(2 * size, e);
}

}  // namespace

TEST_CASE("estimate theta: hand example") {
  const std::vector<std::pair<NodeId, NodeId>> e{{4, 0}, {4, 2}, {4, 3}, {0, 1}};
  const auto g = SparseGraph::from_edges(6, e);
  const SubsampleIndex s(6, {0, 1, 2, 3});
  const std::vector<Label> lab{0, 0, 1, 1};
  const auto th = estimate_theta(g, s, lab, 2);
  REQUIRE(th.rows() == 2);
  CHECK(th.value(0, 0) == doctest::Approx(0.5));
  CHECK(th.value(0, 1) == doctest::Approx(1.0));
  CHECK(th.value(1, 0) == 0.0);  // node 5 has no edges into S
  CHECK(th.value(1, 1) == 0.0);
}

TEST_CASE("estimate theta: complete graph gives all-one rows") {
  const auto g = sample_sbm(12, BlockMatrix::constant(1, 1.0), balanced_proportions(1), 1).graph;
  const SubsampleIndex s(12, {0, 3, 5, 7, 8});
  const std::vector<Label> lab{0, 1, 2, 1, 0};
  const auto th = estimate_theta(g, s, lab, 3);
  for (std::size_t i = 0; i < th.rows(); ++i)
    for (Label k = 0; k < 3; ++k) CHECK(th.value(i, k) == 1.0);
}

TEST_CASE("estimate theta: empty community is an error") {
  const auto g = two_cliques(4);
  const SubsampleIndex s(8, {0, 1, 4});
  const std::vector<Label> lab{0, 0, 0};
  try {
    estimate_theta(g, s, lab, 2);
    FAIL("expected EmptyEstimatedCommunity");
  } catch (const EmptyEstimatedCommunity& ex) {
    CHECK(ex.community() == 1);
  }
}

TEST_CASE("closest community: identical columns tie to label 0") {
  const auto g = sample_sbm(10, BlockMatrix::constant(1, 1.0), balanced_proportions(1), 1).graph;
  const SubsampleIndex s(10, {0, 1});
  const std::vector<Label> lab{0, 1};
  const auto th = estimate_theta(g, s, lab, 2);
  for (Label l : closest_community_assign(g, s, th)) CHECK(l == 0);
}

TEST_CASE("closest community: two cliques with half of each sampled") {
  const auto g = two_cliques(8);
  const SubsampleIndex s(16, {0, 1, 2, 3, 8, 9, 10, 11});
  const std::vector<Label> lab{0, 0, 0, 0, 1, 1, 1, 1};
  const auto th = estimate_theta(g, s, lab, 2);
  const auto out = closest_community_assign(g, s, th);
  CHECK(out == std::vector<Label>{0, 0, 0, 0, 1, 1, 1, 1});
}

TEST_CASE("closest community: SBM n=400 against dense distances") {
  const auto sbm = sample_sbm(400, sbm_block_matrix(3, 0.2, 4.0), balanced_proportions(3), 17);
  const auto s = srs(400, 150, 5);
  const auto lab = truth_on(sbm.membership, s);
  const auto th = estimate_theta(sbm.graph, s, lab, 3);
  const auto fast = closest_community_assign(sbm.graph, s, th);
  CHECK(fast == oracle::closest_community_dense(sbm.graph, s, lab, 3));
  CHECK(fast == truth_off(sbm.membership, s));
}

TEST_CASE("closest community: result independent of thread count") {
  const auto sbm = sample_sbm(3000, sbm_block_matrix(4, 0.02, 3.0), balanced_proportions(4), 2);
  const auto s = srs(3000, 600, 8);
  const auto lab = truth_on(sbm.membership, s);
  const auto th1 = estimate_theta(sbm.graph, s, lab, 4, 1);
  const auto th4 = estimate_theta(sbm.graph, s, lab, 4, 4);
  CHECK(closest_community_assign(sbm.graph, s, th1, 1) == closest_community_assign(sbm.graph, s, th4, 4));
}

TEST_CASE("estimate omega: hand examples") {
  const auto none = SparseGraph::from_edges(4, std::vector<std::pair<NodeId, NodeId>>{});
  const auto z = estimate_omega(none, SubsampleIndex(4, {0, 1}), std::vector<Label>{0, 1}, 2);
  for (Label a = 0; a < 2; ++a)
    for (Label b = 0; b < 2; ++b) CHECK(z(a, b) == 0);

  const std::vector<std::pair<NodeId, NodeId>> tri{{0, 1}, {1, 2}, {2, 0}};
  const auto g = SparseGraph::from_edges(3, tri);
  const auto o = estimate_omega(g, SubsampleIndex::all(3), std::vector<Label>{0, 0, 1}, 2);
  CHECK(o(0, 0) == 2);
  CHECK(o(0, 1) == 2);
  CHECK(o(1, 0) == 2);
  CHECK(o(1, 1) == 0);

  const auto er = oracle::erdos_renyi(50, 0.2, 1);
  const SubsampleIndex s(50, {1, 2, 3, 10, 11, 20, 30, 40});
  const auto one = estimate_omega(er, s, std::vector<Label>(8, 0), 1);
  CHECK(one(0, 0) == 2 * induced_subgraph(er, s).num_edges());
}

TEST_CASE("node popularity: K=1 labels everything 0") {
  const auto g = oracle::erdos_renyi(40, 0.3, 2);
  const auto s = srs(40, 10, 1);
  const std::vector<Label> lab(10, 0);
  const auto om = estimate_omega(g, s, lab, 1);
  for (Label l : node_popularity_assign(g, s, lab, om).labels) CHECK(l == 0);
}

TEST_CASE("node popularity: one-hot profiles") {
  // S = two cliques {0,1,2} and {3,4,5}; node 6 links only into the second
  std::vector<std::pair<NodeId, NodeId>> e{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {6, 4}, {6, 5}};
  const auto g = SparseGraph::from_edges(7, e);
  const SubsampleIndex s(7, {0, 1, 2, 3, 4, 5});
  const std::vector<Label> lab{0, 0, 0, 1, 1, 1};
  const auto om = estimate_omega(g, s, lab, 2);
  const auto out = node_popularity_assign(g, s, lab, om);
  CHECK(out.labels == std::vector<Label>{1});
  CHECK(out.fallback_count == 0);
}

TEST_CASE("node popularity: fallback and disconnected community") {
  std::vector<std::pair<NodeId, NodeId>> e{{0, 1}, {2, 3}, {3, 4}, {2, 4}};
  const auto g = SparseGraph::from_edges(6, e);
  const SubsampleIndex s(6, {0, 1, 2, 3, 4});
  const auto om = estimate_omega(g, s, std::vector<Label>{0, 0, 1, 1, 1}, 2);
  const auto out = node_popularity_assign(g, s, std::vector<Label>{0, 0, 1, 1, 1}, om);
  CHECK(out.fallback_count == 1);
  CHECK(out.labels == std::vector<Label>{1});  // largest estimated community

  const SubsampleIndex s2(6, {0, 2, 3, 5});
  const std::vector<Label> lab2{0, 1, 1, 0};
  const auto om3 = estimate_omega(g, s2, lab2, 2);
  try {
    node_popularity_assign(g, s2, lab2, om3);
    FAIL("expected DisconnectedEstimatedCommunity");
  } catch (const DisconnectedEstimatedCommunity& ex) {
    CHECK(ex.community() == 0);
  }
}

TEST_CASE("node popularity: DCBM n=400 against the direct formula") {
  // low-theta nodes with no edge into S dominate the error, so a dense design
  // (50%) is needed to bring delta_Sc under 2%
  double total = 0.0;
  const int reps = 20;
  for (int r = 0; r < reps; ++r) {
    const auto d = sample_dcbm(400, dcbm_block_matrix(3, 1.0, 6.0), balanced_proportions(3), 0.5,
                               ThetaDistribution::beta(1, 5), derive_seed(5, r));
    const auto s = srs(400, 150, derive_seed(6, r));
    const auto lab = truth_on(d.membership, s);
    const auto om = estimate_omega(d.graph, s, lab, 3);
    const auto out = node_popularity_assign(d.graph, s, lab, om);
    CHECK(out.labels == oracle::node_popularity_dense(d.graph, s, lab, 3));
    const Membership est_sc{out.labels, 3};
    const Membership truth_sc{truth_off(d.membership, s), 3};
    total += matched_errors(truth_sc, est_sc, SubsampleIndex::all(static_cast<NodeId>(est_sc.size()))).delta;
  }
  MESSAGE("mean delta_Sc = " << total / reps);
  CHECK(total / reps <= 0.02);
}

TEST_CASE("predictive assign: m = n equals full-network clustering") {
  const auto sbm = sample_sbm(300, sbm_block_matrix(3, 0.1, 5.0), balanced_proportions(3), 4);
  PredictiveConfig cfg;
  cfg.m = 300;
  cfg.seed = 9;
  const auto res = predictive_assign(sbm.graph, 3, cfg);
  CHECK(res.subsample.complement().empty());
  CHECK(res.labels == cluster_full_network(sbm.graph, 3, SpectralVariant::Sc, cfg.spectral, derive_seed(9, 2)));
}

TEST_CASE("predictive assign: every method and model runs and is deterministic") {
  const auto sbm = sample_sbm(1500, sbm_block_matrix(3, 0.05, 5.0), balanced_proportions(3), 6);
  for (auto method : {SpectralVariant::Sc, SpectralVariant::ScLap, SpectralVariant::Rsc, SpectralVariant::RscLap,
                      SpectralVariant::Basc}) {
    for (auto model : {Model::Sbm, Model::Dcbm}) {
      for (auto sampler : {Sampler::Srs, Sampler::Rws}) {
        PredictiveConfig cfg{model, sampler, 500, method, 3, 1, {}};
        const auto a = predictive_assign(sbm.graph, 3, cfg);
        cfg.threads = 3;
        const auto b = predictive_assign(sbm.graph, 3, cfg);
        CHECK(a.labels == b.labels);
        const auto r = matched_errors(sbm.membership, a.labels, a.subsample);
        CHECK(r.delta < 0.05);
      }
    }
  }
}

TEST_CASE("predictive assign: invalid configurations") {
  const auto g = oracle::erdos_renyi(30, 0.2, 1);
  PredictiveConfig cfg;
  cfg.m = 31;
  CHECK_THROWS_AS(predictive_assign(g, 2, cfg), InvalidParams);
  cfg.m = 1;
  CHECK_THROWS_AS(predictive_assign(g, 2, cfg), InvalidParams);
  cfg.m = 10;
  CHECK_THROWS_AS(predictive_assign(g, 0, cfg), InvalidParams);
  CHECK(parse_model("dcbm") == Model::Dcbm);
  CHECK_THROWS_AS(parse_model("ppm"), InvalidParams);
}
