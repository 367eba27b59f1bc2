#include <doctest.h>

#include <cmath>
#include <map>

#include "oracles.hpp"
#include "predassign/error.hpp"
#include "predassign/generators.hpp"
#include "predassign/sampling.hpp"

using namespace predassign;

namespace {

void check_index(const SubsampleIndex& s, NodeId n, NodeId m) {
  REQUIRE(s.n() == n);
  REQUIRE(s.m() == m);
  CHECK(s.selected().size() + s.complement().size() == n);
  CHECK(std::is_sorted(s.selected().begin(), s.selected().end()));
  CHECK(std::is_sorted(s.complement().begin(), s.complement().end()));
  for (NodeId i = 0; i < s.m(); ++i) {
    CHECK(s.contains(s.selected()[i]));
    CHECK(s.position(s.selected()[i]) == i);
  }
  for (NodeId i = 0; i < s.complement().size(); ++i) {
    CHECK_FALSE(s.contains(s.complement()[i]));
    CHECK(s.position(s.complement()[i]) == i);
  }
}

SparseGraph star(NodeId leaves) {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return SparseGraph::from_edges(leaves + 1, e);
}

}  // namespace

TEST_CASE("srs: m = n selects everything") {
  const auto s = srs(12, 12, 3);
  check_index(s, 12, 12);
  CHECK(s.complement().empty());
}

TEST_CASE("srs: single node frequencies are uniform") {
  std::array<int, 3> hits{};
  for (std::uint64_t seed = 0; seed < 30000; ++seed) ++hits[srs(3, 1, seed).selected()[0]];
  for (int h : hits) CHECK(std::abs(h / 30000.0 - 1.0 / 3.0) < 0.02);
}

TEST_CASE("srs: deterministic and validated") {
  CHECK(srs(10, 4, 7) == srs(10, 4, 7));
  check_index(srs(10, 4, 7), 10, 4);
  CHECK_THROWS_AS(srs(10, 11, 1), InvalidParams);
  CHECK_THROWS_AS(srs(10, 0, 1), InvalidParams);
}

TEST_CASE("srs: chi-squared over all 3-subsets of 6") {
  std::map<std::vector<NodeId>, int> freq;
  const int draws = 20000;
  for (int seed = 0; seed < draws; ++seed) {
    const auto s = srs(6, 3, static_cast<std::uint64_t>(seed));
    ++freq[std::vector<NodeId>(s.selected().begin(), s.selected().end())];
  }
  REQUIRE(freq.size() == 20);
  const double expect = draws / 20.0;
  double chi2 = 0.0;
  for (const auto& [k, c] : freq) chi2 += (c - expect) * (c - expect) / expect;
  CHECK(chi2 < 43.82);  // 0.999 quantile, 19 degrees of freedom
}

TEST_CASE("rws: complete graph, m = n") {
  const auto g = sample_sbm(25, BlockMatrix::constant(1, 1.0), balanced_proportions(1), 1).graph;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto r = random_walk_sample(g, 25, seed);
    check_index(r.index, 25, 25);
    CHECK(r.srs_filled == 0);
  }
}

TEST_CASE("rws: star graph favours the hub") {
  const auto g = star(9);
  int hub = 0, leaf1 = 0;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const auto r = random_walk_sample(g, 2, seed);
    CHECK((r.index.contains(0)));  // any two-node walk on a star passes the hub
    hub += r.index.contains(0);
    leaf1 += r.index.contains(1);
  }
  CHECK(hub > 4 * leaf1);
}

TEST_CASE("rws: m = 1 is the uniform start") {
  const auto g = star(4);
  std::array<int, 5> hits{};
  for (std::uint64_t seed = 0; seed < 5000; ++seed) {
    const auto r = random_walk_sample(g, 1, seed);
    REQUIRE(r.index.m() == 1);
    ++hits[r.index.selected()[0]];
  }
  for (int h : hits) CHECK(std::abs(h / 5000.0 - 0.2) < 0.03);
}

TEST_CASE("rws: isolated nodes force restarts") {
  const auto g = SparseGraph::from_edges(30, std::vector<std::pair<NodeId, NodeId>>{});
  const auto r = random_walk_sample(g, 20, 5);
  check_index(r.index, 30, 20);
  CHECK(r.restarts > 0);
}

TEST_CASE("rws: small component triggers stall and still completes") {
  // a triangle plus many isolated nodes; walks stall quickly in the triangle
  const std::vector<std::pair<NodeId, NodeId>> e{{0, 1}, {1, 2}, {2, 0}};
  const auto g = SparseGraph::from_edges(8, e);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto r = random_walk_sample(g, 8, seed);
    check_index(r.index, 8, 8);
  }
  CHECK_THROWS_AS(random_walk_sample(g, 9, 1), InvalidParams);
}

TEST_CASE("rws: deterministic per seed") {
  const auto g = oracle::erdos_renyi(200, 0.03, 4);
  CHECK(random_walk_sample(g, 50, 11).index == random_walk_sample(g, 50, 11).index);
}

TEST_CASE("resolve m") {
  CHECK(resolve_m("150", 1000) == 150);
  CHECK(resolve_m("n", 1000) == 1000);
  CHECK(resolve_m("n^0.5", 10000) == 100);
  CHECK(resolve_m("n^0.85", 4000) == static_cast<NodeId>(std::lround(std::pow(4000.0, 0.85))));
  CHECK_THROWS_AS(resolve_m("n^", 10), InvalidParams);
  CHECK_THROWS_AS(resolve_m("2000", 1000), InvalidParams);
  CHECK_THROWS_AS(resolve_m("abc", 1000), InvalidParams);
}

TEST_CASE("sampler names") {
  CHECK(parse_sampler("rws") == Sampler::Rws);
  CHECK(to_string(Sampler::Srs) == "srs");
  CHECK_THROWS_AS(parse_sampler("bfs"), InvalidParams);
}
