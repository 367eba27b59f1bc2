#include <doctest.h>

#include <cmath>

#include "predassign/error.hpp"
#include "predassign/generators.hpp"

using namespace predassign;

TEST_CASE("sbm block matrix: K=10 alpha=0.01 h=3") {
  const auto b = sbm_block_matrix(10, 0.01, 3.0);
  CHECK(b(0, 0) == doctest::Approx(0.025));
  CHECK(b(3, 7) == doctest::Approx(0.01 * 10.0 / 12.0));
}

TEST_CASE("sbm block matrix: h=1 is Erdos-Renyi") {
  const auto b = sbm_block_matrix(4, 0.07, 1.0);
  for (double p : b.entries()) CHECK(p == doctest::Approx(0.07));
}

TEST_CASE("sbm block matrix: K=2 alpha=0.1 h=4") {
  const auto b = sbm_block_matrix(2, 0.1, 4.0);
  CHECK(b(0, 0) == doctest::Approx(0.16));
  CHECK(b(1, 1) == doctest::Approx(0.16));
  CHECK(b(0, 1) == doctest::Approx(0.04));
}

TEST_CASE("sbm block matrix: mean entry is alpha, ratio is h") {
  for (Label K : {2u, 3u, 7u}) {
    for (double h : {1.5, 4.0, 9.0}) {
      const auto b = sbm_block_matrix(K, 0.02, h);
      double sum = 0.0;
      for (double p : b.entries()) sum += p;
      CHECK(sum / (K * K) == doctest::Approx(0.02));
      CHECK(b(0, 0) / b(0, 1) == doctest::Approx(h));
    }
  }
}

TEST_CASE("sbm block matrix: entry above one rejected") {
  CHECK_THROWS_AS(sbm_block_matrix(4, 0.5, 10.0), InvalidParams);
  CHECK_THROWS_AS(BlockMatrix(2, {0.1, 0.2, 0.3, 0.1}), InvalidParams);
}

TEST_CASE("dcbm block matrix") {
  const auto a = dcbm_block_matrix(20, 1.0, 5.0);
  CHECK(a(4, 4) == 1.0);
  CHECK(a(4, 5) == doctest::Approx(0.2));
  const auto b = dcbm_block_matrix(3, 1.0, INFINITY);
  CHECK(b(1, 1) == 1.0);
  CHECK(b(0, 2) == 0.0);
  const auto c = dcbm_block_matrix(3, 0.5, 2.0);
  CHECK(c(2, 2) == doctest::Approx(0.5));
  CHECK(c(2, 0) == doctest::Approx(0.25));
}

TEST_CASE("block sizes: largest remainder") {
  const std::vector<double> p{0.5, 0.25, 0.25};
  CHECK(block_sizes(10, p) == std::vector<NodeId>{5, 3, 2});
  const std::vector<double> q{1.0 / 3, 1.0 / 3, 1.0 / 3};
  CHECK(block_sizes(100, q) == std::vector<NodeId>{34, 33, 33});
  const std::vector<double> bad{0.5, 0.4};
  CHECK_THROWS_AS(block_sizes(10, bad), InvalidParams);
}

TEST_CASE("sample sbm: all-zero and all-one blocks") {
  const auto props = balanced_proportions(2);
  const auto empty = sample_sbm(50, BlockMatrix::constant(2, 0.0), props, 1);
  CHECK(empty.graph.num_edges() == 0);
  const auto full = sample_sbm(4, BlockMatrix::constant(2, 1.0), props, 1);
  CHECK(full.graph.num_edges() == 6);
  CHECK(full.membership.labels == std::vector<Label>{0, 0, 1, 1});
}

TEST_CASE("sample sbm: block densities within three standard errors") {
  const Label K = 4;
  const auto omega = sbm_block_matrix(K, 0.05, 3.0);
  const auto s = sample_sbm(2000, omega, balanced_proportions(K), 42);
  CHECK(s.graph.is_valid());
  std::vector<double> edges(K * K, 0.0);
  for (NodeId u = 0; u < 2000; ++u)
    for (NodeId v : s.graph.neighbors(u))
      if (u < v) {
        const Label a = s.membership.labels[u], b = s.membership.labels[v];
        edges[std::min(a, b) * K + std::max(a, b)] += 1.0;
      }
  for (Label a = 0; a < K; ++a) {
    for (Label b = a; b < K; ++b) {
      const double pairs = a == b ? 500.0 * 499.0 / 2.0 : 500.0 * 500.0;
      const double p = omega(a, b);
      const double rate = edges[a * K + b] / pairs;
      CHECK(std::abs(rate - p) <= 3.0 * std::sqrt(p * (1 - p) / pairs));
    }
  }
}

TEST_CASE("sample sbm: reproducible per seed") {
  const auto omega = sbm_block_matrix(3, 0.1, 2.0);
  const auto props = balanced_proportions(3);
  const auto a = sample_sbm(300, omega, props, 9);
  const auto b = sample_sbm(300, omega, props, 9);
  const auto c = sample_sbm(300, omega, props, 10);
  CHECK(a.graph == b.graph);
  CHECK_FALSE(a.graph == c.graph);
}

TEST_CASE("sample dcbm: constant theta reduces to sbm with scaled omega") {
  const auto omega0 = dcbm_block_matrix(3, 1.0, 4.0);
  const auto props = balanced_proportions(3);
  const auto d = sample_dcbm(600, omega0, props, 0.05, ThetaDistribution::constant(), 3);
  for (double t : d.theta) CHECK(t == 1.0);
  // expected edges = scale * sum_{i<j} omega0
  const auto sizes = block_sizes(600, props);
  double mass = 0.0;
  for (Label a = 0; a < 3; ++a)
    for (Label b = 0; b < 3; ++b)
      mass += omega0(a, b) * (a == b ? sizes[a] * (sizes[a] - 1.0) : static_cast<double>(sizes[a]) * sizes[b]);
  CHECK(d.scale * mass / 2.0 == doctest::Approx(0.05 * 600 * 599 / 2.0));
  const double target = 0.05 * 600 * 599 / 2.0;
  CHECK(std::abs(static_cast<double>(d.graph.num_edges()) - target) < 4.0 * std::sqrt(target));
}

TEST_CASE("sample dcbm: zero density is empty") {
  const auto omega0 = dcbm_block_matrix(2, 1.0, 3.0);
  const auto d = sample_dcbm(200, omega0, balanced_proportions(2), 0.0, ThetaDistribution::beta(1, 5), 1);
  CHECK(d.graph.num_edges() == 0);
}

TEST_CASE("sample dcbm: realised density near five percent") {
  const Label K = 4;
  const auto omega0 = dcbm_block_matrix(K, 1.0, 5.0);
  const auto d = sample_dcbm(2000, omega0, balanced_proportions(K), 0.05, ThetaDistribution::beta(1, 5), 8);
  CHECK(d.graph.is_valid());
  const double pairs = 2000.0 * 1999.0 / 2.0;
  const double se = std::sqrt(0.05 * 0.95 / pairs);
  const double dens = edge_density(d.graph);
  // capping can only lower the density
  CHECK(dens <= 0.05 + 3 * se);
  CHECK(dens >= 0.05 - 3 * se - static_cast<double>(d.capped_pairs) / pairs);
  for (Label k = 0; k < K; ++k) {
    double mx = 0.0;
    for (NodeId i = 0; i < 2000; ++i)
      if (d.membership.labels[i] == k) mx = std::max(mx, d.theta[i]);
    CHECK(mx == 1.0);
  }
}

TEST_CASE("theta draws lie in (0, 1]") {
  const auto m = contiguous_membership(std::vector<NodeId>{100, 50});
  const auto th = draw_theta(m, ThetaDistribution::beta(1, 5), 4);
  for (double t : th) {
    CHECK(t > 0.0);
    CHECK(t <= 1.0);
  }
}
