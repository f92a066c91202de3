#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "wpn/energy.hpp"
#include "wpn/graph.hpp"
#include "wpn/oracle.hpp"
#include "wpn/rng.hpp"

using namespace wpn;

TEST_CASE("minimum connected dominating sets of the small families") {
  std::vector<VertexSet> p3 = brute_force_mcds(path_graph(3));
  REQUIRE(p3.size() == 1);
  CHECK(p3[0] == VertexSet({1}));

  std::vector<VertexSet> c4 = brute_force_mcds(cycle_graph(4));
  REQUIRE(c4.size() == 4);
  std::set<std::uint32_t> masks;
  for (const VertexSet& s : c4) masks.insert(s.mask());
  CHECK(masks == std::set<std::uint32_t>{0b0011, 0b0110, 0b1100, 0b1001});

  std::vector<VertexSet> star = brute_force_mcds(star_graph(3));
  REQUIRE(star.size() == 1);
  CHECK(star[0] == VertexSet({0}));
}

TEST_CASE("mcds search rejects disconnected graphs and oversize inputs") {
  Graph two(2);  // no edge
  CHECK_THROWS_AS(brute_force_mcds(two), std::invalid_argument);
  CHECK_THROWS_AS(brute_force_mcds(path_graph(17)), std::invalid_argument);
}

TEST_CASE("mcds results re-validate through the predicates") {
  std::mt19937_64 gen(41);
  int found = 0;
  for (int trial = 0; trial < 20 && found < 8; ++trial) {
    Graph g = generate_random_geometric(7, 0.55, gen());
    if (!g.is_connected()) continue;
    ++found;
    for (const VertexSet& s : brute_force_mcds(g)) {
      CHECK(is_dominating_set(g, s));
      CHECK(is_connected_in_graph(g, s));
    }
  }
  CHECK(found > 0);
}

TEST_CASE("independent perfect dominating sets of the small families") {
  std::vector<VertexSet> p3 = brute_force_ipds(path_graph(3));
  REQUIRE(p3.size() == 1);
  CHECK(p3[0] == VertexSet({1}));

  CHECK(brute_force_ipds(cycle_graph(4)).empty());

  Graph edgeless(4);
  std::vector<VertexSet> all = brute_force_ipds(edgeless);
  REQUIRE(all.size() == 1);
  CHECK(all[0] == VertexSet({0, 1, 2, 3}));
}

TEST_CASE("stable-state enumeration on a two-unit net") {
  HopfieldParams p;
  p.W.resize(2, 2);
  p.W << 0, 1, 1, 0;
  p.b.resize(2);
  p.b << -0.5, -0.5;
  std::vector<Eigen::VectorXd> stable = enumerate_stable_states(p);
  REQUIRE(stable.size() == 2);
  CHECK(stable[0].sum() == 0.0);  // (0,0)
  CHECK(stable[1].sum() == 2.0);  // (1,1)
}

TEST_CASE("all-negative biases pin every unit off") {
  HopfieldParams p;
  p.W = Eigen::MatrixXd::Zero(4, 4);
  p.b = Eigen::VectorXd::Constant(4, -0.25);
  std::vector<Eigen::VectorXd> stable = enumerate_stable_states(p);
  REQUIRE(stable.size() == 1);
  CHECK(stable[0].cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("every enumerated state survives a synchronous update") {
  std::mt19937_64 gen(43);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 3 + trial % 5;
    HopfieldParams p;
    p.W = Eigen::MatrixXd::Zero(n, n);
    p.b.resize(n);
    for (int i = 0; i < n; ++i) {
      p.b(i) = uniform_in(gen, -2.0, 2.0);
      for (int j = i + 1; j < n; ++j) {
        double w = uniform_in(gen, -2.0, 2.0);
        p.W(i, j) = w;
        p.W(j, i) = w;
      }
    }
    for (const Eigen::VectorXd& z : enumerate_stable_states(p)) {
      for (int i = 0; i < n; ++i) {
        double net = p.W.row(i).dot(z) + p.b(i);
        CHECK((net > 0.0 ? 1.0 : 0.0) == z(i));
      }
    }
  }
}

TEST_CASE("ipds indicators are exactly the zero-energy subsets") {
  std::mt19937_64 gen(47);
  EnergyConfig cfg{1.3, 2.1};
  for (int trial = 0; trial < 15; ++trial) {
    Graph g = generate_random_geometric(3 + trial % 6, 0.6, gen());
    std::set<std::uint32_t> from_oracle;
    for (const VertexSet& s : brute_force_ipds(g)) from_oracle.insert(s.mask());
    std::set<std::uint32_t> from_energy;
    for (std::uint32_t mask = 0; mask < (1u << g.size()); ++mask) {
      VertexSet s = VertexSet::from_mask(mask, g.size());
      if (mcds_energy(g, indicator(s, g.size()), cfg) == 0.0)
        from_energy.insert(mask);
    }
    CHECK(from_oracle == from_energy);
  }
}

TEST_CASE("connected graph counts match the known sequence") {
  OracleLimit limit;
  CHECK(enumerate_connected_graphs(1, limit).size() == 1);
  CHECK(enumerate_connected_graphs(2, limit).size() == 1);
  CHECK(enumerate_connected_graphs(3, limit).size() == 2);
  CHECK(enumerate_connected_graphs(4, limit).size() == 6);
  CHECK(enumerate_connected_graphs(5, limit).size() == 21);
}

TEST_CASE("enumerated graphs are connected and refuse oversize requests") {
  OracleLimit limit;
  for (const Graph& g : enumerate_connected_graphs(4, limit))
    CHECK(g.is_connected());
  CHECK_THROWS_AS(enumerate_connected_graphs(7, limit), std::invalid_argument);
}
