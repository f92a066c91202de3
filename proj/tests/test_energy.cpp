#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "wpn/energy.hpp"
#include "wpn/graph.hpp"
#include "wpn/oracle.hpp"
#include "wpn/rng.hpp"

using namespace wpn;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<long>(values.size()));
  long i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

// Independent oracle: central finite differences of the energy itself.
Eigen::VectorXd fd_gradient(const Graph& g, const Eigen::VectorXd& z,
                            const EnergyConfig& cfg, double h = 1e-5) {
  Eigen::VectorXd grad(z.size());
  for (long i = 0; i < z.size(); ++i) {
    Eigen::VectorXd hi = z, lo = z;
    hi(i) += h;
    lo(i) -= h;
    grad(i) = (mcds_energy(g, hi, cfg) - mcds_energy(g, lo, cfg)) / (2.0 * h);
  }
  return grad;
}

Eigen::VectorXd random_interior(std::mt19937_64& gen, int n) {
  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z(i) = uniform_in(gen, 0.05, 0.95);
  return z;
}

}  // namespace

TEST_CASE("domination energy on hand-checked configurations") {
  EnergyConfig cfg;
  Graph p3 = path_graph(3);
  CHECK(mcds_energy(p3, vec({0, 1, 0}), cfg) == 0.0);
  CHECK(mcds_energy(p3, vec({0, 0, 0}), cfg) == 1.5);
  Graph edgeless(3);
  CHECK(mcds_energy(edgeless, vec({1, 1, 1}), cfg) == 0.0);
  CHECK_THROWS_AS(mcds_energy(p3, vec({0, 1}), cfg), std::invalid_argument);
}

TEST_CASE("domination energy is non-negative on the unit box") {
  std::mt19937_64 gen(13);
  for (int trial = 0; trial < 100; ++trial) {
    Graph g = generate_random_geometric(2 + trial % 8, 0.5, gen());
    EnergyConfig cfg{uniform_in(gen, 0.1, 3.0), uniform_in(gen, 0.1, 3.0)};
    Eigen::VectorXd z(g.size());
    for (int i = 0; i < g.size(); ++i) z(i) = uniform_unit(gen);
    CHECK(mcds_energy(g, z, cfg) >= 0.0);
  }
}

TEST_CASE("zero energy at an indicator iff the set is an IPDS") {
  EnergyConfig cfg{1.7, 0.9};  // any positive gains
  OracleLimit limit;
  std::vector<Graph> corpus;
  for (int n = 1; n <= 5; ++n)
    for (Graph& g : enumerate_connected_graphs(n, limit)) corpus.push_back(g);
  corpus.push_back(path_graph(8));
  corpus.push_back(cycle_graph(8));
  corpus.push_back(star_graph(7));
  for (const Graph& g : corpus) {
    for (std::uint32_t mask = 0; mask < (1u << g.size()); ++mask) {
      VertexSet s = VertexSet::from_mask(mask, g.size());
      bool zero = mcds_energy(g, indicator(s, g.size()), cfg) == 0.0;
      CHECK(zero == is_independent_perfect_dominating(g, s));
    }
  }
}

TEST_CASE("gradient matches hand expansion on K2 with only the pair term") {
  Graph k2 = complete_graph(2);
  EnergyConfig cfg{1.0, 0.0};
  Eigen::VectorXd grad = mcds_energy_gradient(k2, vec({1, 1}), cfg);
  CHECK(grad(0) == 1.0);
  CHECK(grad(1) == 1.0);
}

TEST_CASE("gradient vanishes on edgeless graphs without the coverage term") {
  Graph edgeless(4);
  EnergyConfig cfg{2.5, 0.0};
  std::mt19937_64 gen(17);
  Eigen::VectorXd grad = mcds_energy_gradient(edgeless, random_interior(gen, 4), cfg);
  CHECK(grad.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("gradient agrees with central finite differences") {
  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 10; ++trial) {
    Graph g = generate_random_geometric(4 + trial % 5, 0.5, gen());
    EnergyConfig cfg{uniform_in(gen, 0.5, 2.0), uniform_in(gen, 0.5, 2.0)};
    for (int point = 0; point < 20; ++point) {
      Eigen::VectorXd z = random_interior(gen, g.size());
      Eigen::VectorXd exact = mcds_energy_gradient(g, z, cfg);
      Eigen::VectorXd approx = fd_gradient(g, z, cfg);
      double scale = std::max(1.0, exact.cwiseAbs().maxCoeff());
      CHECK((exact - approx).cwiseAbs().maxCoeff() / scale < 1e-6);
    }
  }
}

TEST_CASE("liapunov value at the sigmoid midpoint is exactly the reference") {
  HopfieldParams p;
  p.W = Eigen::MatrixXd::Zero(3, 3);
  p.b = Eigen::VectorXd::Zero(3);
  p.lambda = 1e6;
  CHECK(quadratic_liapunov(p, vec({0.5, 0.5, 0.5})) == 0.0);
}

TEST_CASE("liapunov barrier term shrinks as lambda grows") {
  HopfieldParams p;
  p.W = Eigen::MatrixXd::Zero(2, 2);
  p.b = Eigen::VectorXd::Zero(2);
  p.lambda = 10.0;
  double coarse = quadratic_liapunov(p, vec({0.9, 0.2}));
  p.lambda = 1000.0;
  double fine = quadratic_liapunov(p, vec({0.9, 0.2}));
  CHECK(coarse > 0.0);
  CHECK(fine > 0.0);
  CHECK(fine < coarse / 50.0);
  // with a huge slope the bias term dominates
  HopfieldParams single;
  single.W = Eigen::MatrixXd::Zero(1, 1);
  single.b = vec({1.0});
  single.lambda = 1e9;
  CHECK(quadratic_liapunov(single, vec({0.9})) ==
        doctest::Approx(-0.9).epsilon(1e-8));
}

TEST_CASE("liapunov rejects saturated components") {
  HopfieldParams p;
  p.W = Eigen::MatrixXd::Zero(2, 2);
  p.b = Eigen::VectorXd::Zero(2);
  CHECK_THROWS_AS(quadratic_liapunov(p, vec({0.5, 1.0})), std::domain_error);
  CHECK_THROWS_AS(quadratic_liapunov(p, vec({0.0, 0.5})), std::domain_error);
}

TEST_CASE("compiling an edgeless graph yields pure biases") {
  Graph edgeless(3);
  EnergyConfig cfg{1.0, 2.0};
  CompiledProblem prob = compile_mcds(edgeless, cfg);
  CHECK(prob.quadratic().W.cwiseAbs().maxCoeff() == 0.0);
  for (int i = 0; i < 3; ++i)
    CHECK(prob.quadratic().b(i) == 1.0);  // g_b / 2
  CHECK(prob.residual_order() == 0);
  CHECK(prob.residual().empty());
}

TEST_CASE("compiling K2 with only the pair term") {
  Graph k2 = complete_graph(2);
  EnergyConfig cfg{1.0, 0.0};
  CompiledProblem prob = compile_mcds(k2, cfg);
  CHECK(prob.quadratic().W(0, 1) == -1.0);
  CHECK(prob.quadratic().b.cwiseAbs().maxCoeff() == 0.0);
  CHECK(prob.residual_order() == 0);
}

TEST_CASE("the coverage term makes compiled problems cubic") {
  CompiledProblem prob = compile_mcds(path_graph(3), EnergyConfig{1.0, 1.0});
  CHECK(prob.residual_order() == 3);
  // the z0 z1 z2 monomial appears in (1 - z0 - z2)^2 (1 - z1)
  Monomial cross{0, 1, 2};
  CHECK(prob.residual().count(cross) == 1);
}

TEST_CASE("pair-term-only compilation stays in {0, -g_a}") {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 10; ++trial) {
    Graph g = generate_random_geometric(6, 0.5, gen());
    double g_a = uniform_in(gen, 0.5, 3.0);
    CompiledProblem prob = compile_mcds(g, EnergyConfig{g_a, 0.0});
    const Eigen::MatrixXd& w = prob.quadratic().W;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        CHECK(w(i, j) == w(j, i));
        CHECK((w(i, j) == 0.0 || w(i, j) == -g_a));
      }
  }
}

TEST_CASE("quadratic part plus residual reconstructs the energy exactly") {
  std::mt19937_64 gen(37);
  for (int trial = 0; trial < 30; ++trial) {
    Graph g = generate_random_geometric(3 + trial % 8, 0.6, gen());
    EnergyConfig cfg{uniform_in(gen, 0.5, 2.0), uniform_in(gen, 0.5, 2.0)};
    CompiledProblem prob = compile_mcds(g, cfg);
    Eigen::VectorXd z = random_interior(gen, g.size());
    double direct = mcds_energy(g, z, cfg);
    double reconstructed = prob.quadratic_energy(z) + prob.residual_value(z);
    CHECK(std::abs(direct - reconstructed) < 1e-12);
  }
}

TEST_CASE("compiled problems serialize and parse back") {
  CompiledProblem prob = compile_mcds(cycle_graph(5), EnergyConfig{1.5, 0.5});
  CompiledProblem back = parse_compiled_problem(format_compiled_problem(prob));
  CHECK(back.size() == prob.size());
  CHECK((back.quadratic().W - prob.quadratic().W).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.quadratic().b - prob.quadratic().b).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.quadratic().lambda == prob.quadratic().lambda);
  CHECK(back.constant() == prob.constant());
}

TEST_CASE("parameter validation") {
  HopfieldParams p;
  p.W = Eigen::MatrixXd::Zero(2, 2);
  p.b = Eigen::VectorXd::Zero(2);
  p.W(0, 0) = 1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.W(0, 0) = 0.0;
  p.W(0, 1) = 1.0;  // asymmetric
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  EnergyConfig bad{-1.0, 1.0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
