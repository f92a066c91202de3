#include "wpn/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

#include "wpn/cost.hpp"
#include "wpn/dynamics.hpp"
#include "wpn/energy.hpp"
#include "wpn/oracle.hpp"
#include "wpn/rng.hpp"
#include "wpn/wpn_sim.hpp"

namespace wpn {

Graph named_family(const std::string& name) {
  auto tail_int = [&](std::size_t from) {
    if (from >= name.size()) throw std::invalid_argument("bad family name " + name);
    return std::stoi(name.substr(from));
  };
  if (name.size() >= 2 && name[0] == 'P') return path_graph(tail_int(1));
  if (name.size() >= 2 && name[0] == 'C') return cycle_graph(tail_int(1));
  if (name.rfind("K1_", 0) == 0) return star_graph(tail_int(3));
  if (name.size() >= 2 && name[0] == 'K') return complete_graph(tail_int(1));
  throw std::invalid_argument("unknown family name " + name);
}

namespace {

std::string describe(const Graph& g) {
  std::string edges = render_edge_list(g);
  std::replace(edges.begin(), edges.end(), '\n', ';');
  return edges;
}

void record_failure(CheckResult& result, std::string reproducer) {
  result.passed = false;
  if (result.failures.size() < 8) result.failures.push_back(std::move(reproducer));
}

std::vector<Graph> build_corpus(const VerifyOptions& options) {
  std::vector<Graph> corpus;
  OracleLimit limit;
  for (int n = 1; n <= options.max_n; ++n) {
    std::vector<Graph> graphs = enumerate_connected_graphs(n, limit);
    corpus.insert(corpus.end(), graphs.begin(), graphs.end());
  }
  for (const std::string& name : options.families) corpus.push_back(named_family(name));
  return corpus;
}

CheckResult check_energy_ipds(const std::vector<Graph>& corpus, bool corrupt) {
  CheckResult result{"energy_ipds_equivalence"};
  EnergyConfig cfg;
  bool corrupted_once = !corrupt;
  for (const Graph& g : corpus) {
    if (g.size() > 16) continue;
    std::set<std::uint32_t> ipds_masks;
    for (const VertexSet& s : brute_force_ipds(g)) ipds_masks.insert(s.mask());
    for (std::uint32_t mask = 0; mask < (1u << g.size()); ++mask) {
      VertexSet s = VertexSet::from_mask(mask, g.size());
      double e = mcds_energy(g, indicator(s, g.size()), cfg);
      bool zero = e == 0.0;
      bool member = ipds_masks.count(mask) > 0;
      if (!corrupted_once) {
        member = !member;  // negative control: one deliberately wrong oracle
        corrupted_once = true;
      }
      ++result.checks_run;
      if (zero != member) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", e);
        record_failure(result, "graph \"" + describe(g) + "\" subset {" +
                                   to_string(s) + "}: energy " + buf +
                                   (member ? " but oracle says IPDS"
                                           : " but oracle says not IPDS"));
      }
    }
  }
  return result;
}

CheckResult check_flip_bound(std::uint64_t seed) {
  CheckResult result{"flip_bound"};
  std::mt19937_64 gen(seed);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 4 + trial % 7;  // 4..10 neurons
    HopfieldParams p;
    p.W = Eigen::MatrixXd::Zero(n, n);
    p.b = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        double w = static_cast<double>(uniform_int(gen, -2, 2));
        p.W(i, j) = w;
        p.W(j, i) = w;
      }
    Eigen::VectorXd z0(n);
    for (int i = 0; i < n; ++i) z0(i) = uniform_int(gen, 0, 1);
    std::uint64_t run_seed = gen();
    BinaryRunResult run = binary_async_run(p, z0, run_seed);
    wide_int bound = state_change_bound(p.W);
    ++result.checks_run;
    std::string instance = "n=" + std::to_string(n) + " trial=" +
                           std::to_string(trial) + " seed=" +
                           std::to_string(run_seed);
    if (!run.stable)
      record_failure(result, instance + ": run did not stabilize");
    if (static_cast<wide_int>(run.flips) > bound)
      record_failure(result, instance + ": " + std::to_string(run.flips) +
                                 " flips exceed bound " + to_string(bound));
    for (std::size_t i = 1; i < run.energy_after_flip.size(); ++i) {
      if (run.energy_after_flip[i] > run.energy_after_flip[i - 1]) {
        record_failure(result, instance + ": energy rose at flip " +
                                   std::to_string(i));
        break;
      }
    }
  }
  return result;
}

CheckResult check_distributed_centralized(const std::vector<Graph>& corpus,
                                          std::uint64_t seed) {
  CheckResult result{"distributed_centralized"};
  EnergyConfig ecfg;
  EngineConfig engine;  // gradient, synchronous
  ConvergenceCriterion crit;
  crit.max_steps = 1500;
  MacConfig mac;  // ideal TDMA
  SimConfig sim;
  sim.delta = 0.0;

  int used = 0;
  for (const Graph& g : corpus) {
    if (g.size() < 2) continue;
    if (++used > 24) break;  // keep the suite quick; acceptance goes larger
    CompiledProblem prob = compile_mcds(g, ecfg);
    NeuronState init = initial_state(prob, engine, seed + used);
    EpisodeResult central = run_episode(engine, prob, init, crit);
    WpnState wpn = embed(prob, g, engine);
    RunReport report = simulate(wpn, mac, crit, sim, seed + used, init.z);
    ++result.checks_run;
    std::string instance = "graph \"" + describe(g) + "\" seed " +
                           std::to_string(seed + used);
    if (report.energy_trajectory.size() != central.energy.size()) {
      record_failure(result, instance + ": trajectory lengths differ (" +
                                 std::to_string(report.energy_trajectory.size()) +
                                 " vs " + std::to_string(central.energy.size()) + ")");
      continue;
    }
    for (std::size_t i = 0; i < central.energy.size(); ++i) {
      if (std::abs(report.energy_trajectory[i] - central.energy[i]) > 1e-12) {
        record_failure(result, instance + ": energies differ at step " +
                                   std::to_string(i));
        break;
      }
    }
    if ((report.final_z - central.state.z).cwiseAbs().maxCoeff() > 1e-12)
      record_failure(result, instance + ": final states differ");
  }
  return result;
}

}  // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
  OracleLimit limit;
  if (options.max_n > limit.max_enumeration_n)
    throw std::invalid_argument("corpus cap " + std::to_string(options.max_n) +
                                " exceeds the enumeration limit " +
                                std::to_string(limit.max_enumeration_n));
  std::vector<Graph> corpus = build_corpus(options);
  std::vector<CheckResult> results;
  results.push_back(check_energy_ipds(corpus, options.corrupt));
  results.push_back(check_flip_bound(options.seed));
  results.push_back(check_distributed_centralized(corpus, options.seed));
  return results;
}

}  // namespace wpn
