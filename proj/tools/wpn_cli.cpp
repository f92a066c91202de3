// Command-line front end: solve (centralized and/or simulated-network runs),
// costs (analytic cost table), verify (cross-module invariant suite).
// Exit codes: 0 clean, 2 configuration/usage error, 3 numerical divergence.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "wpn/config.hpp"
#include "wpn/cost.hpp"
#include "wpn/dynamics.hpp"
#include "wpn/energy.hpp"
#include "wpn/errors.hpp"
#include "wpn/graph.hpp"
#include "wpn/oracle.hpp"
#include "wpn/verify.hpp"
#include "wpn/wpn_sim.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw wpn::ParseError("cannot open file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

wpn::EngineKind parse_engine(const std::string& name) {
  if (name == "gradient") return wpn::EngineKind::gradient;
  if (name == "hopfield") return wpn::EngineKind::hopfield;
  if (name == "mfa") return wpn::EngineKind::mfa;
  if (name == "threshold") return wpn::EngineKind::threshold;
  throw wpn::ParseError("config key engine.kind: unknown engine \"" + name + "\"");
}

struct SolveSetup {
  wpn::Graph graph;
  wpn::EnergyConfig energy;
  wpn::CompiledProblem problem;
  wpn::EngineConfig engine;
  wpn::ConvergenceCriterion criterion;
  wpn::MacConfig mac;
  wpn::SimConfig sim;
  std::vector<std::uint64_t> seeds;
  std::string mode;
  bool emit_trace = false;
  long long bytes_per_real = 4;
  long long group_size = 10;
};

SolveSetup build_setup(const wpn::ExperimentConfig& cfg) {
  SolveSetup s;
  const std::string source = cfg.get("problem", "source");
  if (source == "edge_list") {
    const std::string path = cfg.get("problem", "edge_list_path");
    if (path.empty())
      throw wpn::ParseError("config key problem.edge_list_path: required when "
                            "source = edge_list");
    s.graph = wpn::parse_edge_list(read_file(path));
  } else if (source == "generator") {
    s.graph = wpn::generate_random_geometric(
        static_cast<int>(cfg.get_long("problem", "n")),
        cfg.get_double("problem", "radius"),
        static_cast<std::uint64_t>(cfg.get_long("problem", "graph_seed")));
  } else {
    throw wpn::ParseError("config key problem.source: unknown source \"" + source +
                          "\"");
  }
  s.energy.g_a = cfg.get_double("problem", "g_a");
  s.energy.g_b = cfg.get_double("problem", "g_b");
  s.problem = wpn::compile_mcds(s.graph, s.energy);

  s.engine.kind = parse_engine(cfg.get("engine", "kind"));
  s.engine.lambda = cfg.get_double("engine", "lambda");
  s.problem.quadratic().lambda = s.engine.lambda;
  s.engine.dt = cfg.get_double("engine", "dt");
  const std::string mode = cfg.get("engine", "hopfield_mode");
  if (mode == "euler_memory")
    s.engine.hopfield_mode = wpn::HopfieldMode::euler_memory;
  else if (mode == "memoryless")
    s.engine.hopfield_mode = wpn::HopfieldMode::memoryless;
  else
    throw wpn::ParseError("config key engine.hopfield_mode: unknown mode \"" +
                          mode + "\"");
  const std::string order = cfg.get("engine", "update_order");
  if (order == "synchronous")
    s.engine.order = wpn::UpdateOrder::synchronous;
  else if (order == "async")
    s.engine.order = wpn::UpdateOrder::async;
  else
    throw wpn::ParseError("config key engine.update_order: unknown order \"" +
                          order + "\"");
  s.engine.mfa_tau = cfg.get_double("engine", "mfa_tau");
  s.engine.mfa_mu = cfg.get_double("engine", "mfa_mu");
  s.engine.schedule.t0 = cfg.get_double("engine", "t0");
  s.engine.schedule.alpha = cfg.get_double("engine", "alpha");
  s.engine.schedule.t_min = cfg.get_double("engine", "t_min");

  s.criterion.epsilon = cfg.get_double("criterion", "epsilon");
  s.criterion.max_steps = static_cast<int>(cfg.get_long("criterion", "max_steps"));
  s.criterion.max_episodes =
      static_cast<int>(cfg.get_long("criterion", "max_episodes"));

  s.mode = cfg.get("run", "mode");
  if (s.mode != "centralized" && s.mode != "distributed" && s.mode != "both")
    throw wpn::ParseError("config key run.mode: unknown mode \"" + s.mode + "\"");
  s.seeds = cfg.seed_list();
  s.emit_trace = cfg.get_bool("run", "emit_trace");

  const std::string mac_kind = cfg.get("mac", "kind");
  if (mac_kind == "ideal_tdma")
    s.mac.kind = wpn::MacConfig::Kind::ideal_tdma;
  else if (mac_kind == "slotted_aloha")
    s.mac.kind = wpn::MacConfig::Kind::slotted_aloha;
  else
    throw wpn::ParseError("config key mac.kind: unknown kind \"" + mac_kind + "\"");
  s.mac.slot_time = cfg.get_double("mac", "slot_time");
  s.mac.channels = static_cast<int>(cfg.get_long("mac", "channels"));
  s.mac.p_transmit = cfg.get_double("mac", "p_transmit");

  const std::string trigger = cfg.get("sim", "trigger");
  if (trigger == "periodic")
    s.sim.trigger = wpn::SimConfig::Trigger::periodic;
  else if (trigger == "on_receive")
    s.sim.trigger = wpn::SimConfig::Trigger::on_receive;
  else
    throw wpn::ParseError("config key sim.trigger: unknown trigger \"" + trigger +
                          "\"");
  s.sim.period = cfg.get_double("sim", "period");
  s.sim.delta = cfg.get_double("sim", "delta");
  s.sim.max_sim_time = cfg.get_double("sim", "max_sim_time");
  s.sim.max_updates = cfg.get_long("sim", "max_updates");
  s.sim.record_trace = s.emit_trace;

  s.bytes_per_real = cfg.get_long("cost", "bytes_per_real");
  s.group_size = cfg.get_long("cost", "group_size");
  return s;
}

std::string centralized_report(const SolveSetup& s, const wpn::MultistartResult& ms) {
  Eigen::VectorXd z = ms.best.state.z;
  if (s.engine.kind == wpn::EngineKind::mfa) z = wpn::to_unipolar(z);
  wpn::VertexSet active = wpn::binary_readout(z);
  std::string out;
  out += "mode centralized\n";
  out += "episodes " + std::to_string(ms.episodes.size()) + "\n";
  out += "best_seed " + std::to_string(ms.best_seed) + "\n";
  out += "best_energy " + fmt(ms.best.energy.back()) + "\n";
  out += std::string("best_converged ") + (ms.best.converged ? "true" : "false") +
         "\n";
  out += "best_steps " + std::to_string(ms.best.steps) + "\n";
  out += "final_z " + std::to_string(z.size());
  for (long i = 0; i < z.size(); ++i) out += " " + fmt(z(i));
  out += "\n";
  out += "active_set " + wpn::to_string(active) + "\n";
  out += std::string("validity.ipds ") +
         (is_independent_perfect_dominating(s.graph, active) ? "true" : "false") +
         "\n";
  out += std::string("validity.dominating ") +
         (is_dominating_set(s.graph, active) ? "true" : "false") + "\n";
  out += std::string("validity.connected ") +
         (is_connected_in_graph(s.graph, active) ? "true" : "false") + "\n";
  for (const wpn::EpisodeSummary& ep : ms.episodes) {
    out += "episode " + std::to_string(ep.seed) + " " + fmt(ep.final_energy) + " " +
           (ep.converged ? "true" : "false") + " " + std::to_string(ep.steps) + "\n";
  }
  return out;
}

std::string cost_table_for(const SolveSetup& s) {
  wpn::CostInputs in;
  in.n_neurons = s.graph.size();
  in.episodes = static_cast<long long>(s.seeds.size());
  in.bytes_per_real = s.bytes_per_real;
  in.group_size = s.group_size;
  in.msg_time = s.mac.slot_time;
  in.channels = s.mac.channels;
  std::string table = wpn::format_cost_table(in);
  try {
    table += "output\tstate_change_bound\t" +
             wpn::to_string(wpn::state_change_bound(s.problem.quadratic().W)) + "\n";
  } catch (const std::invalid_argument&) {
    // non-integer compiled weights: the bound only covers integer nets
  }
  return table;
}

int cmd_solve(const std::string& config_path, std::optional<std::uint64_t> seed,
              const std::string& out_dir) {
  wpn::ExperimentConfig cfg = config_path.empty()
                                  ? wpn::ExperimentConfig::defaults()
                                  : wpn::ExperimentConfig::parse_file(config_path);
  if (seed) cfg.set("run", "seeds", std::to_string(*seed));
  SolveSetup s = build_setup(cfg);
  fs::create_directories(out_dir);
  write_file(fs::path(out_dir) / "costs.tsv", cost_table_for(s));

  if (s.mode == "centralized" || s.mode == "both") {
    wpn::MultistartResult ms =
        wpn::run_multistart(s.engine, s.problem, s.criterion, s.seeds);
    write_file(fs::path(out_dir) / "report.txt", centralized_report(s, ms));
    write_file(fs::path(out_dir) / "energy.tsv",
               wpn::format_trajectory(ms.best.energy));
    std::cout << "centralized: best energy " << fmt(ms.best.energy.back())
              << " (seed " << ms.best_seed << ")\n";
  }
  if (s.mode == "distributed" || s.mode == "both") {
    wpn::WpnState wpn = wpn::embed(s.problem, s.graph, s.engine);
    for (std::uint64_t run_seed : s.seeds) {
      wpn::NeuronState init = wpn::initial_state(s.problem, s.engine, run_seed);
      wpn::RunReport report =
          wpn::simulate(wpn, s.mac, s.criterion, s.sim, run_seed, init.z);
      fs::path run_dir = fs::path(out_dir) / ("run-" + std::to_string(run_seed));
      fs::create_directories(run_dir);
      write_file(run_dir / "report.txt", wpn::format_run_report(report));
      write_file(run_dir / "energy.tsv",
                 wpn::format_trajectory(report.energy_trajectory));
      if (s.emit_trace) write_file(run_dir / "trace.tsv", wpn::format_trace(report));
      std::cout << "distributed seed " << run_seed << ": "
                << report.total_messages << " transmissions, final energy "
                << fmt(report.energy_trajectory.back()) << ", ipds "
                << (report.validity.ipds ? "true" : "false") << "\n";
    }
  }
  return 0;
}

int cmd_costs(long long n, long long episodes, long long bytes_per_real,
              long long group_size, double msg_time, long long channels,
              const std::string& out_dir) {
  wpn::CostInputs in;
  in.n_neurons = n;
  in.episodes = episodes;
  in.bytes_per_real = bytes_per_real;
  in.group_size = group_size;
  in.msg_time = msg_time;
  in.channels = channels;
  std::string table = wpn::format_cost_table(in);
  std::cout << table;
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "costs.tsv", table);
  }
  return 0;
}

int cmd_verify(int max_n, const std::string& families, std::uint64_t seed,
               bool corrupt) {
  wpn::VerifyOptions options;
  options.max_n = max_n;
  options.seed = seed;
  options.corrupt = corrupt;
  options.families.clear();
  std::istringstream in(families);
  std::string token;
  while (std::getline(in, token, ','))
    if (!token.empty()) options.families.push_back(token);

  std::vector<wpn::CheckResult> results = wpn::run_verification(options);
  long total_checks = 0;
  bool all_passed = true;
  for (const wpn::CheckResult& r : results) {
    total_checks += r.checks_run;
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.checks_run
              << " checks)\n";
    for (const std::string& repro : r.failures)
      std::cout << "  reproducer: " << repro << "\n";
    all_passed = all_passed && r.passed;
  }
  if (total_checks == 0)
    std::cout << "warning: empty corpus, zero checks run\n";
  return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neural optimization on simulated wireless processor networks"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand(
      "solve", "Run the configured solver and write report artifacts");
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed_value = 0;
  bool seed_given = false;
  bool help_config = false;
  solve->add_option("--config", config_path, "experiment config file");
  solve->add_option("--out", out_dir, "output directory")->capture_default_str();
  solve->add_option("--seed", seed_value, "override run.seeds with one seed");
  solve->add_flag("--help-config", help_config,
                  "print every config key with its default and exit");

  auto* costs = app.add_subcommand("costs", "Print the analytic cost table");
  long long n = 1, episodes = 1, bytes_per_real = 4, group_size = 10, channels = 1;
  double msg_time = 1e-6;
  std::string costs_out;
  costs->add_option("--n", n, "neuron/mote count")->capture_default_str();
  costs->add_option("--episodes", episodes, "convergence episodes")
      ->capture_default_str();
  costs->add_option("--bytes-per-real", bytes_per_real, "bytes per stored real")
      ->capture_default_str();
  costs->add_option("--group-size", group_size, "motes per cluster")
      ->capture_default_str();
  costs->add_option("--msg-time", msg_time, "seconds per message")
      ->capture_default_str();
  costs->add_option("--channels", channels, "parallel channels")
      ->capture_default_str();
  costs->add_option("--out", costs_out, "also write costs.tsv here");

  auto* verify = app.add_subcommand("verify", "Run the invariant suite");
  int max_n = 6;
  std::string families = "P3,C4,K1_3,K1_5";
  std::uint64_t verify_seed = 1;
  bool corrupt = false;
  verify->add_option("--max-n", max_n, "enumerate connected graphs up to this size")
      ->capture_default_str();
  verify->add_option("--families", families, "comma-separated named families")
      ->capture_default_str();
  verify->add_option("--seed", verify_seed, "seed for randomized checks")
      ->capture_default_str();
  verify->add_flag("--corrupt", corrupt,
                   "negative control: inject one wrong expectation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (solve->parsed()) {
      if (help_config) {
        std::cout << wpn::format_config_help();
        return 0;
      }
      if (solve->count("--seed")) seed_given = true;
      return cmd_solve(config_path,
                       seed_given ? std::optional<std::uint64_t>(seed_value)
                                  : std::nullopt,
                       out_dir);
    }
    if (costs->parsed())
      return cmd_costs(n, episodes, bytes_per_real, group_size, msg_time, channels,
                       costs_out);
    if (verify->parsed()) return cmd_verify(max_n, families, verify_seed, corrupt);
  } catch (const wpn::DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return 3;
  } catch (const wpn::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
