#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wpn/dynamics.hpp"
#include "wpn/energy.hpp"
#include "wpn/graph.hpp"

namespace wpn {

inline constexpr int kBroadcastDst = -1;

/// One payload exchanged between motes: a neuron's new output value (or its
/// coverage residual, for exact-gradient runs) stamped with the sender's
/// update index so stale deliveries never regress a cache.
struct Message {
  int src = 0;
  int dst = kBroadcastDst;
  int neuron = 0;
  double value = 0.0;
  bool is_aux = false;  // true: value is the coverage residual r_i
  long update_index = 0;
  int channel = 0;
  double enqueue_time = 0.0;
  double transmit_time = 0.0;
  double deliver_time = 0.0;
};

struct MacConfig {
  enum class Kind { ideal_tdma, slotted_aloha };
  Kind kind = Kind::ideal_tdma;
  double slot_time = 1e-6;  // simulated seconds; also one message's airtime
  int channels = 1;
  double p_transmit = 0.5;  // slotted_aloha only
  void validate() const;
};

/// One processing node hosting one neuron. Stores only its own parameters
/// and per-coupled-neuron caches; no global weight matrix exists anywhere
/// in the simulator.
struct Mote {
  int id = 0;
  Eigen::Vector2d position{0.0, 0.0};

  double u = 0.0;
  double z = 0.0;
  long k = 0;

  std::vector<int> coupled;   // ascending ids of neurons this one exchanges with
  Eigen::VectorXd weights;    // row slice over `coupled` (quadratic engines)
  double bias = 0.0;
  double g_a = 0.0, g_b = 0.0;  // gain scalars (exact-gradient engine)

  Eigen::VectorXd cache_z;    // last received outputs, aligned with `coupled`
  Eigen::VectorXd cache_r;    // last received residuals (exact-gradient engine)
  std::vector<long> cache_kz;
  std::vector<long> cache_kr;

  double announced_z = 0.0;
  double announced_r = 0.0;
  bool has_announced_z = false;
  bool has_announced_r = false;
  long r_seq = 0;

  /// Real numbers held in per-neuron vectors (the O(2N) accounting).
  long storage_doubles() const {
    return static_cast<long>(weights.size() + cache_z.size() + cache_r.size());
  }
};

/// An embedded network: motes plus the radio topology and the problem they
/// jointly solve.
struct WpnState {
  std::vector<Mote> motes;
  Graph topology;  // radio reachability; multi-hop beyond one hop
  CompiledProblem problem;
  EngineConfig engine;
};

/// Identity placement: mote i hosts neuron i. Quadratic engines store the
/// i-th weight row over the nonzero couplings; the exact-gradient engine
/// stores the gain scalars and couples along problem-graph edges, exchanging
/// (z, r) pairs so the gradient needs one-hop information only.
WpnState embed(const CompiledProblem& prob, const Graph& topology,
               const EngineConfig& engine);

/// Shortest path by hop count, ties broken by lowest next-hop id; empty if
/// unreachable, {src} if src == dst.
std::vector<int> route(const Graph& topology, int src, int dst);

struct MacArbitration {
  std::vector<std::size_t> delivered;  // indices into the transmission list
  std::vector<std::size_t> collided;
};

/// Resolve one slot of simultaneous transmissions. Under ideal_tdma all are
/// delivered. Under slotted_aloha a transmission is collided iff another
/// same-slot same-channel transmitter is within radio range of any of its
/// intended receivers (its one-hop neighborhood).
MacArbitration mac_arbitrate(const std::vector<std::pair<int, int>>& transmissions,
                             const Graph& topology, const MacConfig& cfg);

struct Validity {
  bool ipds = false;
  bool dominating = false;
  bool connected = false;
};

struct TraceRow {
  double time = 0.0;
  int src = 0;
  int dst = kBroadcastDst;
  int channel = 0;
  char outcome = 'D';  // 'D' delivered, 'C' collided
};

struct RunReport {
  long long total_messages = 0;  // radio transmission attempts
  long long delivered = 0;
  long long collided = 0;
  long long retransmissions = 0;
  long long undelivered = 0;  // queued or in flight when the run ended
  long state_changes = 0;     // output changes that crossed the broadcast threshold
  long updates = 0;           // neuron updates computed
  double simulated_time = 0.0;
  int episodes_used = 1;
  bool converged = false;
  std::vector<double> energy_times;
  std::vector<double> energy_trajectory;
  Eigen::VectorXd final_z;
  Validity validity;
  std::vector<long long> per_mote_attempts;
  std::vector<TraceRow> trace;  // only when tracing was requested
};

struct SimConfig {
  enum class Trigger { periodic, on_receive };
  Trigger trigger = Trigger::periodic;
  double period = 1e-3;  // seconds between synchronized update rounds
  double delta = 1e-4;   // broadcast threshold on |dz| (0 = announce always)
  double max_sim_time = 10.0;
  long max_updates = 10000000;
  bool record_trace = false;
};

/// Run the embedded network to quiescence or its limits. The event loop is
/// sequential and a deterministic function of (state, seed): repeated runs
/// produce byte-identical reports. Throws DivergenceError (naming the mote
/// and simulated time) if a neuron value turns non-finite.
RunReport simulate(const WpnState& wpn, const MacConfig& mac,
                   const ConvergenceCriterion& crit, const SimConfig& sim,
                   std::uint64_t seed, const Eigen::VectorXd& initial_z);

struct MessageStats {
  long long attempts = 0;
  long long delivered = 0;
  long long collided = 0;
  long long retransmissions = 0;
  long long undelivered = 0;
  std::vector<long long> per_mote_attempts;
  double analytic_envelope = 0.0;  // m * N^3
  double envelope_ratio = 0.0;     // attempts / envelope
};

/// Totals, per-mote histogram, and the ratio of the observed traffic to the
/// m * N^3 analytic envelope.
MessageStats measure_messages(const RunReport& report);

/// Fixed-field text form of a report (the trace is emitted separately).
std::string format_run_report(const RunReport& report);

/// Delimited trace rows: time, src, dst, channel, outcome.
std::string format_trace(const RunReport& report);

}  // namespace wpn
