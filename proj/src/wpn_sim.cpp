#include "wpn/wpn_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "wpn/errors.hpp"
#include "wpn/rng.hpp"

namespace wpn {

void MacConfig::validate() const {
  if (channels < 1) throw std::invalid_argument("need at least one channel");
  if (!(slot_time > 0.0)) throw std::invalid_argument("slot_time must be positive");
  if (!(p_transmit > 0.0 && p_transmit <= 1.0))
    throw std::invalid_argument("p_transmit must lie in (0,1]");
}

WpnState embed(const CompiledProblem& prob, const Graph& topology,
               const EngineConfig& engine) {
  if (prob.size() != topology.size())
    throw std::invalid_argument("problem dimension " + std::to_string(prob.size()) +
                                " does not match topology size " +
                                std::to_string(topology.size()));
  if (engine.kind == EngineKind::mfa)
    throw std::invalid_argument("the simulator hosts sigmoid, threshold, and "
                                "exact-gradient units, not the mean-field engine");
  if (engine.kind == EngineKind::gradient && !prob.has_graph())
    throw std::invalid_argument("exact-gradient embedding needs a graph-compiled problem");

  WpnState wpn;
  wpn.topology = topology;
  wpn.problem = prob;
  wpn.engine = engine;
  const int n = prob.size();
  wpn.motes.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Mote& m = wpn.motes[static_cast<std::size_t>(i)];
    m.id = i;
    if (topology.has_positions())
      m.position = topology.positions()[static_cast<std::size_t>(i)];
    m.bias = prob.quadratic().b(i);
    if (engine.kind == EngineKind::gradient) {
      // Couples along problem-graph edges; (z, r) exchange keeps the exact
      // gradient computable from one-hop information.
      m.coupled = prob.graph().neighbors(i);
      m.g_a = prob.energy_config().g_a;
      m.g_b = prob.energy_config().g_b;
      m.cache_r = Eigen::VectorXd::Zero(static_cast<long>(m.coupled.size()));
      m.cache_kr.assign(m.coupled.size(), -1);
    } else {
      const Eigen::MatrixXd& W = prob.quadratic().W;
      for (int j = 0; j < n; ++j)
        if (j != i && W(i, j) != 0.0) m.coupled.push_back(j);
      m.weights.resize(static_cast<long>(m.coupled.size()));
      for (std::size_t t = 0; t < m.coupled.size(); ++t)
        m.weights(static_cast<long>(t)) = W(i, m.coupled[t]);
    }
    m.cache_z = Eigen::VectorXd::Zero(static_cast<long>(m.coupled.size()));
    m.cache_kz.assign(m.coupled.size(), -1);
  }

  // Every coupled pair must be reachable over the radio topology.
  for (int i = 0; i < n; ++i) {
    for (int j : wpn.motes[static_cast<std::size_t>(i)].coupled) {
      if (route(topology, i, j).empty())
        throw std::invalid_argument("coupled motes " + std::to_string(i) + " and " +
                                    std::to_string(j) +
                                    " are unreachable over the topology");
    }
  }
  return wpn;
}

std::vector<int> route(const Graph& topology, int src, int dst) {
  const int n = topology.size();
  if (src < 0 || src >= n || dst < 0 || dst >= n)
    throw std::out_of_range("mote id outside topology");
  if (src == dst) return {src};
  std::vector<int> dist(static_cast<std::size_t>(n), -1);
  std::deque<int> queue{dst};
  dist[static_cast<std::size_t>(dst)] = 0;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int w : topology.neighbors(v)) {
      if (dist[static_cast<std::size_t>(w)] < 0) {
        dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
        queue.push_back(w);
      }
    }
  }
  if (dist[static_cast<std::size_t>(src)] < 0) return {};
  std::vector<int> path{src};
  int cur = src;
  while (cur != dst) {
    for (int w : topology.neighbors(cur)) {  // ascending: lowest id wins ties
      if (dist[static_cast<std::size_t>(w)] ==
          dist[static_cast<std::size_t>(cur)] - 1) {
        path.push_back(w);
        cur = w;
        break;
      }
    }
  }
  return path;
}

namespace {

// True when `other` transmitting on the same channel is audible at any of
// the intended receivers (a mote hears everything within one hop, itself
// included).
bool interferes(const Graph& topology, int other, const std::vector<int>& receivers) {
  for (int r : receivers)
    if (other == r || topology.has_edge(other, r)) return true;
  return false;
}

}  // namespace

MacArbitration mac_arbitrate(const std::vector<std::pair<int, int>>& transmissions,
                             const Graph& topology, const MacConfig& cfg) {
  cfg.validate();
  MacArbitration result;
  if (cfg.kind == MacConfig::Kind::ideal_tdma) {
    for (std::size_t i = 0; i < transmissions.size(); ++i)
      result.delivered.push_back(i);
    return result;
  }
  for (std::size_t i = 0; i < transmissions.size(); ++i) {
    const auto& [mote, channel] = transmissions[i];
    const std::vector<int>& receivers = topology.neighbors(mote);
    bool collided = false;
    for (std::size_t j = 0; j < transmissions.size() && !collided; ++j) {
      if (j == i) continue;
      const auto& [other, other_channel] = transmissions[j];
      if (other_channel != channel || other == mote) continue;
      collided = interferes(topology, other, receivers);
    }
    (collided ? result.collided : result.delivered).push_back(i);
  }
  return result;
}

namespace {

struct QueuedTx {
  long seq = 0;
  int carrier = 0;                // transmitter of the next hop
  int final_dst = kBroadcastDst;  // broadcast or routed unicast target
  int neuron = 0;
  double value = 0.0;
  bool is_aux = false;
  long update_index = 0;
  double enqueue_time = 0.0;
  long eligible_slot = 0;
  int attempts = 0;
};

struct Delivery {
  long seq = 0;
  int receiver = 0;
  QueuedTx tx;
};

class Simulation {
 public:
  Simulation(const WpnState& wpn, const MacConfig& mac,
             const ConvergenceCriterion& crit, const SimConfig& sim,
             std::uint64_t seed, const Eigen::VectorXd& initial_z)
      : net_(wpn), mac_(mac), crit_(crit), sim_(sim), gen_(seed) {
    mac_.validate();
    crit_.validate();
    if (!(sim_.period > 0.0) || !(sim_.delta >= 0.0) || !(sim_.max_sim_time > 0.0))
      throw std::invalid_argument("invalid simulation config");
    const int n = static_cast<int>(net_.motes.size());
    if (initial_z.size() != n)
      throw std::invalid_argument("initial state dimension does not match network");
    outbox_.resize(static_cast<std::size_t>(n));
    report_.per_mote_attempts.assign(static_cast<std::size_t>(n), 0);

    const double lambda = net_.problem.quadratic().lambda;
    for (int i = 0; i < n; ++i) {
      Mote& m = mote(i);
      m.z = initial_z(i);
      m.k = 0;
      if (net_.engine.kind == EngineKind::threshold) {
        if (m.z != 0.0 && m.z != 1.0)
          throw std::invalid_argument("threshold engine needs a 0/1 start");
        m.u = 0.0;
      } else {
        m.u = sigmoid_inverse(m.z, lambda);
      }
    }
    period_slots_ = std::max<long>(1, std::llround(sim_.period / mac_.slot_time));
    max_slot_ = std::llround(sim_.max_sim_time / mac_.slot_time);
  }

  RunReport run() {
    const int n = size();
    // Initial announcements prime the caches; they are traffic but not
    // state changes.
    for (int i = 0; i < n; ++i) {
      Mote& m = mote(i);
      if (m.coupled.empty()) continue;
      announce(i, false, m.z, m.k);
      m.announced_z = m.z;
      m.has_announced_z = true;
    }
    record_energy();

    bool triggers_active = sim_.trigger == SimConfig::Trigger::periodic;
    long next_trigger = period_slots_;
    long rounds = 0;
    constexpr long kNever = std::numeric_limits<long>::max();

    while (true) {
      long s_deliver = deliveries_.empty() ? kNever : deliveries_.begin()->first;
      long s_hook = hooks_.empty() ? kNever : hooks_.begin()->first;
      long s_tx = next_tx_slot();
      long s_trigger = triggers_active ? next_trigger : kNever;
      long s = std::min(std::min(s_deliver, s_hook), std::min(s_tx, s_trigger));
      if (s == kNever) {
        if (sim_.trigger == SimConfig::Trigger::on_receive) report_.converged = true;
        break;
      }
      if (s > max_slot_) {
        slot_ = max_slot_;
        break;
      }
      slot_ = s;

      bool any_update = false;

      // 1. Deliveries that land on this slot boundary.
      std::set<int> touched;
      if (s_deliver == s) {
        for (const Delivery& d : deliveries_.begin()->second) {
          if (process_delivery(d)) touched.insert(d.receiver);
        }
        deliveries_.erase(deliveries_.begin());
      }

      // 2. Synchronized update round.
      if (s_trigger == s) {
        double round_dz = 0.0;
        for (int i = 0; i < n; ++i) {
          double dz = update_neuron(i);
          round_dz = std::max(round_dz, dz);
          if (net_.engine.kind == EngineKind::gradient && dz > 0.0)
            hooks_[s + 1].push_back(i);  // residual reflects the new z next slot
        }
        any_update = true;
        ++rounds;
        if (round_dz < crit_.epsilon) {
          report_.converged = true;
          triggers_active = false;
        } else if (rounds >= crit_.max_steps) {
          triggers_active = false;
        } else {
          next_trigger += period_slots_;
        }
      }

      // 3. Reaction hooks: event-driven updates and residual refreshes.
      std::vector<int> hooked;
      if (s_hook == s) {
        hooked = std::move(hooks_.begin()->second);
        hooks_.erase(hooks_.begin());
      }
      for (int i : touched) hooked.push_back(i);
      std::sort(hooked.begin(), hooked.end());
      hooked.erase(std::unique(hooked.begin(), hooked.end()), hooked.end());
      for (int i : hooked) {
        if (sim_.trigger == SimConfig::Trigger::on_receive && touched.count(i)) {
          update_neuron(i);
          any_update = true;
        }
        if (net_.engine.kind == EngineKind::gradient) refresh_residual(i);
      }

      if (any_update) record_energy();

      // 4. Transmissions occupying this slot.
      run_mac_slot();

      // One transmission per mote per slot: anything left over (a relay
      // surfacing behind a popped head, say) waits for the next slot.
      for (auto& queue : outbox_) {
        if (!queue.empty() && queue.front().eligible_slot <= slot_)
          queue.front().eligible_slot = slot_ + 1;
      }

      if (report_.updates >= sim_.max_updates) break;
    }

    finalize();
    return report_;
  }

 private:
  int size() const { return static_cast<int>(net_.motes.size()); }
  Mote& mote(int i) { return net_.motes[static_cast<std::size_t>(i)]; }
  double now() const { return static_cast<double>(slot_) * mac_.slot_time; }

  int coupled_index(const Mote& m, int neuron) const {
    auto it = std::lower_bound(m.coupled.begin(), m.coupled.end(), neuron);
    if (it == m.coupled.end() || *it != neuron) return -1;
    return static_cast<int>(it - m.coupled.begin());
  }

  // Returns true when the receiver's cache changed value.
  bool process_delivery(const Delivery& d) {
    const QueuedTx& tx = d.tx;
    if (tx.final_dst != kBroadcastDst && tx.final_dst != d.receiver) {
      // Relay hop: forward toward the destination.
      QueuedTx fwd = tx;
      fwd.carrier = d.receiver;
      fwd.eligible_slot = slot_;
      outbox_[static_cast<std::size_t>(d.receiver)].push_back(fwd);
      return false;
    }
    Mote& m = mote(d.receiver);
    int idx = coupled_index(m, tx.neuron);
    if (idx < 0) return false;  // overheard but not coupled
    if (tx.is_aux) {
      if (tx.update_index < m.cache_kr[static_cast<std::size_t>(idx)]) return false;
      m.cache_kr[static_cast<std::size_t>(idx)] = tx.update_index;
      double old = m.cache_r(idx);
      m.cache_r(idx) = tx.value;
      return old != tx.value;
    }
    if (tx.update_index < m.cache_kz[static_cast<std::size_t>(idx)]) return false;
    m.cache_kz[static_cast<std::size_t>(idx)] = tx.update_index;
    double old = m.cache_z(idx);
    m.cache_z(idx) = tx.value;
    return old != tx.value;
  }

  // One local neuron update from cached inputs; returns |dz|.
  double update_neuron(int i) {
    Mote& m = mote(i);
    double z_before = m.z;
    const double lambda = net_.problem.quadratic().lambda;
    const double dt = net_.engine.dt;
    switch (net_.engine.kind) {
      case EngineKind::hopfield: {
        double net = 0.0;
        for (long t = 0; t < m.weights.size(); ++t)
          net += m.weights(t) * m.cache_z(t);
        net += m.bias;
        m.u = net_.engine.hopfield_mode == HopfieldMode::euler_memory
                  ? m.u + dt * (-m.u + net)
                  : net;
        m.z = sigmoid(m.u, lambda);
        break;
      }
      case EngineKind::threshold: {
        double net = 0.0;
        for (long t = 0; t < m.weights.size(); ++t)
          net += m.weights(t) * m.cache_z(t);
        net += m.bias;
        m.u = net;
        m.z = net > 0.0 ? 1.0 : 0.0;
        break;
      }
      case EngineKind::gradient: {
        double s = 0.0;
        for (long t = 0; t < m.cache_z.size(); ++t) s += m.cache_z(t);
        double coupled = 0.0;
        for (long t = 0; t < m.cache_r.size(); ++t) coupled += m.cache_r(t);
        double d = 1.0 - s;
        double grad = m.g_a * s - 0.5 * m.g_b * d * d - m.g_b * coupled;
        m.u = m.u + dt * (-m.u - grad);
        m.z = sigmoid(m.u, lambda);
        break;
      }
      case EngineKind::mfa:
        break;  // rejected at embed time
    }
    m.k += 1;
    ++report_.updates;
    if (!std::isfinite(m.u) || !std::isfinite(m.z))
      throw DivergenceError("non-finite neuron value at mote " + std::to_string(i) +
                                " at simulated time " + std::to_string(now()),
                            slot_);
    double dz = std::abs(m.z - z_before);
    if (!m.coupled.empty() &&
        (!m.has_announced_z || std::abs(m.z - m.announced_z) > sim_.delta)) {
      announce(i, false, m.z, m.k);
      m.announced_z = m.z;
      m.has_announced_z = true;
      ++report_.state_changes;
    }
    return dz;
  }

  // Recompute the coverage residual r_i = (1 - S_i)(1 - z_i) from the
  // current caches and announce it when it moved.
  void refresh_residual(int i) {
    Mote& m = mote(i);
    if (m.coupled.empty()) return;
    double s = 0.0;
    for (long t = 0; t < m.cache_z.size(); ++t) s += m.cache_z(t);
    double r = (1.0 - s) * (1.0 - m.z);
    if (m.has_announced_r && !(std::abs(r - m.announced_r) > sim_.delta)) return;
    m.r_seq += 1;
    announce(i, true, r, m.r_seq);
    m.announced_r = r;
    m.has_announced_r = true;
  }

  // Queue an announcement of (neuron i, value): one radio broadcast covers
  // the one-hop coupled motes, anything farther gets a routed unicast.
  void announce(int i, bool is_aux, double value, long update_index) {
    Mote& m = mote(i);
    bool any_one_hop = false;
    for (int j : m.coupled) {
      if (net_.topology.has_edge(i, j)) {
        any_one_hop = true;
        break;
      }
    }
    if (any_one_hop) {
      QueuedTx tx;
      tx.seq = seq_counter_++;
      tx.carrier = i;
      tx.final_dst = kBroadcastDst;
      tx.neuron = i;
      tx.value = value;
      tx.is_aux = is_aux;
      tx.update_index = update_index;
      tx.enqueue_time = now();
      tx.eligible_slot = slot_;
      outbox_[static_cast<std::size_t>(i)].push_back(tx);
    }
    for (int j : m.coupled) {
      if (net_.topology.has_edge(i, j)) continue;
      QueuedTx tx;
      tx.seq = seq_counter_++;
      tx.carrier = i;
      tx.final_dst = j;
      tx.neuron = i;
      tx.value = value;
      tx.is_aux = is_aux;
      tx.update_index = update_index;
      tx.enqueue_time = now();
      tx.eligible_slot = slot_;
      outbox_[static_cast<std::size_t>(i)].push_back(tx);
    }
  }

  long next_tx_slot() const {
    long best = std::numeric_limits<long>::max();
    for (const auto& queue : outbox_)
      if (!queue.empty()) best = std::min(best, queue.front().eligible_slot);
    return best;
  }

  int next_hop(int from, int dst) {
    auto key = std::make_pair(from, dst);
    auto it = next_hop_cache_.find(key);
    if (it != next_hop_cache_.end()) return it->second;
    std::vector<int> path = route(net_.topology, from, dst);
    int hop = path.size() < 2 ? dst : path[1];
    next_hop_cache_.emplace(key, hop);
    return hop;
  }

  void run_mac_slot() {
    struct SlotTx {
      int mote;
      int channel;
      std::vector<int> receivers;
    };
    std::vector<SlotTx> txs;
    std::vector<int> senders;
    for (int i = 0; i < size(); ++i) {
      auto& queue = outbox_[static_cast<std::size_t>(i)];
      if (queue.empty() || queue.front().eligible_slot > slot_) continue;
      if (mac_.kind == MacConfig::Kind::slotted_aloha &&
          !bernoulli(gen_, mac_.p_transmit)) {
        queue.front().eligible_slot = slot_ + 1;  // contend next slot
        continue;
      }
      QueuedTx& head = queue.front();
      SlotTx tx;
      tx.mote = i;
      tx.channel = i % mac_.channels;
      if (head.final_dst == kBroadcastDst)
        tx.receivers = net_.topology.neighbors(i);
      else
        tx.receivers = {next_hop(i, head.final_dst)};
      txs.push_back(std::move(tx));
      senders.push_back(i);
    }
    if (txs.empty()) return;

    for (std::size_t t = 0; t < txs.size(); ++t) {
      int i = senders[static_cast<std::size_t>(t)];
      QueuedTx& head = outbox_[static_cast<std::size_t>(i)].front();
      head.attempts += 1;
      ++report_.total_messages;
      ++report_.per_mote_attempts[static_cast<std::size_t>(i)];
      if (head.attempts > 1) ++report_.retransmissions;

      bool collided = false;
      if (mac_.kind == MacConfig::Kind::slotted_aloha) {
        for (std::size_t o = 0; o < txs.size() && !collided; ++o) {
          if (o == t || txs[o].channel != txs[t].channel) continue;
          collided = interferes(net_.topology, txs[o].mote, txs[t].receivers);
        }
      }
      if (sim_.record_trace) {
        report_.trace.push_back({now(), i,
                                 head.final_dst == kBroadcastDst
                                     ? kBroadcastDst
                                     : txs[t].receivers.front(),
                                 txs[t].channel, collided ? 'C' : 'D'});
      }
      if (collided) {
        ++report_.collided;
        head.eligible_slot = slot_ + uniform_int(gen_, 1, 8);
      } else {
        ++report_.delivered;
        QueuedTx done = head;
        outbox_[static_cast<std::size_t>(i)].pop_front();
        for (int r : txs[t].receivers)
          deliveries_[slot_ + 1].push_back({done.seq, r, done});
      }
    }
  }

  void record_energy() {
    Eigen::VectorXd z = gather_z();
    report_.energy_times.push_back(now());
    report_.energy_trajectory.push_back(net_.problem.energy(z));
  }

  Eigen::VectorXd gather_z() const {
    Eigen::VectorXd z(size());
    for (int i = 0; i < size(); ++i) z(i) = net_.motes[static_cast<std::size_t>(i)].z;
    return z;
  }

  void finalize() {
    report_.simulated_time = now();
    report_.final_z = gather_z();
    for (const auto& queue : outbox_)
      report_.undelivered += static_cast<long long>(queue.size());
    for (const auto& [slot, list] : deliveries_)
      report_.undelivered += static_cast<long long>(list.size());
    if (net_.problem.has_graph()) {
      VertexSet active = binary_readout(report_.final_z);
      const Graph& g = net_.problem.graph();
      report_.validity.ipds = is_independent_perfect_dominating(g, active);
      report_.validity.dominating = is_dominating_set(g, active);
      report_.validity.connected = is_connected_in_graph(g, active);
    }
  }

  WpnState net_;
  MacConfig mac_;
  ConvergenceCriterion crit_;
  SimConfig sim_;
  std::mt19937_64 gen_;
  RunReport report_;

  std::vector<std::deque<QueuedTx>> outbox_;
  std::map<long, std::vector<Delivery>> deliveries_;
  std::map<long, std::vector<int>> hooks_;
  std::map<std::pair<int, int>, int> next_hop_cache_;
  long seq_counter_ = 0;
  long slot_ = 0;
  long period_slots_ = 1;
  long max_slot_ = 0;
};

}  // namespace

RunReport simulate(const WpnState& wpn, const MacConfig& mac,
                   const ConvergenceCriterion& crit, const SimConfig& sim,
                   std::uint64_t seed, const Eigen::VectorXd& initial_z) {
  Simulation run(wpn, mac, crit, sim, seed, initial_z);
  return run.run();
}

MessageStats measure_messages(const RunReport& report) {
  MessageStats stats;
  stats.attempts = report.total_messages;
  stats.delivered = report.delivered;
  stats.collided = report.collided;
  stats.retransmissions = report.retransmissions;
  stats.undelivered = report.undelivered;
  stats.per_mote_attempts = report.per_mote_attempts;
  double n = static_cast<double>(report.final_z.size());
  stats.analytic_envelope = static_cast<double>(report.episodes_used) * n * n * n;
  stats.envelope_ratio = stats.analytic_envelope > 0.0
                             ? static_cast<double>(stats.attempts) / stats.analytic_envelope
                             : 0.0;
  return stats;
}

namespace {

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string format_run_report(const RunReport& r) {
  std::string out;
  out += "total_messages " + std::to_string(r.total_messages) + "\n";
  out += "delivered " + std::to_string(r.delivered) + "\n";
  out += "collided " + std::to_string(r.collided) + "\n";
  out += "retransmissions " + std::to_string(r.retransmissions) + "\n";
  out += "undelivered " + std::to_string(r.undelivered) + "\n";
  out += "state_changes " + std::to_string(r.state_changes) + "\n";
  out += "updates " + std::to_string(r.updates) + "\n";
  out += "simulated_time " + fmt(r.simulated_time) + "\n";
  out += "episodes_used " + std::to_string(r.episodes_used) + "\n";
  out += std::string("converged ") + (r.converged ? "true" : "false") + "\n";
  out += "final_z " + std::to_string(r.final_z.size());
  for (long i = 0; i < r.final_z.size(); ++i) out += " " + fmt(r.final_z(i));
  out += "\n";
  out += std::string("validity.ipds ") + (r.validity.ipds ? "true" : "false") + "\n";
  out += std::string("validity.dominating ") +
         (r.validity.dominating ? "true" : "false") + "\n";
  out += std::string("validity.connected ") +
         (r.validity.connected ? "true" : "false") + "\n";
  out += "energy_trajectory " + std::to_string(r.energy_trajectory.size()) + "\n";
  for (std::size_t i = 0; i < r.energy_trajectory.size(); ++i)
    out += std::to_string(i) + " " + fmt(r.energy_times[i]) + " " +
           fmt(r.energy_trajectory[i]) + "\n";
  return out;
}

std::string format_trace(const RunReport& r) {
  std::string out = "time\tsrc\tdst\tchannel\toutcome\n";
  for (const TraceRow& row : r.trace) {
    out += fmt(row.time) + "\t" + std::to_string(row.src) + "\t" +
           std::to_string(row.dst) + "\t" + std::to_string(row.channel) + "\t" +
           row.outcome + "\n";
  }
  return out;
}

}  // namespace wpn
