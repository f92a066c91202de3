#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "wpn/energy.hpp"

namespace wpn {

enum class EngineKind { hopfield, gradient, mfa, threshold };
enum class HopfieldMode { euler_memory, memoryless };
enum class UpdateOrder { synchronous, async };

/// Geometric annealing law T_k = max(t0 * alpha^k, t_min).
struct TemperatureSchedule {
  double t0 = 10.0;
  double alpha = 0.95;
  double t_min = 0.01;
  double at(long k) const;
  void validate() const;
};

/// Per-neuron gains and biases of the mean-field iteration plus its
/// discretization step and annealing schedule. All mu_i must be positive.
struct MfaParams {
  Eigen::VectorXd mu;
  Eigen::VectorXd theta;
  double tau = 0.5;
  TemperatureSchedule schedule;
  void validate() const;
};

/// Activation vector u, output vector z (unipolar [0,1] for sigmoid and
/// threshold units, bipolar [-1,1] for the mean-field engine), and the
/// recursion index k.
struct NeuronState {
  Eigen::VectorXd u;
  Eigen::VectorXd z;
  long k = 0;
};

// Saturated sigmoids move z slowly, so the |dz| tolerance must sit well
// below the energy scale being targeted; 1e-9 leaves unit-gain problems at
// residual energies near 1e-7.
struct ConvergenceCriterion {
  double epsilon = 1e-9;  // on max |z_next - z| over a full sweep
  int max_steps = 5000;
  int max_episodes = 100;
  void validate() const;
};

/// Engine selection plus every tunable the engines read. MFA gains are
/// materialized per problem (uniform mu, theta defaulting to the compiled
/// biases) unless an explicit MfaParams is supplied by the caller.
struct EngineConfig {
  EngineKind kind = EngineKind::gradient;
  double lambda = 30.0;
  double dt = 0.01;
  HopfieldMode hopfield_mode = HopfieldMode::euler_memory;
  UpdateOrder order = UpdateOrder::synchronous;
  std::uint64_t order_seed = 0;
  double mfa_tau = 0.5;
  double mfa_mu = 1.0;
  TemperatureSchedule schedule;
};

double sigmoid(double u, double lambda);

/// Inverse of sigmoid(., lambda); input must be in (0, 1).
double sigmoid_inverse(double z, double lambda);

/// du_i/dt = -u_i + sum_j w_ij z_j + b_i with z = sigmoid(u, lambda).
Eigen::VectorXd hopfield_continuous_rhs(const NeuronState& s, const HopfieldParams& p);

/// One synchronous discrete step. euler_memory applies the explicit Euler
/// rule u' = u + dt (-u + Wz + b); memoryless drops the activation memory,
/// u' = Wz + b. Either way z' = sigmoid(u', lambda) and k increments.
NeuronState hopfield_step(const NeuronState& s, const HopfieldParams& p, double dt,
                          HopfieldMode mode);

/// Exact-gradient dynamics u' = u + dt (-u - dE/dz); identical to
/// hopfield_step on problems whose residual order is zero.
NeuronState gradient_step(const NeuronState& s, const CompiledProblem& prob,
                          double dt);

/// v' = v - tau*mu .* (v - tanh((Wv + theta)/T)), bipolar components.
Eigen::VectorXd mfa_step(const Eigen::Ref<const Eigen::VectorXd>& v,
                         const Eigen::Ref<const Eigen::MatrixXd>& W,
                         const MfaParams& p, double temperature);

Eigen::VectorXd to_unipolar(const Eigen::Ref<const Eigen::VectorXd>& v);
Eigen::VectorXd to_bipolar(const Eigen::Ref<const Eigen::VectorXd>& z);

struct EpisodeResult {
  NeuronState state;
  std::vector<double> energy;  // problem energy per step, index 0 = initial
  bool converged = false;
  int steps = 0;
};

/// Iterate the selected engine until max |dz| over a sweep falls below
/// crit.epsilon or max_steps is reached. Asynchronous order draws a fresh
/// permutation per sweep from cfg.order_seed. The mean-field engine anneals
/// its temperature by cfg.schedule and records energies of the unipolar
/// image of v. Throws DivergenceError on non-finite values.
EpisodeResult run_episode(const EngineConfig& cfg, const CompiledProblem& prob,
                          NeuronState init, const ConvergenceCriterion& crit);

/// Fresh initial state for a seed: z uniform in (0.4, 0.6) near the sigmoid
/// midpoint, u the matching activation, and the bipolar image for MFA.
NeuronState initial_state(const CompiledProblem& prob, const EngineConfig& cfg,
                          std::uint64_t seed);

struct EpisodeSummary {
  std::uint64_t seed = 0;
  double final_energy = 0.0;
  bool converged = false;
  int steps = 0;
};

struct MultistartResult {
  EpisodeResult best;
  std::uint64_t best_seed = 0;
  std::vector<EpisodeSummary> episodes;
};

/// One episode per seed, each from its own initial state; the lowest final
/// energy wins. The seed list must be non-empty and within
/// crit.max_episodes.
MultistartResult run_multistart(const EngineConfig& cfg, const CompiledProblem& prob,
                                const ConvergenceCriterion& crit,
                                const std::vector<std::uint64_t>& seeds);

struct BinaryRunResult {
  Eigen::VectorXd z;
  long flips = 0;
  int sweeps = 0;
  bool stable = false;
  std::vector<double> energy_after_flip;  // index 0 = initial energy
};

/// Asynchronous binary threshold iteration: single-unit updates in a fresh
/// seeded permutation per sweep, z_i <- step(sum_j w_ij z_j + b_i) with
/// step(0) = 0, until a full sweep makes no flip. Records the quadratic
/// energy after every flip.
BinaryRunResult binary_async_run(const HopfieldParams& p, Eigen::VectorXd z0,
                                 std::uint64_t seed, int max_sweeps = 1000);

/// Two-column text (step, energy) for plotting.
std::string format_trajectory(const std::vector<double>& energy);

}  // namespace wpn
