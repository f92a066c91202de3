#include "wpn/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "wpn/errors.hpp"
#include "wpn/rng.hpp"

namespace wpn {

void TemperatureSchedule::validate() const {
  if (!(t_min > 0.0) || !(t0 >= t_min))
    throw std::invalid_argument("need t0 >= t_min > 0");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must lie in (0,1)");
}

double TemperatureSchedule::at(long k) const {
  double t = t0 * std::pow(alpha, static_cast<double>(k));
  return t > t_min ? t : t_min;
}

void MfaParams::validate() const {
  if (mu.size() != theta.size())
    throw std::invalid_argument("mu and theta sizes disagree");
  if ((mu.array() <= 0.0).any())
    throw std::invalid_argument("every mu_i must be positive");
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  schedule.validate();
}

void ConvergenceCriterion::validate() const {
  if (epsilon < 0.0) throw std::invalid_argument("epsilon must be non-negative");
  if (max_steps <= 0) throw std::invalid_argument("max_steps must be positive");
  if (max_episodes < 1) throw std::invalid_argument("max_episodes must be >= 1");
}

double sigmoid(double u, double lambda) {
  return 1.0 / (1.0 + std::exp(-lambda * u));
}

double sigmoid_inverse(double z, double lambda) {
  if (!(z > 0.0 && z < 1.0))
    throw std::domain_error("sigmoid_inverse needs z in (0,1)");
  return std::log(z / (1.0 - z)) / lambda;
}

namespace {

void check_dims(const NeuronState& s, int k) {
  if (s.u.size() != k || s.z.size() != k)
    throw std::invalid_argument("state dimension does not match parameters");
}

// Full-row dot product in ascending j order. Zero entries add exact zeros,
// so this matches a mote's sparse ascending sum bit for bit.
double row_net(const HopfieldParams& p, const Eigen::VectorXd& z, int i) {
  double net = 0.0;
  for (int j = 0; j < p.size(); ++j) net += p.W(i, j) * z(j);
  return net + p.b(i);
}

}  // namespace

Eigen::VectorXd hopfield_continuous_rhs(const NeuronState& s, const HopfieldParams& p) {
  check_dims(s, p.size());
  Eigen::VectorXd rhs(p.size());
  for (int i = 0; i < p.size(); ++i) rhs(i) = -s.u(i) + row_net(p, s.z, i);
  return rhs;
}

NeuronState hopfield_step(const NeuronState& s, const HopfieldParams& p, double dt,
                          HopfieldMode mode) {
  check_dims(s, p.size());
  if (mode == HopfieldMode::euler_memory && !(dt > 0.0))
    throw std::invalid_argument("dt must be positive");
  NeuronState next;
  next.u.resize(p.size());
  next.z.resize(p.size());
  for (int i = 0; i < p.size(); ++i) {
    double net = row_net(p, s.z, i);
    next.u(i) = mode == HopfieldMode::euler_memory
                    ? s.u(i) + dt * (-s.u(i) + net)
                    : net;
    next.z(i) = sigmoid(next.u(i), p.lambda);
  }
  next.k = s.k + 1;
  return next;
}

NeuronState gradient_step(const NeuronState& s, const CompiledProblem& prob,
                          double dt) {
  check_dims(s, prob.size());
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  NeuronState next;
  next.u.resize(prob.size());
  next.z.resize(prob.size());
  Eigen::VectorXd grad = prob.energy_gradient(s.z);
  for (int i = 0; i < prob.size(); ++i) {
    next.u(i) = s.u(i) + dt * (-s.u(i) - grad(i));
    next.z(i) = sigmoid(next.u(i), prob.quadratic().lambda);
  }
  next.k = s.k + 1;
  return next;
}

Eigen::VectorXd mfa_step(const Eigen::Ref<const Eigen::VectorXd>& v,
                         const Eigen::Ref<const Eigen::MatrixXd>& W,
                         const MfaParams& p, double temperature) {
  p.validate();
  if (v.size() != W.rows() || v.size() != p.mu.size())
    throw std::invalid_argument("state dimension does not match parameters");
  if (!(temperature > 0.0))
    throw std::invalid_argument("temperature must be positive");
  Eigen::VectorXd next(v.size());
  for (int i = 0; i < v.size(); ++i) {
    double field = W.row(i).dot(v) + p.theta(i);
    next(i) = v(i) - p.tau * p.mu(i) * (v(i) - std::tanh(field / temperature));
  }
  return next;
}

Eigen::VectorXd to_unipolar(const Eigen::Ref<const Eigen::VectorXd>& v) {
  if ((v.array() < -1.0).any() || (v.array() > 1.0).any())
    throw std::domain_error("bipolar components must lie in [-1,1]");
  return (v.array() + 1.0) / 2.0;
}

Eigen::VectorXd to_bipolar(const Eigen::Ref<const Eigen::VectorXd>& z) {
  if ((z.array() < 0.0).any() || (z.array() > 1.0).any())
    throw std::domain_error("unipolar components must lie in [0,1]");
  return 2.0 * z.array() - 1.0;
}

namespace {

MfaParams materialize_mfa(const EngineConfig& cfg, const CompiledProblem& prob) {
  MfaParams p;
  p.mu = Eigen::VectorXd::Constant(prob.size(), cfg.mfa_mu);
  p.theta = prob.quadratic().b;
  p.tau = cfg.mfa_tau;
  p.schedule = cfg.schedule;
  return p;
}

double problem_energy(const EngineConfig& cfg, const CompiledProblem& prob,
                      const Eigen::VectorXd& z) {
  if (cfg.kind == EngineKind::mfa) return prob.energy(to_unipolar(z));
  return prob.energy(z);
}

}  // namespace

EpisodeResult run_episode(const EngineConfig& cfg, const CompiledProblem& prob,
                          NeuronState init, const ConvergenceCriterion& crit) {
  crit.validate();
  check_dims(init, prob.size());
  const HopfieldParams& q = prob.quadratic();
  MfaParams mfa;
  if (cfg.kind == EngineKind::mfa) {
    mfa = materialize_mfa(cfg, prob);
    mfa.validate();
  }
  std::mt19937_64 order_gen(cfg.order_seed);

  EpisodeResult result;
  result.state = std::move(init);
  result.energy.push_back(problem_energy(cfg, prob, result.state.z));

  for (int step = 1; step <= crit.max_steps; ++step) {
    NeuronState& s = result.state;
    Eigen::VectorXd z_before = s.z;
    double temperature = cfg.schedule.at(s.k);
    if (cfg.order == UpdateOrder::synchronous) {
      switch (cfg.kind) {
        case EngineKind::hopfield:
          s = hopfield_step(s, q, cfg.dt, cfg.hopfield_mode);
          break;
        case EngineKind::gradient:
          s = gradient_step(s, prob, cfg.dt);
          break;
        case EngineKind::mfa:
          s.z = mfa_step(s.z, q.W, mfa, temperature);
          s.k += 1;
          break;
        case EngineKind::threshold: {
          Eigen::VectorXd next(prob.size());
          for (int i = 0; i < prob.size(); ++i) {
            s.u(i) = row_net(q, s.z, i);
            next(i) = s.u(i) > 0.0 ? 1.0 : 0.0;
          }
          s.z = next;
          s.k += 1;
          break;
        }
      }
    } else {
      std::vector<int> order = random_permutation(order_gen, prob.size());
      for (int i : order) {
        switch (cfg.kind) {
          case EngineKind::hopfield: {
            double net = row_net(q, s.z, i);
            s.u(i) = cfg.hopfield_mode == HopfieldMode::euler_memory
                         ? s.u(i) + cfg.dt * (-s.u(i) + net)
                         : net;
            s.z(i) = sigmoid(s.u(i), q.lambda);
            break;
          }
          case EngineKind::gradient: {
            double grad = prob.energy_gradient_component(s.z, i);
            s.u(i) = s.u(i) + cfg.dt * (-s.u(i) - grad);
            s.z(i) = sigmoid(s.u(i), q.lambda);
            break;
          }
          case EngineKind::mfa: {
            double field = q.W.row(i).dot(s.z) + mfa.theta(i);
            s.z(i) = s.z(i) - mfa.tau * mfa.mu(i) *
                                  (s.z(i) - std::tanh(field / temperature));
            break;
          }
          case EngineKind::threshold: {
            double net = row_net(q, s.z, i);
            s.u(i) = net;
            s.z(i) = net > 0.0 ? 1.0 : 0.0;
            break;
          }
        }
      }
      s.k += 1;
    }
    if (!s.z.allFinite() || !s.u.allFinite())
      throw DivergenceError("non-finite neuron value", step);
    result.energy.push_back(problem_energy(cfg, prob, s.z));
    result.steps = step;
    if ((s.z - z_before).cwiseAbs().maxCoeff() < crit.epsilon) {
      result.converged = true;
      break;
    }
  }
  return result;
}

NeuronState initial_state(const CompiledProblem& prob, const EngineConfig& cfg,
                          std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  const int n = prob.size();
  NeuronState s;
  s.u = Eigen::VectorXd::Zero(n);
  s.z.resize(n);
  for (int i = 0; i < n; ++i) s.z(i) = uniform_in(gen, 0.4, 0.6);
  switch (cfg.kind) {
    case EngineKind::hopfield:
    case EngineKind::gradient:
      for (int i = 0; i < n; ++i)
        s.u(i) = sigmoid_inverse(s.z(i), prob.quadratic().lambda);
      break;
    case EngineKind::mfa:
      s.z = to_bipolar(s.z);
      break;
    case EngineKind::threshold:
      for (int i = 0; i < n; ++i) s.z(i) = s.z(i) > 0.5 ? 1.0 : 0.0;
      break;
  }
  return s;
}

MultistartResult run_multistart(const EngineConfig& cfg, const CompiledProblem& prob,
                                const ConvergenceCriterion& crit,
                                const std::vector<std::uint64_t>& seeds) {
  crit.validate();
  if (seeds.empty()) throw std::invalid_argument("need at least one seed");
  if (static_cast<int>(seeds.size()) > crit.max_episodes)
    throw std::invalid_argument("seed list exceeds max_episodes");
  MultistartResult result;
  bool have_best = false;
  for (std::size_t idx = 0; idx < seeds.size(); ++idx) {
    std::uint64_t seed = seeds[idx];
    EngineConfig episode_cfg = cfg;
    episode_cfg.order_seed = seed;
    EpisodeResult episode;
    try {
      episode = run_episode(episode_cfg, prob, initial_state(prob, cfg, seed), crit);
    } catch (const DivergenceError& e) {
      throw DivergenceError("episode " + std::to_string(idx) + " (seed " +
                                std::to_string(seed) + "): " + e.what(),
                            e.step());
    }
    EpisodeSummary summary{seed, episode.energy.back(), episode.converged,
                           episode.steps};
    result.episodes.push_back(summary);
    if (!have_best || summary.final_energy < result.best.energy.back()) {
      result.best = std::move(episode);
      result.best_seed = seed;
      have_best = true;
    }
  }
  return result;
}

BinaryRunResult binary_async_run(const HopfieldParams& p, Eigen::VectorXd z0,
                                 std::uint64_t seed, int max_sweeps) {
  p.validate();
  if (z0.size() != p.size())
    throw std::invalid_argument("state dimension does not match parameters");
  for (int i = 0; i < z0.size(); ++i)
    if (z0(i) != 0.0 && z0(i) != 1.0)
      throw std::invalid_argument("binary run needs a 0/1 start");
  std::mt19937_64 gen(seed);
  BinaryRunResult result;
  result.z = std::move(z0);
  result.energy_after_flip.push_back(binary_quadratic_energy(p, result.z));
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    result.sweeps = sweep;
    bool flipped = false;
    for (int i : random_permutation(gen, p.size())) {
      double net = p.W.row(i).dot(result.z) + p.b(i);
      double next = net > 0.0 ? 1.0 : 0.0;
      if (next != result.z(i)) {
        result.z(i) = next;
        ++result.flips;
        result.energy_after_flip.push_back(binary_quadratic_energy(p, result.z));
        flipped = true;
      }
    }
    if (!flipped) {
      result.stable = true;
      break;
    }
  }
  return result;
}

std::string format_trajectory(const std::vector<double>& energy) {
  std::string out = "step\tenergy\n";
  char buf[48];
  for (std::size_t i = 0; i < energy.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu\t%.17g\n", i, energy[i]);
    out += buf;
  }
  return out;
}

}  // namespace wpn
