#include "wpn/energy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "wpn/errors.hpp"

namespace wpn {

void EnergyConfig::validate() const {
  if (!(g_a >= 0.0) || !(g_b >= 0.0))
    throw std::invalid_argument("penalty gains must not be negative");
}

void HopfieldParams::validate() const {
  if (W.rows() != W.cols() || W.rows() != b.size())
    throw std::invalid_argument("weight matrix and bias sizes disagree");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  for (int i = 0; i < W.rows(); ++i) {
    if (W(i, i) != 0.0) throw std::invalid_argument("nonzero diagonal weight");
    for (int j = i + 1; j < W.cols(); ++j)
      if (W(i, j) != W(j, i))
        throw std::invalid_argument("weight matrix not symmetric");
  }
}

namespace {

void check_dimension(const Graph& g, const Eigen::Ref<const Eigen::VectorXd>& z) {
  if (z.size() != g.size())
    throw std::invalid_argument("state dimension " + std::to_string(z.size()) +
                                " does not match graph size " +
                                std::to_string(g.size()));
}

// Neighbor sums in ascending-id order; motes replay the identical additions.
double neighbor_sum(const Graph& g, const Eigen::Ref<const Eigen::VectorXd>& z,
                    int i) {
  double s = 0.0;
  for (int j : g.neighbors(i)) s += z(j);
  return s;
}

}  // namespace

double mcds_energy(const Graph& g, const Eigen::Ref<const Eigen::VectorXd>& z,
                   const EnergyConfig& cfg) {
  cfg.validate();
  check_dimension(g, z);
  double pair_term = 0.0;
  for (int i = 0; i < g.size(); ++i)
    for (int j : g.neighbors(i))
      if (j > i) pair_term += z(i) * z(j);
  double coverage_term = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    double d = 1.0 - neighbor_sum(g, z, i);
    coverage_term += d * d * (1.0 - z(i));
  }
  return cfg.g_a * pair_term + 0.5 * cfg.g_b * coverage_term;
}

Eigen::VectorXd mcds_energy_gradient(const Graph& g,
                                     const Eigen::Ref<const Eigen::VectorXd>& z,
                                     const EnergyConfig& cfg) {
  cfg.validate();
  check_dimension(g, z);
  const int n = g.size();
  Eigen::VectorXd s(n), r(n), grad(n);
  for (int i = 0; i < n; ++i) s(i) = neighbor_sum(g, z, i);
  for (int i = 0; i < n; ++i) r(i) = (1.0 - s(i)) * (1.0 - z(i));
  for (int k = 0; k < n; ++k) {
    double coupled = 0.0;
    for (int i : g.neighbors(k)) coupled += r(i);
    double dk = 1.0 - s(k);
    grad(k) = cfg.g_a * s(k) - 0.5 * cfg.g_b * dk * dk - cfg.g_b * coupled;
  }
  return grad;
}

double quadratic_liapunov(const HopfieldParams& p,
                          const Eigen::Ref<const Eigen::VectorXd>& z) {
  if (z.size() != p.size())
    throw std::invalid_argument("state dimension does not match parameters");
  for (int i = 0; i < z.size(); ++i)
    if (!(z(i) > 0.0 && z(i) < 1.0))
      throw std::domain_error("component " + std::to_string(i) +
                              " outside (0,1); inverse sigmoid unbounded");
  // L(z) = integral of ln(s/(1-s)) from 0.5 to z = z ln z + (1-z) ln(1-z) + ln 2
  double barrier = 0.0;
  for (int i = 0; i < z.size(); ++i) {
    double zi = z(i);
    barrier += zi * std::log(zi) + (1.0 - zi) * std::log(1.0 - zi) + std::numbers::ln2;
  }
  return -0.5 * z.dot(p.W * z) + barrier / p.lambda - p.b.dot(z);
}

double binary_quadratic_energy(const HopfieldParams& p,
                               const Eigen::Ref<const Eigen::VectorXd>& z) {
  if (z.size() != p.size())
    throw std::invalid_argument("state dimension does not match parameters");
  return -0.5 * z.dot(p.W * z) - p.b.dot(z);
}

double evaluate_polynomial(const Polynomial& poly,
                           const Eigen::Ref<const Eigen::VectorXd>& z) {
  double total = 0.0;
  for (const auto& [mono, coef] : poly) {
    double term = coef;
    for (int v : mono) term *= z(v);
    total += term;
  }
  return total;
}

CompiledProblem CompiledProblem::from_params(HopfieldParams p, double constant) {
  p.validate();
  CompiledProblem prob;
  prob.quadratic_ = std::move(p);
  prob.constant_ = constant;
  return prob;
}

const Graph& CompiledProblem::graph() const {
  if (!graph_) throw std::logic_error("problem was not compiled from a graph");
  return *graph_;
}

const EnergyConfig& CompiledProblem::energy_config() const {
  if (!cfg_) throw std::logic_error("problem was not compiled from a graph");
  return *cfg_;
}

double CompiledProblem::quadratic_energy(
    const Eigen::Ref<const Eigen::VectorXd>& z) const {
  return constant_ - 0.5 * z.dot(quadratic_.W * z) - quadratic_.b.dot(z);
}

double CompiledProblem::residual_value(
    const Eigen::Ref<const Eigen::VectorXd>& z) const {
  return evaluate_polynomial(residual_, z);
}

double CompiledProblem::energy(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  if (graph_) return mcds_energy(*graph_, z, *cfg_);
  return quadratic_energy(z);
}

Eigen::VectorXd CompiledProblem::energy_gradient(
    const Eigen::Ref<const Eigen::VectorXd>& z) const {
  if (graph_) return mcds_energy_gradient(*graph_, z, *cfg_);
  const int n = size();
  Eigen::VectorXd grad(n);
  for (int i = 0; i < n; ++i) grad(i) = energy_gradient_component(z, i);
  return grad;
}

double CompiledProblem::energy_gradient_component(
    const Eigen::Ref<const Eigen::VectorXd>& z, int i) const {
  if (graph_) {
    const Graph& g = *graph_;
    const EnergyConfig& cfg = *cfg_;
    double si = neighbor_sum(g, z, i);
    double coupled = 0.0;
    for (int m : g.neighbors(i))
      coupled += (1.0 - neighbor_sum(g, z, m)) * (1.0 - z(m));
    double di = 1.0 - si;
    return cfg.g_a * si - 0.5 * cfg.g_b * di * di - cfg.g_b * coupled;
  }
  // d/dz_i of -1/2 z'Wz - b'z for symmetric zero-diagonal W
  double net = 0.0;
  for (int j = 0; j < size(); ++j) net += quadratic_.W(i, j) * z(j);
  return -net - quadratic_.b(i);
}

namespace {

void add_monomial(Polynomial& poly, Monomial mono, double coef) {
  std::sort(mono.begin(), mono.end());
  poly[std::move(mono)] += coef;
}

Polynomial multiply(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      Monomial m = ma;
      m.insert(m.end(), mb.begin(), mb.end());
      add_monomial(out, std::move(m), ca * cb);
    }
  return out;
}

}  // namespace

CompiledProblem compile_mcds(const Graph& g, const EnergyConfig& cfg) {
  cfg.validate();
  const int n = g.size();

  Polynomial expansion;
  for (int i = 0; i < n; ++i)
    for (int j : g.neighbors(i))
      if (j > i) add_monomial(expansion, {i, j}, cfg.g_a);
  for (int i = 0; i < n; ++i) {
    Polynomial one_minus_s{{Monomial{}, 1.0}};
    for (int j : g.neighbors(i)) add_monomial(one_minus_s, {j}, -1.0);
    Polynomial one_minus_zi{{Monomial{}, 1.0}};
    add_monomial(one_minus_zi, {i}, -1.0);
    Polynomial term = multiply(multiply(one_minus_s, one_minus_s), one_minus_zi);
    for (const auto& [mono, coef] : term)
      add_monomial(expansion, mono, 0.5 * cfg.g_b * coef);
  }

  CompiledProblem prob;
  prob.quadratic_.W = Eigen::MatrixXd::Zero(n, n);
  prob.quadratic_.b = Eigen::VectorXd::Zero(n);
  for (const auto& [mono, coef] : expansion) {
    if (coef == 0.0) continue;
    if (mono.empty()) {
      prob.constant_ += coef;
    } else if (mono.size() == 1) {
      prob.quadratic_.b(mono[0]) -= coef;  // match against -b_i z_i
    } else if (mono.size() == 2 && mono[0] != mono[1]) {
      prob.quadratic_.W(mono[0], mono[1]) = -coef;  // match against -w_ij z_i z_j
      prob.quadratic_.W(mono[1], mono[0]) = -coef;
    } else {
      // z_i^2 terms (zero-diagonal W cannot carry them) and cubic monomials
      prob.residual_[mono] += coef;
      prob.residual_order_ =
          std::max(prob.residual_order_, static_cast<int>(mono.size()));
    }
  }
  prob.graph_ = g;
  prob.cfg_ = cfg;
  return prob;
}

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string format_compiled_problem(const CompiledProblem& prob) {
  const HopfieldParams& q = prob.quadratic();
  std::string out = "K " + std::to_string(prob.size()) + " lambda " +
                    format_double(q.lambda);
  if (prob.has_graph()) {
    out += " g_a " + format_double(prob.energy_config().g_a) + " g_b " +
           format_double(prob.energy_config().g_b);
  }
  out += " constant " + format_double(prob.constant()) + "\n";
  out += "b";
  for (int i = 0; i < prob.size(); ++i) out += " " + format_double(q.b(i));
  out += "\n";
  for (int i = 0; i < prob.size(); ++i)
    for (int j = i + 1; j < prob.size(); ++j)
      if (q.W(i, j) != 0.0)
        out += std::to_string(i) + " " + std::to_string(j) + " " +
               format_double(q.W(i, j)) + "\n";
  return out;
}

CompiledProblem parse_compiled_problem(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw ParseError("empty problem text", 1);
  ++line_no;
  std::istringstream header(line);
  std::string tag;
  long k = 0;
  if (!(header >> tag >> k) || tag != "K" || k <= 0)
    throw ParseError("expected header \"K <count> ...\"", line_no);
  HopfieldParams p;
  p.W = Eigen::MatrixXd::Zero(k, k);
  p.b = Eigen::VectorXd::Zero(k);
  double constant = 0.0;
  std::string key;
  while (header >> key) {
    double value = 0.0;
    if (!(header >> value)) throw ParseError("dangling header key " + key, line_no);
    if (key == "lambda")
      p.lambda = value;
    else if (key == "constant")
      constant = value;
    else if (key != "g_a" && key != "g_b")
      throw ParseError("unknown header key " + key, line_no);
  }
  if (!std::getline(in, line)) throw ParseError("missing bias line", line_no + 1);
  ++line_no;
  std::istringstream bias(line);
  if (!(bias >> tag) || tag != "b")
    throw ParseError("expected bias line \"b <values>\"", line_no);
  for (long i = 0; i < k; ++i)
    if (!(bias >> p.b(i))) throw ParseError("too few bias values", line_no);
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ws(line);
    long i = 0, j = 0;
    double w = 0.0;
    if (!(ws >> i)) continue;  // blank
    if (!(ws >> j >> w) || i < 0 || j < 0 || i >= k || j >= k || i == j)
      throw ParseError("expected weight triple \"i j w\"", line_no);
    p.W(i, j) = w;
    p.W(j, i) = w;
  }
  return CompiledProblem::from_params(std::move(p), constant);
}

}  // namespace wpn
