#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wpn/graph.hpp"

namespace wpn {

/// Penalty gains of the domination energy. The full problem needs both
/// strictly positive; setting one to zero isolates the other term.
struct EnergyConfig {
  double g_a = 1.0;
  double g_b = 1.0;
  void validate() const;
};

/// Symmetric weight matrix, bias vector, and sigmoid slope of a recurrent
/// network. W must be symmetric with zero diagonal.
struct HopfieldParams {
  Eigen::MatrixXd W;
  Eigen::VectorXd b;
  double lambda = 30.0;

  int size() const { return static_cast<int>(b.size()); }
  void validate() const;
};

/// Domination energy over outputs z in [0,1]^N:
///   E = 1/2 g_a sum_i sum_{j!=i} e_ij z_i z_j
///     + 1/2 g_b sum_i (1 - sum_{j!=i} e_ij z_j)^2 (1 - z_i)
/// Zero exactly at indicators of independent perfect dominating sets.
double mcds_energy(const Graph& g, const Eigen::Ref<const Eigen::VectorXd>& z,
                   const EnergyConfig& cfg);

/// Exact closed-form gradient of mcds_energy. Summations run over neighbor
/// lists in ascending order so that a mote evaluating its own component from
/// cached values reproduces the identical floating-point result.
Eigen::VectorXd mcds_energy_gradient(const Graph& g,
                                     const Eigen::Ref<const Eigen::VectorXd>& z,
                                     const EnergyConfig& cfg);

/// Liapunov value -1/2 z'Wz + (1/lambda) sum_i L(z_i) - b'z where L is the
/// integral of the unit-slope inverse sigmoid referenced at 0.5, so the
/// middle term vanishes at the sigmoid midpoint and shrinks as lambda grows.
/// Components must lie in the open interval (0, 1).
double quadratic_liapunov(const HopfieldParams& p,
                          const Eigen::Ref<const Eigen::VectorXd>& z);

/// Binary-state quadratic energy -1/2 z'Wz - b'z, the descent function of
/// threshold dynamics on z in {0,1}^K.
double binary_quadratic_energy(const HopfieldParams& p,
                               const Eigen::Ref<const Eigen::VectorXd>& z);

/// Sparse polynomial over z: a monomial is the sorted list of its variable
/// indices with repetition (z_0^2 z_1 -> {0,0,1}).
using Monomial = std::vector<int>;
using Polynomial = std::map<Monomial, double>;

double evaluate_polynomial(const Polynomial& poly,
                           const Eigen::Ref<const Eigen::VectorXd>& z);

/// A problem energy compiled onto network parameters. The quadratic part is
/// the exact monomial match of the source energy against -1/2 z'Wz - b'z
/// (plus a constant); whatever cannot be represented that way (cubic
/// monomials, squared-variable terms) is kept as an explicit residual
/// polynomial, so quadratic part + residual reproduces the energy exactly.
class CompiledProblem {
 public:
  CompiledProblem() = default;  // empty problem; fill via the factories
  static CompiledProblem from_params(HopfieldParams p, double constant = 0.0);

  int size() const { return quadratic_.size(); }
  const HopfieldParams& quadratic() const { return quadratic_; }
  HopfieldParams& quadratic() { return quadratic_; }
  double constant() const { return constant_; }
  const Polynomial& residual() const { return residual_; }
  int residual_order() const { return residual_order_; }

  /// Exact problem energy (the gradient_handle's potential).
  double energy(const Eigen::Ref<const Eigen::VectorXd>& z) const;
  /// Exact problem gradient.
  Eigen::VectorXd energy_gradient(const Eigen::Ref<const Eigen::VectorXd>& z) const;
  /// Single component of the exact gradient, for in-place sweeps.
  double energy_gradient_component(const Eigen::Ref<const Eigen::VectorXd>& z,
                                   int i) const;

  /// constant - 1/2 z'Wz - b'z, the compiled quadratic part alone.
  double quadratic_energy(const Eigen::Ref<const Eigen::VectorXd>& z) const;
  double residual_value(const Eigen::Ref<const Eigen::VectorXd>& z) const;

  bool has_graph() const { return graph_.has_value(); }
  const Graph& graph() const;
  const EnergyConfig& energy_config() const;

 private:
  friend CompiledProblem compile_mcds(const Graph&, const EnergyConfig&);

  HopfieldParams quadratic_;
  double constant_ = 0.0;
  Polynomial residual_;
  int residual_order_ = 0;
  std::optional<Graph> graph_;
  std::optional<EnergyConfig> cfg_;
};

/// Expand the domination energy into monomials and match the linear and
/// cross-quadratic ones against the network pattern; squared-variable and
/// cubic monomials land in the residual.
CompiledProblem compile_mcds(const Graph& g, const EnergyConfig& cfg);

/// Flat text form: one header line "K <k> lambda <l> g_a <a> g_b <b>
/// constant <c>", one "b <values...>" line, then one "i j w" triple per
/// nonzero upper-triangular weight.
std::string format_compiled_problem(const CompiledProblem& prob);
CompiledProblem parse_compiled_problem(const std::string& text);

}  // namespace wpn
