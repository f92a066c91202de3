#pragma once

#include <Eigen/Dense>
#include <vector>

#include "wpn/energy.hpp"
#include "wpn/graph.hpp"

namespace wpn {

/// Size caps for the exhaustive searches; operations refuse larger inputs.
struct OracleLimit {
  int max_vertices = 16;        // subset enumeration, 2^n candidates
  int max_neurons = 20;         // binary state enumeration, 2^K states
  int max_enumeration_n = 6;    // isomorphism-free graph enumeration
};

/// All minimum-cardinality connected dominating sets, found by enumerating
/// subsets in increasing cardinality and stopping at the first feasible one.
/// The graph must be connected.
std::vector<VertexSet> brute_force_mcds(const Graph& g,
                                        const OracleLimit& limit = {});

/// All independent perfect dominating sets (possibly none).
std::vector<VertexSet> brute_force_ipds(const Graph& g,
                                        const OracleLimit& limit = {});

/// All binary fixed points z in {0,1}^K with z_i = step(sum_j w_ij z_j + b_i)
/// for every i, where step(x) = 1 for x > 0 and 0 otherwise (an input of
/// exactly zero switches the unit off, mirroring the dynamics' readout).
std::vector<Eigen::VectorXd> enumerate_stable_states(const HopfieldParams& p,
                                                     const OracleLimit& limit = {});

/// All connected graphs on exactly n vertices, one canonical representative
/// per isomorphism class, in ascending edge-mask order. Counts for
/// n = 1..6 are 1, 1, 2, 6, 21, 112.
std::vector<Graph> enumerate_connected_graphs(int n,
                                              const OracleLimit& limit = {});

}  // namespace wpn
