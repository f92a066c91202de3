#pragma once

#include <string>
#include <vector>

#include "wpn/graph.hpp"

namespace wpn {

/// Named small-graph families: "P<k>" paths, "C<k>" cycles, "K1_<k>" stars,
/// "K<k>" complete graphs.
Graph named_family(const std::string& name);

struct VerifyOptions {
  int max_n = 6;  // enumerate all connected graphs up to this size (0 = none)
  std::vector<std::string> families = {"P3", "C4", "K1_3", "K1_5"};
  std::uint64_t seed = 1;
  bool corrupt = false;  // negative control: inject one wrong expectation
};

struct CheckResult {
  std::string name;
  bool passed = true;
  long checks_run = 0;
  std::vector<std::string> failures;  // reproducers, capped
};

/// The cross-module invariant suite:
///   energy_ipds_equivalence  zero energy at an indicator iff the set is an
///                            independent perfect dominating set, for every
///                            subset of every corpus graph;
///   flip_bound               asynchronous binary runs on random integer
///                            weights never increase the quadratic energy at
///                            a flip and never exceed the state-change bound;
///   distributed_centralized  lockstep simulation (ideal TDMA, delta = 0,
///                            synchronized rounds) reproduces the
///                            centralized trajectory.
std::vector<CheckResult> run_verification(const VerifyOptions& options);

}  // namespace wpn
