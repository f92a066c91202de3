#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

namespace wpn {

// The counts here overflow 64 bits well before the sizes of interest
// (m * N^3 at N = 10^7), so the calculators accumulate in 128-bit integers.
using wide_int = __int128;

std::string to_string(wide_int v);

/// Inputs of the analytic cost calculators.
struct CostInputs {
  long long n_neurons = 1;     // N
  long long episodes = 1;      // m, convergence episodes
  long long bytes_per_real = 4;  // y
  long long group_size = 10;
  double msg_time = 1e-6;      // seconds per message
  long long channels = 1;
  void validate() const;
};

/// 3 * sum_{j<i} |w_ij| for a symmetric zero-diagonal integer matrix; the
/// bound on neuron state changes of any asynchronous binary run. Rejects
/// non-integer entries.
wide_int state_change_bound(const Eigen::Ref<const Eigen::MatrixXd>& W);

/// m * N^3 messages over all convergence episodes.
wide_int message_complexity(long long n, long long episodes);

/// 2 * y * (N-1) bytes: one weight vector and one output cache per mote.
wide_int memory_per_mote(long long n, long long bytes_per_real);

/// y * v^4 bytes: the dense weight matrix of an N x N-neuron mapping held
/// on a single machine.
wide_int centralized_weight_matrix_bytes(long long vertices, long long bytes_per_real);

struct ScalabilityEstimate {
  wide_int clusters = 0;
  long long cluster_remainder = 0;
  wide_int sequential_messages = 0;
  double wall_seconds = 0.0;
};

/// clusters = N / group_size, sequential = m*N^3 / clusters, wall time =
/// sequential * msg_time / channels.
ScalabilityEstimate scalability_estimate(const CostInputs& in);

/// Delimited cost table: every input and every calculator output, one
/// "kind<TAB>name<TAB>value" row.
std::string format_cost_table(const CostInputs& in);

}  // namespace wpn
