#include "wpn/cost.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace wpn {

std::string to_string(wide_int v) {
  if (v == 0) return "0";
  bool negative = v < 0;
  std::string digits;
  while (v != 0) {
    int d = static_cast<int>(negative ? -(v % 10) : v % 10);
    digits += static_cast<char>('0' + d);
    v /= 10;
  }
  if (negative) digits += '-';
  return {digits.rbegin(), digits.rend()};
}

void CostInputs::validate() const {
  if (n_neurons <= 0 || episodes <= 0 || bytes_per_real <= 0 || group_size <= 0 ||
      channels <= 0 || !(msg_time > 0.0))
    throw std::invalid_argument("all cost inputs must be strictly positive");
}

wide_int state_change_bound(const Eigen::Ref<const Eigen::MatrixXd>& W) {
  if (W.rows() != W.cols())
    throw std::invalid_argument("weight matrix must be square");
  wide_int sum = 0;
  for (int i = 0; i < W.rows(); ++i) {
    if (W(i, i) != 0.0) throw std::invalid_argument("nonzero diagonal weight");
    for (int j = 0; j < i; ++j) {
      double w = W(i, j);
      if (w != W(j, i)) throw std::invalid_argument("weight matrix not symmetric");
      if (w != std::floor(w))
        throw std::invalid_argument("state-change bound requires integer weights");
      sum += static_cast<wide_int>(std::llabs(static_cast<long long>(w)));
    }
  }
  return 3 * sum;
}

wide_int message_complexity(long long n, long long episodes) {
  if (n <= 0 || episodes <= 0)
    throw std::invalid_argument("inputs must be positive");
  wide_int nn = n;
  return static_cast<wide_int>(episodes) * nn * nn * nn;
}

wide_int memory_per_mote(long long n, long long bytes_per_real) {
  if (n < 1 || bytes_per_real <= 0)
    throw std::invalid_argument("need N >= 1 and positive byte width");
  return 2 * static_cast<wide_int>(bytes_per_real) * (static_cast<wide_int>(n) - 1);
}

wide_int centralized_weight_matrix_bytes(long long vertices, long long bytes_per_real) {
  if (vertices < 1 || bytes_per_real <= 0)
    throw std::invalid_argument("need v >= 1 and positive byte width");
  wide_int v = vertices;
  return static_cast<wide_int>(bytes_per_real) * v * v * v * v;
}

ScalabilityEstimate scalability_estimate(const CostInputs& in) {
  in.validate();
  ScalabilityEstimate est;
  est.clusters = in.n_neurons / in.group_size;
  est.cluster_remainder = in.n_neurons % in.group_size;
  if (est.clusters == 0) est.clusters = 1;  // fewer motes than one group
  wide_int total = message_complexity(in.n_neurons, in.episodes);
  est.sequential_messages = total / est.clusters;
  est.wall_seconds = static_cast<double>(est.sequential_messages) * in.msg_time /
                     static_cast<double>(in.channels);
  return est;
}

std::string format_cost_table(const CostInputs& in) {
  in.validate();
  char buf[64];
  std::string out;
  auto row = [&out](const char* kind, const char* name, const std::string& value) {
    out += kind;
    out += '\t';
    out += name;
    out += '\t';
    out += value;
    out += '\n';
  };
  row("input", "n_neurons", std::to_string(in.n_neurons));
  row("input", "episodes", std::to_string(in.episodes));
  row("input", "bytes_per_real", std::to_string(in.bytes_per_real));
  row("input", "group_size", std::to_string(in.group_size));
  std::snprintf(buf, sizeof buf, "%.17g", in.msg_time);
  row("input", "msg_time", buf);
  row("input", "channels", std::to_string(in.channels));
  row("output", "message_complexity",
      to_string(message_complexity(in.n_neurons, in.episodes)));
  row("output", "memory_per_mote_bytes",
      to_string(memory_per_mote(in.n_neurons, in.bytes_per_real)));
  row("output", "centralized_weight_matrix_bytes",
      to_string(centralized_weight_matrix_bytes(in.n_neurons, in.bytes_per_real)));
  ScalabilityEstimate est = scalability_estimate(in);
  row("output", "clusters", to_string(est.clusters));
  row("output", "cluster_remainder", std::to_string(est.cluster_remainder));
  row("output", "sequential_messages", to_string(est.sequential_messages));
  std::snprintf(buf, sizeof buf, "%.17g", est.wall_seconds);
  row("output", "wall_seconds", buf);
  return out;
}

}  // namespace wpn
