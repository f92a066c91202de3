#include "wpn/oracle.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>
#include <string>

namespace wpn {

namespace {

void check_cap(int n, int cap, const char* what) {
  if (n > cap)
    throw std::invalid_argument(std::string(what) + ": size " +
                                std::to_string(n) + " exceeds cap " +
                                std::to_string(cap));
}

}  // namespace

std::vector<VertexSet> brute_force_mcds(const Graph& g, const OracleLimit& limit) {
  check_cap(g.size(), limit.max_vertices, "brute_force_mcds");
  if (!g.is_connected())
    throw std::invalid_argument("brute_force_mcds: input graph is disconnected");
  const int n = g.size();
  std::vector<VertexSet> found;
  for (int card = 1; card <= n; ++card) {
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      if (std::popcount(mask) != card) continue;
      VertexSet s = VertexSet::from_mask(mask, n);
      if (is_dominating_set(g, s) && is_connected_in_graph(g, s))
        found.push_back(std::move(s));
    }
    if (!found.empty()) break;  // first feasible cardinality is minimum
  }
  std::sort(found.begin(), found.end());
  return found;
}

std::vector<VertexSet> brute_force_ipds(const Graph& g, const OracleLimit& limit) {
  check_cap(g.size(), limit.max_vertices, "brute_force_ipds");
  const int n = g.size();
  std::vector<VertexSet> found;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    VertexSet s = VertexSet::from_mask(mask, n);
    if (is_independent_perfect_dominating(g, s)) found.push_back(std::move(s));
  }
  std::sort(found.begin(), found.end());
  return found;
}

std::vector<Eigen::VectorXd> enumerate_stable_states(const HopfieldParams& p,
                                                     const OracleLimit& limit) {
  p.validate();
  const int k = p.size();
  check_cap(k, limit.max_neurons, "enumerate_stable_states");
  std::vector<Eigen::VectorXd> stable;
  Eigen::VectorXd z(k);
  for (std::uint64_t mask = 0; mask < (1ull << k); ++mask) {
    for (int i = 0; i < k; ++i) z(i) = (mask >> i) & 1 ? 1.0 : 0.0;
    bool fixed = true;
    for (int i = 0; i < k && fixed; ++i) {
      double net = p.W.row(i).dot(z) + p.b(i);
      double next = net > 0.0 ? 1.0 : 0.0;
      fixed = next == z(i);
    }
    if (fixed) stable.push_back(z);
  }
  return stable;
}

namespace {

// Pair index of (i, j), i < j, in the row-major upper triangle.
int pair_index(int i, int j, int n) {
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

bool mask_connected(std::uint32_t mask, int n) {
  if (n <= 1) return true;
  std::vector<std::uint32_t> adj(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (mask & (1u << pair_index(i, j, n))) {
        adj[static_cast<std::size_t>(i)] |= 1u << j;
        adj[static_cast<std::size_t>(j)] |= 1u << i;
      }
  std::uint32_t seen = 1, frontier = 1;
  while (frontier) {
    std::uint32_t next = 0;
    for (int v = 0; v < n; ++v)
      if (frontier & (1u << v)) next |= adj[static_cast<std::size_t>(v)];
    frontier = next & ~seen;
    seen |= next;
  }
  return seen == (n >= 32 ? ~0u : (1u << n) - 1);
}

}  // namespace

std::vector<Graph> enumerate_connected_graphs(int n, const OracleLimit& limit) {
  if (n <= 0) throw std::invalid_argument("vertex count must be positive");
  check_cap(n, limit.max_enumeration_n, "enumerate_connected_graphs");
  const int pairs = n * (n - 1) / 2;

  // Remap tables: for each permutation, where each edge slot lands.
  std::vector<std::vector<int>> remap;
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::vector<int> table(static_cast<std::size_t>(pairs));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        int pi = perm[static_cast<std::size_t>(i)];
        int pj = perm[static_cast<std::size_t>(j)];
        if (pi > pj) std::swap(pi, pj);
        table[static_cast<std::size_t>(pair_index(i, j, n))] =
            pair_index(pi, pj, n);
      }
    remap.push_back(std::move(table));
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<Graph> graphs;
  for (std::uint32_t mask = 0; mask < (1u << pairs); ++mask) {
    if (!mask_connected(mask, n)) continue;
    std::uint32_t canon = mask;
    for (const auto& table : remap) {
      std::uint32_t mapped = 0;
      for (int p = 0; p < pairs; ++p)
        if (mask & (1u << p)) mapped |= 1u << table[static_cast<std::size_t>(p)];
      canon = std::min(canon, mapped);
    }
    if (canon != mask) continue;  // not the class representative
    Graph g(n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (mask & (1u << pair_index(i, j, n))) g.add_edge(i, j);
    graphs.push_back(std::move(g));
  }
  return graphs;
}

}  // namespace wpn
