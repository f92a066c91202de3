#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace wpn {

/// Undirected simple graph over 0-based vertex ids.
///
/// Adjacency is held in two synchronized forms: a dense 0/1 indicator matrix
/// (energy sums run directly over e_ij) and sorted neighbor lists (traversal
/// and simulation walk edges). add_edge keeps both in step.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n);

  int size() const { return n_; }
  void add_edge(int u, int v);
  bool has_edge(int u, int v) const;
  int degree(int v) const;
  std::int64_t edge_count() const;

  const Eigen::MatrixXd& adjacency() const { return adj_; }
  const std::vector<int>& neighbors(int v) const;

  void set_positions(std::vector<Eigen::Vector2d> positions);
  bool has_positions() const { return !positions_.empty(); }
  const std::vector<Eigen::Vector2d>& positions() const { return positions_; }

  bool is_connected() const;

  bool operator==(const Graph& other) const;

 private:
  void check_vertex(int v) const;

  int n_ = 0;
  Eigen::MatrixXd adj_;
  std::vector<std::vector<int>> nbrs_;
  std::vector<Eigen::Vector2d> positions_;
};

/// Subset of vertices, stored sorted and unique.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::vector<int> members);
  VertexSet(std::initializer_list<int> members)
      : VertexSet(std::vector<int>(members)) {}
  static VertexSet from_mask(std::uint32_t mask, int n);

  bool contains(int v) const;
  int size() const { return static_cast<int>(members_.size()); }
  bool empty() const { return members_.empty(); }
  const std::vector<int>& members() const { return members_; }
  std::uint32_t mask() const;

  bool operator==(const VertexSet& other) const { return members_ == other.members_; }
  bool operator<(const VertexSet& other) const;

 private:
  std::vector<int> members_;
};

std::string to_string(const VertexSet& s);

// Edge-list text format: first line "n <count>", then one "u v" line per
// edge. parse accepts duplicates and either orientation; render emits the
// canonical form (sorted pairs, u < v).
Graph parse_edge_list(const std::string& text);
std::string render_edge_list(const Graph& g);

Graph generate_unit_disk(const std::vector<Eigen::Vector2d>& points, double radius);

// n points uniform on the unit square from the given seed, then the
// unit-disk rule. Deterministic per seed.
Graph generate_random_geometric(int n, double radius, std::uint64_t seed);

Graph path_graph(int n);
Graph cycle_graph(int n);
Graph star_graph(int leaves);  // K_{1,leaves}; vertex 0 is the hub
Graph complete_graph(int n);

/// Every vertex outside s has at least one neighbor in s.
bool is_dominating_set(const Graph& g, const VertexSet& s);

/// The subgraph induced by s is connected. Empty and singleton sets count
/// as connected.
bool is_connected_in_graph(const Graph& g, const VertexSet& s);

/// No two members of s are adjacent, and every vertex outside s has exactly
/// one neighbor in s.
bool is_independent_perfect_dominating(const Graph& g, const VertexSet& s);

/// 0/1 vector of length n with ones at the members of s.
Eigen::VectorXd indicator(const VertexSet& s, int n);

/// Active set of an output vector: z_i > 0.5 (ties at exactly 0.5 are
/// inactive).
VertexSet binary_readout(const Eigen::Ref<const Eigen::VectorXd>& z);

}  // namespace wpn
