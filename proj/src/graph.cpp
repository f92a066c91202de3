#include "wpn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "wpn/errors.hpp"
#include "wpn/rng.hpp"

namespace wpn {

Graph::Graph(int n) : n_(n) {
  if (n <= 0) throw std::invalid_argument("vertex count must be positive");
  adj_ = Eigen::MatrixXd::Zero(n, n);
  nbrs_.resize(static_cast<std::size_t>(n));
}

void Graph::check_vertex(int v) const {
  if (v < 0 || v >= n_)
    throw std::out_of_range("vertex " + std::to_string(v) + " outside [0, " +
                            std::to_string(n_) + ")");
}

void Graph::add_edge(int u, int v) {
  check_vertex(u);
  check_vertex(v);
  if (u == v) throw std::invalid_argument("self-loops are not allowed");
  if (adj_(u, v) != 0.0) return;  // duplicate
  adj_(u, v) = 1.0;
  adj_(v, u) = 1.0;
  auto& nu = nbrs_[static_cast<std::size_t>(u)];
  auto& nv = nbrs_[static_cast<std::size_t>(v)];
  nu.insert(std::lower_bound(nu.begin(), nu.end(), v), v);
  nv.insert(std::lower_bound(nv.begin(), nv.end(), u), u);
}

bool Graph::has_edge(int u, int v) const {
  check_vertex(u);
  check_vertex(v);
  return adj_(u, v) != 0.0;
}

int Graph::degree(int v) const {
  check_vertex(v);
  return static_cast<int>(nbrs_[static_cast<std::size_t>(v)].size());
}

std::int64_t Graph::edge_count() const {
  std::int64_t total = 0;
  for (const auto& list : nbrs_) total += static_cast<std::int64_t>(list.size());
  return total / 2;
}

const std::vector<int>& Graph::neighbors(int v) const {
  check_vertex(v);
  return nbrs_[static_cast<std::size_t>(v)];
}

void Graph::set_positions(std::vector<Eigen::Vector2d> positions) {
  if (static_cast<int>(positions.size()) != n_)
    throw std::invalid_argument("expected exactly " + std::to_string(n_) +
                                " positions");
  positions_ = std::move(positions);
}

bool Graph::is_connected() const {
  if (n_ <= 1) return true;
  std::vector<char> seen(static_cast<std::size_t>(n_), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : nbrs_[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == n_;
}

bool Graph::operator==(const Graph& other) const {
  return n_ == other.n_ && nbrs_ == other.nbrs_;
}

VertexSet::VertexSet(std::vector<int> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  if (!members_.empty() && members_.front() < 0)
    throw std::out_of_range("negative vertex index in set");
}

VertexSet VertexSet::from_mask(std::uint32_t mask, int n) {
  std::vector<int> members;
  for (int v = 0; v < n; ++v)
    if (mask & (1u << v)) members.push_back(v);
  return VertexSet(std::move(members));
}

bool VertexSet::contains(int v) const {
  return std::binary_search(members_.begin(), members_.end(), v);
}

std::uint32_t VertexSet::mask() const {
  std::uint32_t m = 0;
  for (int v : members_) m |= (1u << v);
  return m;
}

bool VertexSet::operator<(const VertexSet& other) const {
  if (members_.size() != other.members_.size())
    return members_.size() < other.members_.size();
  return members_ < other.members_;
}

std::string to_string(const VertexSet& s) {
  std::string out;
  for (std::size_t i = 0; i < s.members().size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(s.members()[i]);
  }
  return out;
}

namespace {

void check_set(const Graph& g, const VertexSet& s) {
  if (!s.empty() && s.members().back() >= g.size())
    throw std::out_of_range("set member " + std::to_string(s.members().back()) +
                            " outside graph of size " + std::to_string(g.size()));
}

}  // namespace

Graph parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  int n = -1;
  Graph g;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;  // blank line
    if (n < 0) {
      long declared = 0;
      std::string extra;
      if (first != "n" || !(ls >> declared) || (ls >> extra))
        throw ParseError("expected header \"n <count>\"", line_no);
      if (declared <= 0)
        throw ParseError("vertex count must be positive", line_no);
      n = static_cast<int>(declared);
      g = Graph(n);
      continue;
    }
    long u = 0, v = 0;
    std::string extra;
    std::istringstream es(line);
    if (!(es >> u >> v) || (es >> extra))
      throw ParseError("expected edge \"u v\"", line_no);
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw ParseError("vertex index out of range [0, " + std::to_string(n) + ")",
                       line_no);
    if (u == v) throw ParseError("self-loop not allowed", line_no);
    g.add_edge(static_cast<int>(u), static_cast<int>(v));
  }
  if (n < 0) throw ParseError("missing header \"n <count>\"", line_no);
  return g;
}

std::string render_edge_list(const Graph& g) {
  std::string out = "n " + std::to_string(g.size()) + "\n";
  for (int u = 0; u < g.size(); ++u)
    for (int v : g.neighbors(u))
      if (u < v) out += std::to_string(u) + " " + std::to_string(v) + "\n";
  return out;
}

Graph generate_unit_disk(const std::vector<Eigen::Vector2d>& points, double radius) {
  if (points.empty()) throw std::invalid_argument("need at least one point");
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  const int n = static_cast<int>(points.size());
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if ((points[static_cast<std::size_t>(i)] - points[static_cast<std::size_t>(j)])
              .norm() <= radius)
        g.add_edge(i, j);
  g.set_positions(points);
  return g;
}

Graph generate_random_geometric(int n, double radius, std::uint64_t seed) {
  if (n <= 0) throw std::invalid_argument("vertex count must be positive");
  std::mt19937_64 gen(seed);
  std::vector<Eigen::Vector2d> points;
  points.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = uniform_unit(gen);
    double y = uniform_unit(gen);
    points.emplace_back(x, y);
  }
  return generate_unit_disk(points, radius);
}

Graph path_graph(int n) {
  Graph g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

Graph cycle_graph(int n) {
  if (n < 3) throw std::invalid_argument("cycle needs at least 3 vertices");
  Graph g = path_graph(n);
  g.add_edge(n - 1, 0);
  return g;
}

Graph star_graph(int leaves) {
  if (leaves < 1) throw std::invalid_argument("star needs at least one leaf");
  Graph g(leaves + 1);
  for (int i = 1; i <= leaves; ++i) g.add_edge(0, i);
  return g;
}

Graph complete_graph(int n) {
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

bool is_dominating_set(const Graph& g, const VertexSet& s) {
  check_set(g, s);
  for (int v = 0; v < g.size(); ++v) {
    if (s.contains(v)) continue;
    bool covered = false;
    for (int w : g.neighbors(v)) {
      if (s.contains(w)) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
  }
  return true;
}

bool is_connected_in_graph(const Graph& g, const VertexSet& s) {
  check_set(g, s);
  if (s.size() <= 1) return true;  // convention
  const auto& members = s.members();
  std::vector<char> seen(members.size(), 0);
  auto index_of = [&](int v) {
    return static_cast<std::size_t>(
        std::lower_bound(members.begin(), members.end(), v) - members.begin());
  };
  std::vector<int> stack{members.front()};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : g.neighbors(v)) {
      if (!s.contains(w)) continue;
      std::size_t wi = index_of(w);
      if (!seen[wi]) {
        seen[wi] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == members.size();
}

bool is_independent_perfect_dominating(const Graph& g, const VertexSet& s) {
  check_set(g, s);
  for (int v : s.members())
    for (int w : g.neighbors(v))
      if (s.contains(w)) return false;  // adjacent members
  for (int v = 0; v < g.size(); ++v) {
    if (s.contains(v)) continue;
    int active = 0;
    for (int w : g.neighbors(v))
      if (s.contains(w)) ++active;
    if (active != 1) return false;
  }
  return true;
}

Eigen::VectorXd indicator(const VertexSet& s, int n) {
  if (!s.empty() && s.members().back() >= n)
    throw std::out_of_range("set member outside indicator length");
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  for (int v : s.members()) z(v) = 1.0;
  return z;
}

VertexSet binary_readout(const Eigen::Ref<const Eigen::VectorXd>& z) {
  std::vector<int> members;
  for (int i = 0; i < z.size(); ++i)
    if (z(i) > 0.5) members.push_back(i);
  return VertexSet(std::move(members));
}

}  // namespace wpn
