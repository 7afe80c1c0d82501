#pragma once

#include <Eigen/Dense>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace patrol {

// Patrol environment: strongly connected directed graph with positive
// integer travel times on the edges. Immutable after construction.
struct SurveillanceGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;  // directed, may include self loops
  Eigen::MatrixXi weights;                 // travel times; 0 off edges
  Eigen::MatrixXi adjacency;               // 0/1, consistent with edges

  bool has_edge(int i, int j) const { return adjacency(i, j) != 0; }

  int max_weight() const {
    int w = 0;
    for (const auto& [i, j] : edges) w = std::max(w, weights(i, j));
    return w;
  }

  bool symmetric() const {
    for (const auto& [i, j] : edges)
      if (!has_edge(j, i)) return false;
    return true;
  }

  bool self_loops_everywhere() const {
    for (int i = 0; i < n; ++i)
      if (!has_edge(i, i)) return false;
    return true;
  }
};

// Target visit frequencies: strictly positive, sums to one.
struct VisitDistribution {
  Eigen::VectorXd pi;
};

namespace detail {

// Reachability of every node from every node, checked with one forward
// and one backward sweep from node 0.
inline bool strongly_connected(int n, const Eigen::MatrixXi& adj) {
  if (n == 0) return false;
  auto sweep = [&](bool forward) {
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < n; ++v) {
        bool edge = forward ? adj(u, v) != 0 : adj(v, u) != 0;
        if (edge && !seen[v]) {
          seen[v] = 1;
          ++count;
          stack.push_back(v);
        }
      }
    }
    return count == n;
  };
  return sweep(true) && sweep(false);
}

}  // namespace detail

inline bool strongly_connected(const SurveillanceGraph& g) {
  return detail::strongly_connected(g.n, g.adjacency);
}

// Builds a graph from an explicit weighted edge list and enforces the
// invariants: positive integer weights, strong connectivity.
inline SurveillanceGraph make_graph(int n, const std::vector<std::tuple<int, int, int>>& weighted_edges) {
  if (n < 1) throw std::invalid_argument("graph needs at least one node");
  SurveillanceGraph g;
  g.n = n;
  g.weights = Eigen::MatrixXi::Zero(n, n);
  g.adjacency = Eigen::MatrixXi::Zero(n, n);
  for (const auto& [i, j, w] : weighted_edges) {
    if (i < 0 || i >= n || j < 0 || j >= n) throw std::invalid_argument("edge endpoint out of range");
    if (w < 1) throw std::invalid_argument("edge weights must be positive integers");
    if (g.adjacency(i, j)) throw std::invalid_argument("duplicate edge");
    g.adjacency(i, j) = 1;
    g.weights(i, j) = w;
    g.edges.emplace_back(i, j);
  }
  if (!strongly_connected(g)) throw std::invalid_argument("graph is not strongly connected");
  return g;
}

// 4-neighbor lattice with unit travel times; symmetric edges, optional
// self loops at every node.
inline SurveillanceGraph make_grid(int rows, int cols, bool self_loops = true) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("grid dimensions must be positive");
  const int n = rows * cols;
  auto id = [cols](int r, int c) { return r * cols + c; };
  std::vector<std::tuple<int, int, int>> es;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (self_loops) es.emplace_back(id(r, c), id(r, c), 1);
      if (c + 1 < cols) {
        es.emplace_back(id(r, c), id(r, c + 1), 1);
        es.emplace_back(id(r, c + 1), id(r, c), 1);
      }
      if (r + 1 < rows) {
        es.emplace_back(id(r, c), id(r + 1, c), 1);
        es.emplace_back(id(r + 1, c), id(r, c), 1);
      }
    }
  if (n == 1 && !self_loops) throw std::invalid_argument("1x1 grid needs a self loop to be connected");
  return make_graph(n, es);
}

inline VisitDistribution uniform_visit_distribution(const SurveillanceGraph& g) {
  return {Eigen::VectorXd::Constant(g.n, 1.0 / g.n)};
}

// San Francisco dataset: 12 locations (A..L) on a complete graph with
// quantized by-car travel times in minutes, visit frequencies
// proportional to recorded crime counts.
inline std::pair<SurveillanceGraph, VisitDistribution> sf_dataset() {
  constexpr int n = 12;
  // clang-format off
  static const int w[n][n] = {
      {1, 3, 3, 5, 4, 6, 3, 5, 7, 4, 6, 6},
      {3, 1, 5, 4, 2, 4, 4, 5, 5, 3, 5, 5},
      {3, 5, 1, 7, 6, 8, 3, 4, 9, 4, 8, 7},
      {6, 4, 7, 1, 5, 6, 4, 7, 5, 6, 6, 7},
      {4, 3, 6, 5, 1, 3, 5, 5, 6, 3, 4, 4},
      {6, 4, 8, 5, 3, 1, 6, 7, 3, 6, 2, 3},
      {2, 5, 3, 5, 6, 7, 1, 5, 7, 5, 7, 8},
      {3, 5, 2, 7, 6, 7, 3, 1, 9, 3, 7, 5},
      {8, 6, 9, 4, 6, 4, 6, 9, 1, 8, 5, 7},
      {4, 3, 4, 6, 3, 5, 5, 3, 7, 1, 5, 3},
      {6, 4, 8, 6, 4, 2, 6, 6, 4, 5, 1, 3},
      {6, 4, 6, 6, 3, 3, 6, 4, 5, 3, 2, 1},
  };
  static const double crimes[n] = {133, 90, 89, 87, 83, 83, 74, 64, 48, 43, 38, 34};
  // clang-format on
  std::vector<std::tuple<int, int, int>> es;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) es.emplace_back(i, j, w[i][j]);
  SurveillanceGraph g = make_graph(n, es);
  Eigen::VectorXd pi(n);
  for (int i = 0; i < n; ++i) pi(i) = crimes[i] / 866.0;
  return {std::move(g), VisitDistribution{std::move(pi)}};
}

inline void check_visit_distribution(const VisitDistribution& d, int n) {
  if (d.pi.size() != n) throw std::invalid_argument("visit distribution has wrong dimension");
  if ((d.pi.array() <= 0.0).any()) throw std::invalid_argument("visit distribution must be strictly positive");
  if (std::abs(d.pi.sum() - 1.0) > 1e-12) throw std::invalid_argument("visit distribution must sum to one");
}

// --- serialization -------------------------------------------------------

// JSON schema: {"n": int, "edges": [[i, j, w], ...], "pi": [..]?}, 0-based.
inline nlohmann::json graph_to_json(const SurveillanceGraph& g, const VisitDistribution* pi = nullptr) {
  nlohmann::json j;
  j["n"] = g.n;
  auto& es = j["edges"] = nlohmann::json::array();
  for (const auto& [a, b] : g.edges) es.push_back({a, b, g.weights(a, b)});
  if (pi) {
    std::vector<double> v(pi->pi.data(), pi->pi.data() + pi->pi.size());
    j["pi"] = v;
  }
  return j;
}

inline std::pair<SurveillanceGraph, VisitDistribution> graph_from_json(const nlohmann::json& j) {
  int n = j.at("n").get<int>();
  std::vector<std::tuple<int, int, int>> es;
  for (const auto& e : j.at("edges")) es.emplace_back(e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>());
  SurveillanceGraph g = make_graph(n, es);
  VisitDistribution d;
  if (j.contains("pi")) {
    auto v = j.at("pi").get<std::vector<double>>();
    d.pi = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
    check_visit_distribution(d, n);
  }
  return {std::move(g), std::move(d)};
}

inline void save_graph(const SurveillanceGraph& g, const std::string& path, const VisitDistribution* pi = nullptr) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << graph_to_json(g, pi).dump(2) << "\n";
}

inline std::pair<SurveillanceGraph, VisitDistribution> load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  in >> j;
  return graph_from_json(j);
}

inline std::string graph_to_dot(const SurveillanceGraph& g) {
  std::ostringstream out;
  out << "digraph patrol {\n";
  for (const auto& [i, j] : g.edges)
    out << "  " << i << " -> " << j << " [label=" << g.weights(i, j) << "];\n";
  out << "}\n";
  return out.str();
}

}  // namespace patrol
