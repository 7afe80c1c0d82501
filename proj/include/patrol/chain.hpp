#pragma once

#include <Eigen/Dense>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "patrol/graph.hpp"

namespace patrol {

inline constexpr double kRowSumTol = 1e-9;
inline constexpr double kStationaryTol = 1e-8;
inline constexpr double kDetailedBalanceTol = 1e-8;

// Row-stochastic transition matrix with support restricted to the graph.
struct StrategyMatrix {
  Eigen::MatrixXd p;

  int n() const { return static_cast<int>(p.rows()); }
};

struct ValidationReport {
  bool row_stochastic = false;
  bool support_ok = false;
  bool irreducible = false;
  std::optional<bool> stationary_ok;  // set when a target pi is supplied
  std::optional<bool> reversible;     // set when a target pi is supplied
  double max_violation = 0.0;

  bool all_ok() const {
    return row_stochastic && support_ok && irreducible && stationary_ok.value_or(true) &&
           reversible.value_or(true);
  }
};

// Irreducibility = strong connectivity of the positive-support digraph.
inline bool irreducible(const Eigen::MatrixXd& p) {
  const int n = static_cast<int>(p.rows());
  Eigen::MatrixXi support(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) support(i, j) = p(i, j) > 0.0 ? 1 : 0;
  return detail::strongly_connected(n, support);
}

inline bool is_reversible(const StrategyMatrix& chain, const VisitDistribution& pi,
                          double tol = kDetailedBalanceTol) {
  const auto& p = chain.p;
  const int n = chain.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j)
      if (std::abs(pi.pi(i) * p(i, j) - pi.pi(j) * p(j, i)) > tol) return false;
  return true;
}

inline ValidationReport validate(const StrategyMatrix& chain, const SurveillanceGraph& g,
                                 const VisitDistribution* pi = nullptr) {
  const auto& p = chain.p;
  if (p.rows() != g.n || p.cols() != g.n) throw std::invalid_argument("chain/graph dimension mismatch");
  if (pi && pi->pi.size() != g.n) throw std::invalid_argument("pi dimension mismatch");

  ValidationReport rep;
  double viol = 0.0;

  double row_dev = (p.rowwise().sum().array() - 1.0).abs().maxCoeff();
  double neg = std::max(0.0, -p.minCoeff());
  rep.row_stochastic = row_dev <= kRowSumTol && neg <= kRowSumTol;
  viol = std::max({viol, row_dev, neg});

  double off_support = 0.0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      if (!g.has_edge(i, j)) off_support = std::max(off_support, std::abs(p(i, j)));
  rep.support_ok = off_support == 0.0;
  viol = std::max(viol, off_support);

  rep.irreducible = irreducible(p);

  if (pi) {
    double res = ((p.transpose() * pi->pi) - pi->pi).cwiseAbs().maxCoeff();
    rep.stationary_ok = res <= kStationaryTol;
    viol = std::max(viol, res);

    double db = 0.0;
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < i; ++j)
        db = std::max(db, std::abs(pi->pi(i) * p(i, j) - pi->pi(j) * p(j, i)));
    rep.reversible = db <= kDetailedBalanceTol;
    viol = std::max(viol, db);
  }
  rep.max_violation = viol;
  return rep;
}

// Unique stationary distribution of an irreducible chain, by a direct
// solve of (P^T - I) x = 0 with the last equation replaced by 1^T x = 1.
inline VisitDistribution stationary_distribution(const StrategyMatrix& chain) {
  if (!irreducible(chain.p)) throw std::invalid_argument("stationary distribution needs an irreducible chain");
  const int n = chain.n();
  Eigen::MatrixXd a = chain.p.transpose() - Eigen::MatrixXd::Identity(n, n);
  a.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  Eigen::VectorXd pi = lu.solve(b);
  pi += lu.solve(b - a * pi);  // one refinement pass
  if (!pi.allFinite() || (pi.array() <= 0.0).any())
    throw std::runtime_error("stationary solve failed (chain numerically reducible?)");
  return {pi};
}

// Metropolis-Hastings chain with stationary distribution pi: uniform
// proposal over out-neighbors excluding self, rejected mass kept on the
// diagonal. Needs a symmetric edge set with self loops everywhere.
inline StrategyMatrix metropolis_hastings(const SurveillanceGraph& g, const VisitDistribution& pi) {
  check_visit_distribution(pi, g.n);
  if (!g.symmetric()) throw std::invalid_argument("metropolis_hastings needs a symmetric edge set");
  if (!g.self_loops_everywhere())
    throw std::invalid_argument("metropolis_hastings needs self loops at every node");

  const int n = g.n;
  Eigen::VectorXd deg(n);  // proposal degree, self excluded
  for (int i = 0; i < n; ++i) {
    int d = 0;
    for (int j = 0; j < n; ++j)
      if (j != i && g.has_edge(i, j)) ++d;
    deg(i) = d;
  }
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (deg(i) == 0) {  // isolated node: n == 1
      p(i, i) = 1.0;
      continue;
    }
    double stay = 1.0;
    for (int j = 0; j < n; ++j) {
      if (j == i || !g.has_edge(i, j)) continue;
      double accept = std::min(1.0, (pi.pi(j) * deg(i)) / (pi.pi(i) * deg(j)));
      p(i, j) = accept / deg(i);
      stay -= p(i, j);
    }
    p(i, i) = stay;
  }
  return {p};
}

// --- serialization -------------------------------------------------------

inline void save_chain_csv(const StrategyMatrix& chain, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out.precision(17);
  for (int i = 0; i < chain.n(); ++i) {
    for (int j = 0; j < chain.n(); ++j) out << (j ? "," : "") << chain.p(i, j);
    out << "\n";
  }
}

inline StrategyMatrix load_chain_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  const auto n = rows.size();
  Eigen::MatrixXd p(n, n);
  for (size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw std::runtime_error("chain csv is not square");
    for (size_t j = 0; j < n; ++j) p(i, j) = rows[i][j];
  }
  return {p};
}

inline nlohmann::json chain_to_json(const StrategyMatrix& chain) {
  nlohmann::json j;
  j["n"] = chain.n();
  auto& rows = j["rows"] = nlohmann::json::array();
  for (int i = 0; i < chain.n(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < chain.n(); ++k) row.push_back(chain.p(i, k));
    rows.push_back(std::move(row));
  }
  return j;
}

inline StrategyMatrix chain_from_json(const nlohmann::json& j) {
  int n = j.at("n").get<int>();
  Eigen::MatrixXd p(n, n);
  const auto& rows = j.at("rows");
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) p(i, k) = rows.at(i).at(k).get<double>();
  return {p};
}

}  // namespace patrol
