#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "patrol/chain.hpp"
#include "patrol/graph.hpp"

namespace patrol {

namespace detail {
inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }
}

// Entropy rate -sum_i pi_i sum_j p_ij log p_ij (natural log) of a chain
// in stationarity. pi must be stationary for p within 1e-6.
inline double entropy_rate(const StrategyMatrix& chain, const VisitDistribution& pi) {
  if (pi.pi.size() != chain.n()) throw std::invalid_argument("pi dimension mismatch");
  if (((chain.p.transpose() * pi.pi) - pi.pi).cwiseAbs().maxCoeff() > 1e-6)
    throw std::invalid_argument("pi is not stationary for the chain");
  double h = 0.0;
  for (int i = 0; i < chain.n(); ++i) {
    double row = 0.0;
    for (int j = 0; j < chain.n(); ++j) row += detail::xlogx(chain.p(i, j));
    h -= pi.pi(i) * row;
  }
  return h;
}

// x -> diag(x) A x
inline Eigen::VectorXd maxent_vector_map(const Eigen::VectorXd& x, const Eigen::MatrixXi& adjacency) {
  return x.asDiagonal() * (adjacency.cast<double>() * x);
}

// x -> diag(Ax)^{-1} A diag(x)
inline Eigen::MatrixXd maxent_matrix_map(const Eigen::VectorXd& x, const Eigen::MatrixXi& adjacency) {
  Eigen::MatrixXd a = adjacency.cast<double>();
  Eigen::VectorXd ax = a * x;
  return ax.cwiseInverse().asDiagonal() * a * x.asDiagonal();
}

struct MaxentropicSolution {
  Eigen::VectorXd x_star;
  StrategyMatrix p_star;
  double value = 0.0;
  long long iterations = 0;
  double residual = 0.0;
};

// Entropy-rate-maximal chain with stationary distribution pi on a
// symmetric graph with self loops at every node. Inverts the vector map
// at pi with the damped linear iteration, then evaluates the matrix map
// and the closed-form optimal value.
inline MaxentropicSolution maximize_entropy_rate(const SurveillanceGraph& g, const VisitDistribution& pi,
                                                 double tol = 1e-10, long long max_iter = 1000000) {
  check_visit_distribution(pi, g.n);
  if (!g.symmetric()) throw std::invalid_argument("entropy-rate maximization needs a symmetric adjacency");
  if (!g.self_loops_everywhere())
    throw std::invalid_argument("entropy-rate maximization needs self loops at every node");

  const Eigen::MatrixXd a = g.adjacency.cast<double>();
  const double eta = (a * pi.pi.cwiseSqrt()).maxCoeff();
  Eigen::VectorXd x = pi.pi / std::sqrt((a * pi.pi).maxCoeff());

  MaxentropicSolution sol;
  double res = std::numeric_limits<double>::infinity();
  long long k = 0;
  while (k < max_iter) {
    Eigen::VectorXd phi = x.asDiagonal() * (a * x);
    res = (phi - pi.pi).cwiseAbs().maxCoeff();
    if (res <= tol) break;
    x -= (phi - pi.pi) / (2.0 * eta);
    ++k;
  }
  if (res > tol) throw std::runtime_error("maxentropic iteration did not converge");

  sol.x_star = x;
  sol.iterations = k;
  sol.residual = res;
  sol.p_star = StrategyMatrix{maxent_matrix_map(x, g.adjacency)};
  Eigen::VectorXd logx = x.array().log().matrix();
  sol.value = -2.0 * x.dot(a * (x.asDiagonal() * logx)) + pi.pi.dot(pi.pi.array().log().matrix());
  return sol;
}

// Consistency gap between the directly evaluated entropy rate of p_star
// and the closed-form optimal value; stays below 1e-6 for a converged
// solution.
inline double entropy_rate_gap(const MaxentropicSolution& sol, const SurveillanceGraph& g,
                               const VisitDistribution& pi) {
  (void)g;
  return entropy_rate(sol.p_star, pi) - sol.value;
}

}  // namespace patrol
