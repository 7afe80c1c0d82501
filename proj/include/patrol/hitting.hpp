#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "patrol/chain.hpp"
#include "patrol/graph.hpp"

namespace patrol {

// Mean hitting statistics of a single chain. For unit travel times the
// diagonal of m is 1/pi and m*pi is a constant vector whose value is the
// Kemeny constant; with travel times the kemeny field holds the
// pi-weighted double sum instead.
struct HittingSummary {
  Eigen::MatrixXd m;
  double kemeny = 0.0;
  Eigen::VectorXd expected_returns;
};

namespace detail {

// Solves the deleted system for target j: (I - P with row/col j removed)
// x = rhs restricted off j. Returns the full column with x(j) left 0.
inline Eigen::VectorXd deleted_column_solve(const Eigen::MatrixXd& p, const Eigen::VectorXd& rhs, int j) {
  const int n = static_cast<int>(p.rows());
  Eigen::MatrixXd a(n - 1, n - 1);
  Eigen::VectorXd b(n - 1);
  for (int r = 0, ri = 0; r < n; ++r) {
    if (r == j) continue;
    b(ri) = rhs(r);
    for (int c = 0, ci = 0; c < n; ++c) {
      if (c == j) continue;
      a(ri, ci) = (r == c ? 1.0 : 0.0) - p(r, c);
      ++ci;
    }
    ++ri;
  }
  Eigen::VectorXd x = Eigen::PartialPivLU<Eigen::MatrixXd>(a).solve(b);
  if (!x.allFinite()) throw std::runtime_error("hitting-time solve failed");
  Eigen::VectorXd full = Eigen::VectorXd::Zero(n);
  for (int r = 0, ri = 0; r < n; ++r)
    if (r != j) full(r) = x(ri++);
  return full;
}

inline HittingSummary hitting_summary(const Eigen::MatrixXd& p, const Eigen::VectorXd& step_cost,
                                      const Eigen::VectorXd& pi, double diag_scale) {
  const int n = static_cast<int>(p.rows());
  HittingSummary s;
  s.m.resize(n, n);
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd col = deleted_column_solve(p, step_cost, j);
    s.m.col(j) = col;
    s.m(j, j) = diag_scale / pi(j);
  }
  s.expected_returns = s.m.diagonal();
  return s;
}

}  // namespace detail

// Mean hitting matrix M of an irreducible chain with unit travel times,
// one deleted linear solve per target column; diag(M) = 1/pi. The kemeny
// field is the (state-independent) value of M*pi.
inline HittingSummary mean_hitting_times(const StrategyMatrix& chain) {
  if (!irreducible(chain.p)) throw std::invalid_argument("mean hitting times need an irreducible chain");
  const Eigen::VectorXd pi = stationary_distribution(chain).pi;
  HittingSummary s = detail::hitting_summary(chain.p, Eigen::VectorXd::Ones(chain.n()), pi, 1.0);
  s.kemeny = (s.m * pi)(0);
  return s;
}

// Kemeny constant through the spectrum: 1 + sum_{j>=2} 1/(1-lambda_j).
inline double kemeny_constant(const StrategyMatrix& chain) {
  if (!irreducible(chain.p)) throw std::invalid_argument("kemeny constant needs an irreducible chain");
  Eigen::EigenSolver<Eigen::MatrixXd> es(chain.p, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalue solver failed");
  const auto& lambda = es.eigenvalues();
  int perron = -1;
  for (int k = 0; k < lambda.size(); ++k)
    if (std::abs(lambda(k) - std::complex<double>(1.0, 0.0)) <= 1e-9) {
      if (perron >= 0) throw std::runtime_error("multiple unit eigenvalues on an irreducible chain");
      perron = k;
    }
  if (perron < 0) throw std::runtime_error("no unit eigenvalue found");
  std::complex<double> sum = 0.0;
  for (int k = 0; k < lambda.size(); ++k)
    if (k != perron) sum += 1.0 / (1.0 - lambda(k));
  return 1.0 + sum.real();
}

// pi^T (P o W) 1: expected travel time per step in stationarity.
inline double mean_step_time(const StrategyMatrix& chain, const SurveillanceGraph& g,
                             const Eigen::VectorXd& pi) {
  return pi.dot((chain.p.cwiseProduct(g.weights.cast<double>())).rowwise().sum());
}

// Weighted mean hitting matrix M^w over the graph's travel times.
// diag(M^w) = (pi^T (P o W) 1) / pi, and the kemeny field holds
// M^w(P) = pi^T M^w pi, which factorizes as (pi^T (P o W) 1) * M(P).
inline HittingSummary weighted_mean_hitting_times(const StrategyMatrix& chain, const SurveillanceGraph& g) {
  if (chain.n() != g.n) throw std::invalid_argument("chain/graph dimension mismatch");
  if (!irreducible(chain.p)) throw std::invalid_argument("weighted hitting times need an irreducible chain");
  const Eigen::VectorXd pi = stationary_distribution(chain).pi;
  const double step = mean_step_time(chain, g, pi);
  Eigen::VectorXd row_cost = (chain.p.cwiseProduct(g.weights.cast<double>())).rowwise().sum();
  HittingSummary s = detail::hitting_summary(chain.p, row_cost, pi, step);
  s.kemeny = pi.dot(s.m * pi);
  // factorization identity, cross-checked against the unit-weight route
  double unit = mean_hitting_times(chain).kemeny;
  if (std::abs(s.kemeny - step * unit) > 1e-8 * std::max(1.0, std::abs(s.kemeny)))
    throw std::runtime_error("weighted hitting factorization check failed");
  return s;
}

// Team hitting times for N robots with independent strategies on a
// common node set. Row r encodes the robot configuration in base n with
// the last robot's location varying fastest; column j is the target.
struct TeamHittingTable {
  int robots = 0;
  Eigen::MatrixXd m;  // n^N x n
};

// Solves the vectorized linear system per target column as a sparse
// system over robot configurations; the Kronecker operator is assembled
// row by row, never densely.
inline TeamHittingTable team_hitting_times(const std::vector<StrategyMatrix>& robots,
                                           double entry_cap = 1e6) {
  if (robots.empty()) throw std::invalid_argument("team hitting times need at least one robot");
  const int n = robots.front().n();
  const int N = static_cast<int>(robots.size());
  for (const auto& r : robots) {
    if (r.n() != n) throw std::invalid_argument("robots must share one node set");
    if (!irreducible(r.p)) throw std::invalid_argument("every robot strategy must be irreducible");
  }
  if (std::pow(n, N + 1) > entry_cap) throw std::invalid_argument("team hitting table exceeds the entry budget");

  long long rows = 1;
  for (int h = 0; h < N; ++h) rows *= n;

  // sparse out-neighbor lists per robot
  std::vector<std::vector<std::pair<int, double>>> moves(static_cast<size_t>(N) * n);
  for (int h = 0; h < N; ++h)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        if (robots[h].p(i, k) > 0.0) moves[static_cast<size_t>(h) * n + i].emplace_back(k, robots[h].p(i, k));

  TeamHittingTable table;
  table.robots = N;
  table.m.resize(rows, n);

  std::vector<int> config(N), dest(N);
  for (int j = 0; j < n; ++j) {
    std::vector<Eigen::Triplet<double>> trips;
    for (long long r = 0; r < rows; ++r) {
      long long rr = r;
      for (int h = N - 1; h >= 0; --h) {
        config[h] = static_cast<int>(rr % n);
        rr /= n;
      }
      trips.emplace_back(r, r, 1.0);
      // enumerate joint moves that avoid the target
      std::vector<size_t> idx(N, 0);
      while (true) {
        double prob = 1.0;
        long long r2 = 0;
        bool hits = false;
        for (int h = 0; h < N; ++h) {
          const auto& [to, pr] = moves[static_cast<size_t>(h) * n + config[h]][idx[h]];
          if (to == j) {
            hits = true;
            break;
          }
          prob *= pr;
          r2 = r2 * n + to;
        }
        if (!hits) trips.emplace_back(r, r2, -prob);
        // advance the odometer
        int h = N - 1;
        while (h >= 0) {
          if (++idx[h] < moves[static_cast<size_t>(h) * n + config[h]].size()) break;
          idx[h] = 0;
          --h;
        }
        if (h < 0) break;
      }
    }
    Eigen::SparseMatrix<double> a(rows, rows);
    a.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(a);
    if (lu.info() != Eigen::Success) throw std::runtime_error("team hitting system is singular");
    Eigen::VectorXd sol = lu.solve(Eigen::VectorXd::Ones(rows));
    if (!sol.allFinite()) throw std::runtime_error("team hitting solve failed");
    table.m.col(j) = sol;
  }
  return table;
}

// Meeting times of a pursuer and an evader moving simultaneously.
// m(i,j) is the expected first time (>= 1) the agents share a node,
// started from pursuer at i and evader at j; +inf when the pair state
// cannot reach the diagonal of the product chain.
struct MeetingSummary {
  Eigen::MatrixXd m;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> finite;
  double expected = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

// Pair states that can reach the diagonal in >= 1 step, by a backward
// sweep over the support of the product chain.
inline std::vector<char> reaches_diagonal(const Eigen::MatrixXd& pp, const Eigen::MatrixXd& pe) {
  const int n = static_cast<int>(pp.rows());
  const int m = n * n;
  auto vid = [n](int i, int j) { return i + j * n; };
  // reverse adjacency of the product support
  std::vector<std::vector<int>> rev(m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (pp(i, k) <= 0.0) continue;
        for (int h = 0; h < n; ++h)
          if (pe(j, h) > 0.0) rev[vid(k, h)].push_back(vid(i, j));
      }
  std::vector<char> reach(m, 0);
  std::vector<int> stack;
  // seed: predecessors of diagonal states
  for (int k = 0; k < n; ++k)
    for (int prev : rev[vid(k, k)])
      if (!reach[prev]) {
        reach[prev] = 1;
        stack.push_back(prev);
      }
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    int i = v % n, j = v / n;
    if (i == j) continue;  // arriving at the diagonal stops the process
    for (int prev : rev[v])
      if (!reach[prev]) {
        reach[prev] = 1;
        stack.push_back(prev);
      }
  }
  return reach;
}

}  // namespace detail

inline MeetingSummary meeting_times(const StrategyMatrix& pursuer, const StrategyMatrix& evader,
                                    const std::optional<VisitDistribution>& pi_p = std::nullopt,
                                    const std::optional<VisitDistribution>& pi_e = std::nullopt) {
  const int n = pursuer.n();
  if (evader.n() != n) throw std::invalid_argument("pursuer and evader need a common node set");
  const auto& pp = pursuer.p;
  const auto& pe = evader.p;
  auto vid = [n](int i, int j) { return i + j * n; };

  std::vector<char> reach = detail::reaches_diagonal(pp, pe);

  // linear system over off-diagonal pair states that reach the diagonal
  std::vector<int> index(static_cast<size_t>(n) * n, -1);
  std::vector<int> states;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (i != j && reach[vid(i, j)]) {
        index[vid(i, j)] = static_cast<int>(states.size());
        states.push_back(vid(i, j));
      }
  const int s = static_cast<int>(states.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(s, s);
  for (int r = 0; r < s; ++r) {
    int i = states[r] % n, j = states[r] / n;
    for (int k = 0; k < n; ++k) {
      if (pp(i, k) <= 0.0) continue;
      for (int h = 0; h < n; ++h) {
        if (k == h || pe(j, h) <= 0.0) continue;
        int c = index[vid(k, h)];
        if (c >= 0) a(r, c) -= pp(i, k) * pe(j, h);
      }
    }
  }
  Eigen::VectorXd t;
  if (s > 0) {
    t = Eigen::PartialPivLU<Eigen::MatrixXd>(a).solve(Eigen::VectorXd::Ones(s));
    if (!t.allFinite()) throw std::runtime_error("meeting-time solve failed");
  }

  MeetingSummary out;
  out.m.resize(n, n);
  out.finite.resize(n, n);
  const double inf = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!reach[vid(i, j)]) {
        out.m(i, j) = inf;
        out.finite(i, j) = false;
        continue;
      }
      double v = 1.0;
      for (int k = 0; k < n; ++k) {
        if (pp(i, k) <= 0.0) continue;
        for (int h = 0; h < n; ++h) {
          if (k == h || pe(j, h) <= 0.0) continue;
          int c = index[vid(k, h)];
          if (c >= 0) v += pp(i, k) * pe(j, h) * t(c);
        }
      }
      out.m(i, j) = v;
      out.finite(i, j) = true;
    }

  // expected meeting time over stationary starts, when defined
  Eigen::VectorXd wp, we;
  try {
    wp = pi_p ? pi_p->pi : stationary_distribution(pursuer).pi;
    we = pi_e ? pi_e->pi : stationary_distribution(evader).pi;
  } catch (const std::exception&) {
    return out;  // no stationary starts available; expected stays NaN
  }
  bool defined = true;
  double acc = 0.0;
  for (int i = 0; i < n && defined; ++i)
    for (int j = 0; j < n; ++j) {
      double w = wp(i) * we(j);
      if (w <= 0.0) continue;
      if (!out.finite(i, j)) {
        defined = false;
        break;
      }
      acc += w * out.m(i, j);
    }
  out.expected = defined ? acc : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace patrol
