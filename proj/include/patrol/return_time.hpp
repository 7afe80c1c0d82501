#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "patrol/chain.hpp"
#include "patrol/graph.hpp"

namespace patrol {

// Rounds real travel times to integer multiples of `unit`, clamping to a
// minimum of 1 so edges keep positive delays. With an adjacency mask only
// masked entries are quantized; without one every entry must be positive.
inline Eigen::MatrixXi quantize_weights(const Eigen::MatrixXd& w_real, double unit,
                                        const Eigen::MatrixXi* adjacency = nullptr) {
  if (unit <= 0.0) throw std::invalid_argument("quantization unit must be positive");
  Eigen::MatrixXi w = Eigen::MatrixXi::Zero(w_real.rows(), w_real.cols());
  for (Eigen::Index i = 0; i < w_real.rows(); ++i)
    for (Eigen::Index j = 0; j < w_real.cols(); ++j) {
      if (adjacency && (*adjacency)(i, j) == 0) continue;
      if (w_real(i, j) <= 0.0) throw std::invalid_argument("travel times must be positive");
      w(i, j) = std::max(1, static_cast<int>(std::llround(w_real(i, j) / unit)));
    }
  return w;
}

// Truncation horizon N_eta with tail guarantee Pr(T_ii > N_eta) <= eta
// for every node and every feasible chain, from Markov's inequality with
// the P-independent bound E[T_ii] <= w_max / pi_i.
inline long long truncation_horizon(const SurveillanceGraph& g, const VisitDistribution& pi, double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in (0, 1]");
  check_visit_distribution(pi, g.n);
  const double w_max = g.max_weight();
  return static_cast<long long>(std::floor(w_max / (pi.pi.minCoeff() * eta)));
}

// First hitting/return time probabilities over the weighted graph:
// f[k-1](i,j) = Pr(T^w_ij = k) for k = 1..horizon.
struct ReturnTimeSeries {
  long long horizon = 0;
  std::vector<Eigen::MatrixXd> f;
  Eigen::VectorXd tail_bound;  // per-node bound on the discarded return mass
};

namespace detail {

struct DelayedEdge {
  int to;
  int delay;
  double prob;
};

inline std::vector<std::vector<DelayedEdge>> delayed_adjacency(const Eigen::MatrixXd& p,
                                                               const SurveillanceGraph& g) {
  if (p.rows() != g.n) throw std::invalid_argument("chain/graph dimension mismatch");
  std::vector<std::vector<DelayedEdge>> adj(g.n);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      if (p(i, j) != 0.0) {
        if (!g.has_edge(i, j)) throw std::invalid_argument("chain support leaves the graph's edges");
        adj[i].push_back({j, g.weights(i, j), p(i, j)});
      }
  return adj;
}

// Runs the delayed recursion for one target column j, keeping a sliding
// window of w_max previous slices; on_slice(k, col) sees F_k(.,j) and
// returns false to stop early.
template <typename Fn>
inline void column_recursion(const std::vector<std::vector<DelayedEdge>>& adj, int n, int j,
                             long long horizon, int w_max, Fn&& on_slice) {
  const int depth = w_max + 1;
  Eigen::MatrixXd ring = Eigen::MatrixXd::Zero(n, depth);
  Eigen::VectorXd cur(n);
  for (long long k = 1; k <= horizon; ++k) {
    const int slot = static_cast<int>(k % depth);
    for (int i = 0; i < n; ++i) {
      double v = 0.0;
      for (const auto& e : adj[i]) {
        if (e.to == j) {
          if (k == e.delay) v += e.prob;
        } else if (k - e.delay >= 1) {
          v += e.prob * ring(e.to, (k - e.delay) % depth);
        }
      }
      cur(i) = v;
    }
    ring.col(slot) = cur;
    if (!on_slice(k, cur)) return;
  }
}

inline void check_stationary(const StrategyMatrix& chain, const VisitDistribution& pi) {
  if (pi.pi.size() != chain.n()) throw std::invalid_argument("pi dimension mismatch");
  if (((chain.p.transpose() * pi.pi) - pi.pi).cwiseAbs().maxCoeff() > 1e-6)
    throw std::invalid_argument("pi is not stationary for the chain");
}

}  // namespace detail

inline ReturnTimeSeries return_time_distribution(const StrategyMatrix& chain, const SurveillanceGraph& g,
                                                 long long horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  auto adj = detail::delayed_adjacency(chain.p, g);
  ReturnTimeSeries out;
  out.horizon = horizon;
  out.f.assign(horizon, Eigen::MatrixXd::Zero(g.n, g.n));
  for (int j = 0; j < g.n; ++j)
    detail::column_recursion(adj, g.n, j, horizon, g.max_weight(),
                             [&](long long k, const Eigen::VectorXd& col) {
                               out.f[k - 1].col(j) = col;
                               return true;
                             });
  out.tail_bound.resize(g.n);
  for (int i = 0; i < g.n; ++i) {
    double mass = 0.0;
    for (const auto& fk : out.f) mass += fk(i, i);
    out.tail_bound(i) = std::max(0.0, 1.0 - mass);
  }
  return out;
}

// Smallest horizon at which every node's return-time tail mass drops to
// `tail_tol`, measured exactly along the recursion (grows until the cap).
inline long long tail_horizon(const StrategyMatrix& chain, const SurveillanceGraph& g, double tail_tol,
                              long long cap = 1000000) {
  auto adj = detail::delayed_adjacency(chain.p, g);
  const int w_max = g.max_weight();
  long long needed = 0;
  for (int j = 0; j < g.n; ++j) {
    double mass = 0.0;
    long long reached = -1;
    detail::column_recursion(adj, g.n, j, cap, w_max, [&](long long k, const Eigen::VectorXd& col) {
      mass += col(j);
      if (1.0 - mass <= tail_tol) reached = k;
      return reached < 0;
    });
    if (reached < 0) throw std::runtime_error("return-time tail did not fall below tolerance before cap");
    needed = std::max(needed, reached);
  }
  return needed;
}

// Truncated return-time entropy
//   -sum_i pi_i sum_{k<=horizon} F_k(i,i) log F_k(i,i)   (natural log).
inline double return_time_entropy(const StrategyMatrix& chain, const SurveillanceGraph& g,
                                  const VisitDistribution& pi, long long horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  detail::check_stationary(chain, pi);
  auto adj = detail::delayed_adjacency(chain.p, g);
  const int w_max = g.max_weight();
  double h = 0.0;
  for (int j = 0; j < g.n; ++j) {
    double hj = 0.0;
    detail::column_recursion(adj, g.n, j, horizon, w_max, [&](long long, const Eigen::VectorXd& col) {
      double x = col(j);
      if (x > 0.0) hj -= x * std::log(x);
      return true;
    });
    h += pi.pi(j) * hj;
  }
  return h;
}

struct EntropyGradient {
  double value = 0.0;
  Eigen::MatrixXd grad;  // partials w.r.t. p_uv on the support, 0 elsewhere
};

// Gradient of the truncated return-time entropy w.r.t. the supported
// transition probabilities, with pi held fixed as the weight vector.
// Forward sensitivity propagation of the recursion, batched over all
// supported entries: per target column the sensitivity stack carries one
// lane per edge and advances with the same sliding window as F itself.
inline EntropyGradient return_time_entropy_gradient(const StrategyMatrix& chain, const SurveillanceGraph& g,
                                                    const VisitDistribution& pi, long long horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  detail::check_stationary(chain, pi);
  auto adj = detail::delayed_adjacency(chain.p, g);
  const int n = g.n;
  const int w_max = g.max_weight();
  const int depth = w_max + 1;

  // edge lanes
  struct Lane {
    int u, v, w;
  };
  std::vector<Lane> lanes;
  for (int u = 0; u < n; ++u)
    for (const auto& e : adj[u]) lanes.push_back({u, e.to, e.delay});
  const int E = static_cast<int>(lanes.size());

  EntropyGradient out;
  out.grad = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(E);

  std::vector<double> fring(static_cast<size_t>(depth) * n);
  std::vector<double> gring(static_cast<size_t>(depth) * n * E);
  std::vector<double> fcur(n);

  for (int j = 0; j < n; ++j) {
    std::fill(fring.begin(), fring.end(), 0.0);
    std::fill(gring.begin(), gring.end(), 0.0);
    double hj = 0.0;
    Eigen::VectorXd gj = Eigen::VectorXd::Zero(E);
    for (long long k = 1; k <= horizon; ++k) {
      const int slot = static_cast<int>(k % depth);
      double* gslot = gring.data() + static_cast<size_t>(slot) * n * E;
      for (int i = 0; i < n; ++i) {
        double v = 0.0;
        double* gi = gslot + static_cast<size_t>(i) * E;
        std::fill(gi, gi + E, 0.0);
        for (const auto& e : adj[i]) {
          if (e.to == j) {
            if (k == e.delay) v += e.prob;
            continue;
          }
          if (k - e.delay < 1) continue;
          const int src = static_cast<int>((k - e.delay) % depth);
          v += e.prob * fring[static_cast<size_t>(src) * n + e.to];
          const double* gh = gring.data() + (static_cast<size_t>(src) * n + e.to) * E;
          const double w = e.prob;
          for (int l = 0; l < E; ++l) gi[l] += w * gh[l];
        }
        fcur[i] = v;
      }
      // direct dependence of F_k(u, j) on p_uv
      for (int l = 0; l < E; ++l) {
        const Lane& ln = lanes[l];
        if (ln.v == j) {
          if (k == ln.w) gslot[static_cast<size_t>(ln.u) * E + l] += 1.0;
        } else if (k - ln.w >= 1) {
          gslot[static_cast<size_t>(ln.u) * E + l] +=
              fring[(static_cast<size_t>((k - ln.w) % depth)) * n + ln.v];
        }
      }
      for (int i = 0; i < n; ++i) fring[static_cast<size_t>(slot) * n + i] = fcur[i];
      const double x = fcur[j];
      if (x > 0.0) {
        hj -= x * std::log(x);
        const double scale = 1.0 + std::log(x);
        const double* gdiag = gslot + static_cast<size_t>(j) * E;
        for (int l = 0; l < E; ++l) gj(l) -= scale * gdiag[l];
      }
    }
    out.value += pi.pi(j) * hj;
    acc += pi.pi(j) * gj;
  }
  for (int l = 0; l < E; ++l) out.grad(lanes[l].u, lanes[l].v) = acc(l);
  return out;
}

}  // namespace patrol
