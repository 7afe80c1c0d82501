#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "patrol/chain.hpp"
#include "patrol/graph.hpp"
#include "patrol/hitting.hpp"
#include "patrol/parallel.hpp"
#include "patrol/return_time.hpp"
#include "patrol/rng.hpp"

namespace patrol {

// Constraint polytope for strategy synthesis: row sums one, prescribed
// stationary distribution, support restricted to the graph, a minimum
// transition probability on supported entries, optional detailed balance.
struct FeasibleSpec {
  SurveillanceGraph graph;
  VisitDistribution pi;
  double epsilon = 0.0;
  bool reversible = false;
};

// Euclidean projection onto the feasible polytope by Dykstra's
// alternating projections between the affine equality set (closed-form
// least squares, factorized once) and the box p >= epsilon on the
// support. Off-support entries are eliminated, not constrained.
class PolytopeProjector {
 public:
  explicit PolytopeProjector(const FeasibleSpec& spec)
      : n_(spec.graph.n), epsilon_(spec.epsilon) {
    check_visit_distribution(spec.pi, n_);
    int max_deg = 0;
    for (int i = 0; i < n_; ++i) {
      int d = 0;
      for (int j = 0; j < n_; ++j) d += spec.graph.has_edge(i, j) ? 1 : 0;
      max_deg = std::max(max_deg, d);
    }
    if (spec.epsilon < 0.0 || spec.epsilon * max_deg > 1.0)
      throw std::invalid_argument("epsilon too large for the graph's out-degrees");

    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (spec.graph.has_edge(i, j)) {
          index_.emplace_back(i, j);
        }
    const int s = static_cast<int>(index_.size());
    const Eigen::VectorXd& pi = spec.pi.pi;

    struct Entry {
      int row, col;
      double coeff;
    };
    std::vector<Entry> entries;  // (constraint row, support index, coeff)
    int rows = 0;
    for (int i = 0; i < n_; ++i, ++rows)  // row sums
      for (int k = 0; k < s; ++k)
        if (index_[k].first == i) entries.push_back({rows, k, 1.0});
    for (int j = 0; j < n_; ++j, ++rows)  // stationarity columns
      for (int k = 0; k < s; ++k)
        if (index_[k].second == j) entries.push_back({rows, k, pi(index_[k].first)});
    std::vector<double> rhs(static_cast<size_t>(2) * n_);
    for (int i = 0; i < n_; ++i) rhs[i] = 1.0;
    for (int j = 0; j < n_; ++j) rhs[n_ + j] = pi(j);

    if (spec.reversible) {
      for (int k = 0; k < s; ++k) {
        auto [i, j] = index_[k];
        if (i >= j) continue;  // diagonal entries satisfy balance trivially
        int back = find(j, i);
        if (back >= 0) {
          entries.push_back({rows, k, pi(i)});
          entries.push_back({rows, back, -pi(j)});
        } else {
          entries.push_back({rows, k, 1.0});  // one-way edge must carry no mass
        }
        rhs.push_back(0.0);
        ++rows;
      }
      // one-way edges (j,i) with i<j and no (i,j) partner
      for (int k = 0; k < s; ++k) {
        auto [i, j] = index_[k];
        if (i <= j) continue;
        if (find(j, i) < 0) {
          entries.push_back({rows, k, 1.0});
          rhs.push_back(0.0);
          ++rows;
        }
      }
    }

    c_ = Eigen::MatrixXd::Zero(rows, s);
    for (const auto& e : entries) c_(e.row, e.col) = e.coeff;
    d_ = Eigen::Map<const Eigen::VectorXd>(rhs.data(), rows);
    cod_.compute(c_);  // rank-revealing; tolerates redundant constraints
  }

  int support_size() const { return static_cast<int>(index_.size()); }

  Eigen::VectorXd to_coords(const Eigen::MatrixXd& p) const {
    Eigen::VectorXd x(index_.size());
    for (size_t k = 0; k < index_.size(); ++k) x(k) = p(index_[k].first, index_[k].second);
    return x;
  }

  Eigen::MatrixXd to_matrix(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n_, n_);
    for (size_t k = 0; k < index_.size(); ++k) p(index_[k].first, index_[k].second) = x(k);
    return p;
  }

  Eigen::VectorXd project_affine(const Eigen::VectorXd& x) const {
    return x - cod_.solve(c_ * x - d_);  // min-norm correction lies in the row space
  }

  Eigen::MatrixXd project(const Eigen::MatrixXd& q, double tol = 1e-10, int max_sweeps = 10000) const {
    Eigen::VectorXd x = to_coords(q);
    // roundoff in the affine solve scales with the input, so the stopping
    // tolerance has to as well
    const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
    const double tol_eff = tol * scale;
    // the split between the two partial projections bounds the affine
    // residual of the returned (box-feasible) iterate
    const double split_tol = std::max(tol_eff, 1e-8 * scale);
    Eigen::VectorXd inc_a = Eigen::VectorXd::Zero(x.size());
    Eigen::VectorXd inc_b = Eigen::VectorXd::Zero(x.size());
    double change = 0.0, split = 0.0;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
      Eigen::VectorXd y = project_affine(x + inc_a);
      inc_a = x + inc_a - y;
      Eigen::VectorXd z = (y + inc_b).cwiseMax(epsilon_);
      inc_b = y + inc_b - z;
      change = (z - x).cwiseAbs().maxCoeff();
      split = (z - y).cwiseAbs().maxCoeff();
      x = z;
      if (change <= tol_eff && split <= split_tol) return to_matrix(x);
    }
    // the slow linear tail can leave the iterate fractionally short of the
    // change tolerance while already feasible; that point is still usable
    if (split <= split_tol && change <= 1e-6 * scale) return to_matrix(x);
    std::ostringstream msg;
    msg << "Dykstra projection did not converge (empty or degenerate polytope?); change=" << change
        << " split=" << split << " scale=" << scale;
    throw std::runtime_error(msg.str());
  }

 private:
  int find(int i, int j) const {
    for (size_t k = 0; k < index_.size(); ++k)
      if (index_[k].first == i && index_[k].second == j) return static_cast<int>(k);
    return -1;
  }

  int n_;
  double epsilon_;
  std::vector<std::pair<int, int>> index_;
  Eigen::MatrixXd c_;
  Eigen::VectorXd d_;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod_;
};

struct OptimizeResult {
  StrategyMatrix p;
  double objective = 0.0;
  int restarts = 0;
  int best_restart = 0;
  long long iterations = 0;
  bool converged = false;
  std::vector<double> history;            // objective trace of the best restart
  std::vector<double> restart_objectives; // final objective per restart
};

namespace detail {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct PgdOptions {
  int max_iter = 5000;
  double grad_tol = 1e-8;
  double armijo = 1e-4;
  double shrink = 0.5;
  double min_step = 1e-16;
  double raw_step_cap = 100.0;  // trial points beyond this radius stall the projection
  bool spectral_step = false;   // Barzilai-Borwein initial step (monotone Armijo still applies)
};

struct PgdTrace {
  Eigen::MatrixXd p;
  double objective = kInf;
  long long iterations = 0;
  bool converged = false;
  std::vector<double> history;
};

// Projected gradient descent. Each iteration projects the raw gradient
// step once and Armijo-backtracks from 1.0 along the feasible segment
// toward the projected point, so trial points stay in the polytope and
// approach the iterate exactly as the step shrinks.
inline PgdTrace projected_gradient(const Eigen::MatrixXd& p0, const PolytopeProjector& proj,
                                   const std::function<double(const Eigen::MatrixXd&)>& f,
                                   const std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>& grad,
                                   const PgdOptions& opt = {}) {
  PgdTrace trace;
  Eigen::MatrixXd p = p0;
  double fx = f(p);
  trace.history.push_back(fx);
  Eigen::MatrixXd prev_p, prev_g;
  for (int iter = 0; iter < opt.max_iter; ++iter) {
    Eigen::MatrixXd g = grad(p);
    const double gnorm = g.norm();
    double t0 = std::min(1.0, gnorm > 0.0 ? opt.raw_step_cap / gnorm : 1.0);
    if (opt.spectral_step && iter > 0) {
      Eigen::MatrixXd s = p - prev_p;
      Eigen::MatrixXd y = g - prev_g;
      double sy = (s.array() * y.array()).sum();
      if (sy > 0.0) {
        double bb = s.squaredNorm() / sy;
        t0 = std::clamp(bb, 1e-10, opt.raw_step_cap / std::max(gnorm, 1e-300));
      }
    }
    // stationarity is measured on the unit-step projected gradient; with
    // an enormous gradient the iterate cannot be stationary, so skip
    Eigen::MatrixXd unit_cand;
    const bool have_unit = gnorm <= opt.raw_step_cap;
    if (have_unit) {
      unit_cand = proj.project(p - g);
      if ((p - unit_cand).norm() <= opt.grad_tol) {
        trace.converged = true;
        break;
      }
    }
    Eigen::MatrixXd base = (have_unit && t0 == 1.0) ? unit_cand : proj.project(p - t0 * g);
    Eigen::MatrixXd d = base - p;
    double gd = (g.array() * d.array()).sum();
    if (gd >= 0.0 && have_unit) {  // spectral direction spoiled; retry with unit step
      d = unit_cand - p;
      gd = (g.array() * d.array()).sum();
    }
    ++trace.iterations;
    if (gd >= 0.0) break;  // no descent available up to projection accuracy
    prev_p = p;
    prev_g = g;
    double tau = 1.0;
    bool accepted = false;
    while (tau >= opt.min_step) {
      Eigen::MatrixXd cand = p + tau * d;
      double fc = f(cand);
      if (std::isfinite(fc) && fc <= fx + opt.armijo * tau * gd) {
        p = cand;
        fx = fc;
        accepted = true;
        break;
      }
      tau *= opt.shrink;
    }
    if (!accepted) break;  // no admissible step left
    trace.history.push_back(fx);
  }
  trace.p = p;
  trace.objective = fx;
  return trace;
}

// Feasible starting points: the Metropolis-Hastings chain when the graph
// admits one, then Dykstra projections of random support-respecting
// matrices. Candidates whose objective is infinite are redrawn.
inline std::vector<Eigen::MatrixXd> initial_points(const FeasibleSpec& spec, const PolytopeProjector& proj,
                                                   int count, std::uint64_t seed,
                                                   const std::function<double(const Eigen::MatrixXd&)>& f) {
  std::vector<Eigen::MatrixXd> pts;
  // MH chains are reversible, so the point is admissible in both modes
  if (spec.graph.symmetric() && spec.graph.self_loops_everywhere()) {
    try {
      Eigen::MatrixXd mh = metropolis_hastings(spec.graph, spec.pi).p;
      if (spec.epsilon > 0.0) mh = proj.project(mh);
      if (std::isfinite(f(mh))) pts.push_back(mh);
    } catch (const std::exception&) {
    }
  }
  SplitMix64 rng(derive_stream(seed, 0x5eedULL));
  int guard = 0;
  while (static_cast<int>(pts.size()) < count && guard < 20 * count + 100) {
    ++guard;
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(spec.graph.n, spec.graph.n);
    for (int i = 0; i < spec.graph.n; ++i) {
      double row = 0.0;
      for (int j = 0; j < spec.graph.n; ++j)
        if (spec.graph.has_edge(i, j)) {
          q(i, j) = rng.next_double();
          row += q(i, j);
        }
      if (row > 0.0) q.row(i) /= row;
    }
    try {
      Eigen::MatrixXd p = proj.project(q);
      if (std::isfinite(f(p))) pts.push_back(p);
    } catch (const std::exception&) {
    }
  }
  if (pts.empty()) throw std::runtime_error("no feasible starting point found (infeasible spec?)");
  return pts;
}

// Multi-start driver; restart r is fully determined by (seed, r), so the
// result is independent of the worker pool size.
inline OptimizeResult multistart(const FeasibleSpec& spec, const PolytopeProjector& proj, int restarts,
                                 std::uint64_t seed,
                                 const std::function<double(const Eigen::MatrixXd&)>& f,
                                 const std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>& grad,
                                 const PgdOptions& opt = {}) {
  auto starts = initial_points(spec, proj, restarts, seed, f);
  std::vector<PgdTrace> traces(starts.size());
  std::vector<std::exception_ptr> errors(starts.size());
  parallel_for_index(static_cast<int>(starts.size()), [&](int r) {
    try {
      traces[r] = projected_gradient(starts[r], proj, f, grad, opt);
    } catch (...) {
      errors[r] = std::current_exception();
    }
  });
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  int best = -1;
  for (int r = 0; r < static_cast<int>(traces.size()); ++r)
    if (best < 0 || traces[r].objective < traces[best].objective) best = r;
  OptimizeResult res;
  // re-project from a feasible-scale input to pin the constraints tightly
  res.p = StrategyMatrix{proj.project(traces[best].p)};
  res.objective = traces[best].objective;
  res.restarts = static_cast<int>(traces.size());
  res.best_restart = best;
  res.iterations = traces[best].iterations;
  res.converged = traces[best].converged;
  res.history = std::move(traces[best].history);
  res.restart_objectives.reserve(traces.size());
  for (const auto& t : traces) res.restart_objectives.push_back(t.objective);
  return res;
}

// Smooth extension of the Kemeny constant: Tr((I - P + 1 pi^T)^{-1}),
// which equals M(P) whenever pi is stationary for P. Its gradient is
// (Z^2)^T with Z the fundamental matrix.
class KemenyObjective {
 public:
  KemenyObjective(const Eigen::VectorXd& pi) : pi_(pi) {}

  double value(const Eigen::MatrixXd& p) const {
    if (!irreducible(p)) return kInf;  // reducible support means infinite hitting times
    Eigen::FullPivLU<Eigen::MatrixXd> lu(shift(p));
    if (!lu.isInvertible()) return kInf;
    double v = lu.inverse().trace();
    // hitting times are >= 1, so anything below is a near-singular artifact
    return std::isfinite(v) && v >= 1.0 ? v : kInf;
  }

  Eigen::MatrixXd gradient(const Eigen::MatrixXd& p) const {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(shift(p));
    Eigen::MatrixXd z = lu.inverse();
    return (z * z).transpose();
  }

 private:
  Eigen::MatrixXd shift(const Eigen::MatrixXd& p) const {
    const int n = static_cast<int>(p.rows());
    return Eigen::MatrixXd::Identity(n, n) - p + Eigen::VectorXd::Ones(n) * pi_.transpose();
  }

  Eigen::VectorXd pi_;
};

}  // namespace detail

// Problem: minimum mean hitting time (Kemeny constant) over general
// chains with prescribed stationary distribution. Nonconvex; multi-start
// projected gradient.
inline OptimizeResult minimize_mean_hitting(const FeasibleSpec& spec, int restarts = 100,
                                            std::uint64_t seed = 0) {
  if (spec.reversible) throw std::invalid_argument("use minimize_mean_hitting_reversible for the reversible problem");
  PolytopeProjector proj(spec);
  detail::KemenyObjective obj(spec.pi.pi);
  auto f = [&](const Eigen::MatrixXd& p) { return obj.value(p); };
  auto g = [&](const Eigen::MatrixXd& p) { return obj.gradient(p); };
  OptimizeResult res = detail::multistart(spec, proj, restarts, seed, f, g);
  res.objective = mean_hitting_times(res.p).kemeny;
  return res;
}

// Problem: minimum (weighted) mean hitting time over reversible chains.
// The objective is convex on the reversible polytope, so a single start
// suffices; two extra random starts act as an agreement certificate.
inline OptimizeResult minimize_mean_hitting_reversible(const FeasibleSpec& spec_in, bool weighted = false,
                                                       std::uint64_t seed = 0) {
  FeasibleSpec spec = spec_in;
  spec.reversible = true;
  PolytopeProjector proj(spec);
  detail::KemenyObjective obj(spec.pi.pi);
  const Eigen::MatrixXd w = spec.graph.weights.cast<double>();
  auto travel = [&](const Eigen::MatrixXd& p) { return spec.pi.pi.dot(p.cwiseProduct(w).rowwise().sum()); };
  std::function<double(const Eigen::MatrixXd&)> f;
  std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)> g;
  if (weighted) {
    f = [&](const Eigen::MatrixXd& p) {
      double base = obj.value(p);
      return std::isfinite(base) ? travel(p) * base : detail::kInf;
    };
    g = [&](const Eigen::MatrixXd& p) {
      Eigen::MatrixXd gw = spec.pi.pi.asDiagonal() * w;
      return travel(p) * obj.gradient(p) + obj.value(p) * gw;
    };
  } else {
    f = [&](const Eigen::MatrixXd& p) { return obj.value(p); };
    g = [&](const Eigen::MatrixXd& p) { return obj.gradient(p); };
  }
  detail::PgdOptions opt;
  opt.spectral_step = true;  // plain unit steps crawl on this polytope
  OptimizeResult res = detail::multistart(spec, proj, 3, seed, f, g, opt);
  // convexity certificate: independent starts must land on one value
  double lo = detail::kInf, hi = -detail::kInf;
  for (double v : res.restart_objectives) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi - lo > 1e-4 * std::max(1.0, std::abs(lo))) res.converged = false;
  if (weighted)
    res.objective = weighted_mean_hitting_times(res.p, spec.graph).kemeny;
  else
    res.objective = mean_hitting_times(res.p).kemeny;
  return res;
}

// Problem: minimum weighted mean hitting time over general chains.
inline OptimizeResult minimize_weighted_mean_hitting(const FeasibleSpec& spec, int restarts = 100,
                                                     std::uint64_t seed = 0) {
  if (spec.reversible) throw std::invalid_argument("reversible variant is handled by minimize_mean_hitting_reversible");
  PolytopeProjector proj(spec);
  detail::KemenyObjective obj(spec.pi.pi);
  const Eigen::MatrixXd w = spec.graph.weights.cast<double>();
  auto travel = [&](const Eigen::MatrixXd& p) { return spec.pi.pi.dot(p.cwiseProduct(w).rowwise().sum()); };
  auto f = [&](const Eigen::MatrixXd& p) {
    double base = obj.value(p);
    return std::isfinite(base) ? travel(p) * base : detail::kInf;
  };
  auto g = [&](const Eigen::MatrixXd& p) {
    Eigen::MatrixXd gw = spec.pi.pi.asDiagonal() * w;
    return travel(p) * obj.gradient(p) + obj.value(p) * gw;
  };
  OptimizeResult res = detail::multistart(spec, proj, restarts, seed, f, g);
  res.objective = weighted_mean_hitting_times(res.p, spec.graph).kemeny;
  return res;
}

namespace detail {

// Expected meeting time pi_p^T M pi_e of the pursuer candidate against a
// fixed evader, with the adjoint-system gradient. Pair states that miss
// the diagonal make the objective infinite.
class MeetingObjective {
 public:
  MeetingObjective(const Eigen::MatrixXd& pe, const Eigen::VectorXd& pi_p, const Eigen::VectorXd& pi_e)
      : pe_(pe), pip_(pi_p), pie_(pi_e) {}

  double value(const Eigen::MatrixXd& pp) const {
    Eigen::VectorXd m;
    if (!solve(pp, m)) return kInf;
    return cost(m);
  }

  Eigen::MatrixXd gradient(const Eigen::MatrixXd& pp) const {
    const int n = static_cast<int>(pp.rows());
    Eigen::MatrixXd a;
    build(pp, a);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    Eigen::VectorXd m = lu.solve(Eigen::VectorXd::Ones(n * n));
    Eigen::VectorXd c(n * n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) c(i + j * n) = pip_(i) * pie_(j);
    Eigen::VectorXd lambda = lu.transpose().solve(c);
    // grad = Lambda * P^e * U^T with U = M - diag(M)
    Eigen::MatrixXd mm = Eigen::Map<Eigen::MatrixXd>(m.data(), n, n);
    Eigen::MatrixXd u = mm;
    u.diagonal().setZero();
    Eigen::MatrixXd lam = Eigen::Map<Eigen::MatrixXd>(lambda.data(), n, n);
    return lam * pe_ * u.transpose();
  }

 private:
  void build(const Eigen::MatrixXd& pp, Eigen::MatrixXd& a) const {
    const int n = static_cast<int>(pp.rows());
    a = Eigen::MatrixXd::Identity(n * n, n * n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const int row = i + j * n;
        for (int h = 0; h < n; ++h) {
          if (pe_(j, h) == 0.0) continue;
          for (int k = 0; k < n; ++k) {
            if (k == h || pp(i, k) == 0.0) continue;
            a(row, k + h * n) -= pp(i, k) * pe_(j, h);
          }
        }
      }
  }

  bool solve(const Eigen::MatrixXd& pp, Eigen::VectorXd& m) const {
    const int n = static_cast<int>(pp.rows());
    if (!all_pairs_meet(pp)) return false;
    Eigen::MatrixXd a;
    build(pp, a);
    m = Eigen::PartialPivLU<Eigen::MatrixXd>(a).solve(Eigen::VectorXd::Ones(n * n));
    return m.allFinite();
  }

  bool all_pairs_meet(const Eigen::MatrixXd& pp) const {
    for (char r : patrol::detail::reaches_diagonal(pp, pe_))
      if (!r) return false;
    return true;
  }

  double cost(const Eigen::VectorXd& m) const {
    const int n = static_cast<int>(pip_.size());
    double acc = 0.0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) acc += pip_(i) * pie_(j) * m(i + j * n);
    return acc;
  }

  Eigen::MatrixXd pe_;
  Eigen::VectorXd pip_, pie_;
};

}  // namespace detail

// Problem: minimum expected meeting time against a fixed evader.
inline OptimizeResult minimize_meeting_time(const FeasibleSpec& spec, const StrategyMatrix& evader,
                                            const VisitDistribution& pi_e, int restarts = 100,
                                            std::uint64_t seed = 0) {
  if (evader.n() != spec.graph.n) throw std::invalid_argument("evader dimension mismatch");
  PolytopeProjector proj(spec);
  detail::MeetingObjective obj(evader.p, spec.pi.pi, pi_e.pi);
  auto f = [&](const Eigen::MatrixXd& p) { return obj.value(p); };
  auto g = [&](const Eigen::MatrixXd& p) { return obj.gradient(p); };
  OptimizeResult res = detail::multistart(spec, proj, restarts, seed, f, g);
  if (!std::isfinite(res.objective))
    throw std::runtime_error("no feasible pursuer with a finite expected meeting time was found");
  MeetingSummary summary = meeting_times(res.p, evader, spec.pi, pi_e);
  res.objective = summary.expected;
  return res;
}

// Problem: maximum truncated return-time entropy at accuracy eta.
inline OptimizeResult maximize_return_entropy(const FeasibleSpec& spec, double eta = 0.1, int restarts = 10,
                                              std::uint64_t seed = 0, int max_iter = 400) {
  if (spec.epsilon <= 0.0)
    throw std::invalid_argument("return-entropy maximization needs a positive minimum transition probability");
  const long long horizon = truncation_horizon(spec.graph, spec.pi, eta);
  PolytopeProjector proj(spec);
  auto f = [&](const Eigen::MatrixXd& p) {
    return -return_time_entropy(StrategyMatrix{p}, spec.graph, spec.pi, horizon);
  };
  auto g = [&](const Eigen::MatrixXd& p) {
    return (-return_time_entropy_gradient(StrategyMatrix{p}, spec.graph, spec.pi, horizon).grad).eval();
  };
  detail::PgdOptions opt;
  opt.max_iter = max_iter;  // ascent flattens early; gradients are the cost driver
  OptimizeResult res = detail::multistart(spec, proj, restarts, seed, f, g, opt);
  res.objective = return_time_entropy(res.p, spec.graph, spec.pi, horizon);
  for (auto& h : res.history) h = -h;
  return res;
}

// Euclidean projection helper mirroring the polytope definition.
inline StrategyMatrix project(const Eigen::MatrixXd& q, const FeasibleSpec& spec) {
  return StrategyMatrix{PolytopeProjector(spec).project(q)};
}

}  // namespace patrol
