#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "patrol/chain.hpp"
#include "patrol/graph.hpp"
#include "patrol/rng.hpp"

namespace patrol {

// One sampled patrol run. clock[k] is the cumulative travel time after k
// steps (clock[0] = 0), so clock increments are the traversed weights.
struct Trajectory {
  std::vector<int> states;
  std::vector<long long> clock;
  std::uint64_t seed = 0;
};

namespace detail {

inline int sample_row(const Eigen::MatrixXd& p, int i, double u) {
  double cum = 0.0;
  const int n = static_cast<int>(p.cols());
  for (int j = 0; j < n; ++j) {
    cum += p(i, j);
    if (u < cum) return j;
  }
  return n - 1;  // guard against roundoff at u ~ 1
}

}  // namespace detail

inline Trajectory simulate(const StrategyMatrix& chain, const SurveillanceGraph& g, int start,
                           long long steps, std::uint64_t seed) {
  if (start < 0 || start >= g.n) throw std::invalid_argument("invalid start node");
  if (chain.n() != g.n) throw std::invalid_argument("chain/graph dimension mismatch");
  if (!irreducible(chain.p)) throw std::invalid_argument("simulate needs an irreducible chain");
  SplitMix64 rng(seed);
  Trajectory t;
  t.seed = seed;
  t.states.reserve(steps + 1);
  t.clock.reserve(steps + 1);
  int cur = start;
  long long time = 0;
  t.states.push_back(cur);
  t.clock.push_back(0);
  for (long long k = 0; k < steps; ++k) {
    int nxt = detail::sample_row(chain.p, cur, rng.next_double());
    time += g.weights(cur, nxt);
    cur = nxt;
    t.states.push_back(cur);
    t.clock.push_back(time);
  }
  return t;
}

struct Estimate {
  double mean = 0.0;
  double se = 0.0;  // CLT standard error
  long long count = 0;
};

namespace detail {

inline Estimate summarize(double sum, double sumsq, long long cnt) {
  if (cnt == 0) throw std::invalid_argument("no samples collected");
  Estimate e;
  e.count = cnt;
  e.mean = sum / cnt;
  double var = std::max(0.0, sumsq / cnt - e.mean * e.mean);
  e.se = cnt > 1 ? std::sqrt(var / (cnt - 1)) : 0.0;
  return e;
}

}  // namespace detail

// Fraction of steps spent at each node, pooled over trajectories.
inline Eigen::VectorXd empirical_visit_frequency(const std::vector<Trajectory>& trajs, int n) {
  Eigen::VectorXd freq = Eigen::VectorXd::Zero(n);
  long long total = 0;
  for (const auto& t : trajs) {
    for (int s : t.states) freq(s) += 1.0;
    total += static_cast<long long>(t.states.size());
  }
  if (total == 0) throw std::invalid_argument("no samples collected");
  return freq / static_cast<double>(total);
}

// Histogram of return times to `node` in travel-time units, pooled over
// trajectories; the first burn_in steps of each trajectory are dropped.
inline std::map<long long, long long> empirical_return_histogram(const std::vector<Trajectory>& trajs,
                                                                 int node, long long burn_in = 0) {
  std::map<long long, long long> hist;
  for (const auto& t : trajs) {
    long long last_clock = -1;
    for (size_t k = static_cast<size_t>(std::min<long long>(burn_in, t.states.size()));
         k < t.states.size(); ++k) {
      if (t.states[k] != node) continue;
      if (last_clock >= 0) ++hist[t.clock[k] - last_clock];
      last_clock = t.clock[k];
    }
  }
  return hist;
}

// Mean hitting time i -> j in steps, from non-overlapping segments of the
// given trajectories (renewal sampling keeps the segments independent).
inline Estimate empirical_mean_hitting(const std::vector<Trajectory>& trajs, int i, int j) {
  double sum = 0.0, sumsq = 0.0;
  long long cnt = 0;
  for (const auto& t : trajs) {
    size_t k = 0;
    while (k < t.states.size()) {
      while (k < t.states.size() && t.states[k] != i) ++k;
      if (k >= t.states.size()) break;
      size_t start = k++;
      while (k < t.states.size() && t.states[k] != j) ++k;
      if (k >= t.states.size()) break;
      double len = static_cast<double>(k - start);
      sum += len;
      sumsq += len * len;
      ++cnt;
      ++k;  // resume after the hit
    }
  }
  return detail::summarize(sum, sumsq, cnt);
}

// Direct sampler for hitting times, cheaper than storing trajectories
// when sample counts are large. Weighted=false measures steps, true
// measures cumulative travel time.
inline Estimate sample_mean_hitting(const StrategyMatrix& chain, const SurveillanceGraph& g, int i, int j,
                                    long long samples, std::uint64_t seed, bool weighted = false) {
  if (!irreducible(chain.p)) throw std::invalid_argument("hitting sampler needs an irreducible chain");
  double sum = 0.0, sumsq = 0.0;
  for (long long s = 0; s < samples; ++s) {
    SplitMix64 rng(derive_stream(seed, s));
    int cur = i;
    long long time = 0;
    long long steps = 0;
    do {
      int nxt = detail::sample_row(chain.p, cur, rng.next_double());
      time += g.weights(cur, nxt);
      cur = nxt;
      ++steps;
    } while (cur != j);
    double v = weighted ? static_cast<double>(time) : static_cast<double>(steps);
    sum += v;
    sumsq += v * v;
  }
  return detail::summarize(sum, sumsq, samples);
}

// Meeting-time sampler for a pursuer/evader pair from fixed starts.
inline Estimate empirical_meeting(const StrategyMatrix& pursuer, const StrategyMatrix& evader,
                                  std::pair<int, int> starts, long long samples, std::uint64_t seed,
                                  long long step_cap = 100000000) {
  if (pursuer.n() != evader.n()) throw std::invalid_argument("pursuer and evader need a common node set");
  double sum = 0.0, sumsq = 0.0;
  for (long long s = 0; s < samples; ++s) {
    SplitMix64 rng(derive_stream(seed, s));
    int a = starts.first, b = starts.second;
    long long k = 0;
    do {
      a = detail::sample_row(pursuer.p, a, rng.next_double());
      b = detail::sample_row(evader.p, b, rng.next_double());
      ++k;
      if (k > step_cap) throw std::runtime_error("meeting sampler exceeded the step cap (infinite meeting time?)");
    } while (a != b);
    sum += static_cast<double>(k);
    sumsq += static_cast<double>(k) * k;
  }
  return detail::summarize(sum, sumsq, samples);
}

}  // namespace patrol
