#include <chrono>
#include <iostream>

#include "patrol/chain.hpp"
#include "patrol/entropy_rate.hpp"
#include "patrol/graph.hpp"
#include "patrol/hitting.hpp"
#include "patrol/optimize.hpp"
#include "patrol/return_time.hpp"
#include "patrol/sim.hpp"

using namespace patrol;

int main() {
  std::cout.setf(std::ios::unitbuf);
  auto t0 = std::chrono::steady_clock::now();
  auto ms = [&] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  // graph basics
  auto grid = make_grid(3, 3, true);
  std::cout << "grid edges: " << grid.edges.size() << " (expect 33)\n";
  auto [sf, sfpi] = sf_dataset();
  std::cout << "sf A->D " << sf.weights(0, 3) << " D->A " << sf.weights(3, 0) << " (expect 5 6)\n";
  std::cout << "sf pi0 " << sfpi.pi(0) << " (expect " << 133.0 / 866.0 << ")\n";

  // chain basics
  Eigen::MatrixXd two(2, 2);
  two << 0, 1, 1, 0;
  StrategyMatrix cyc{two};
  auto hs = mean_hitting_times(cyc);
  std::cout << "2-cycle M = [" << hs.m(0, 0) << "," << hs.m(0, 1) << ";" << hs.m(1, 0) << "," << hs.m(1, 1)
            << "] kemeny " << hs.kemeny << " (expect 2,1,1,2 / 1.5)\n";
  std::cout << "kemeny eigen " << kemeny_constant(cyc) << "\n";

  auto gupi = uniform_visit_distribution(grid);
  auto mh = metropolis_hastings(grid, gupi);
  auto rep = validate(mh, grid, &gupi);
  std::cout << "MH validate all_ok=" << rep.all_ok() << " maxviol " << rep.max_violation << "\n";

  // maxentropic (fig 7: 1.27)
  auto sol = maximize_entropy_rate(grid, gupi);
  std::cout << "[" << ms() << "ms] maxent grid value " << sol.value << " iters " << sol.iterations
            << " residual " << sol.residual << " (expect ~1.27)\n";
  auto rep2 = validate(sol.p_star, grid, &gupi);
  std::cout << "maxent P* all_ok=" << rep2.all_ok() << " gap " << entropy_rate_gap(sol, grid, gupi) << "\n";

  // truncation horizon (2292)
  std::cout << "sf horizon eta=0.1: " << truncation_horizon(sf, sfpi, 0.1) << " (expect 2292)\n";

  // reversible grid solve (fig 3: 12.43)
  FeasibleSpec spec{grid, gupi, 0.0, true};
  auto res = minimize_mean_hitting_reversible(spec, false, 1);
  std::cout << "[" << ms() << "ms] grid reversible kemeny " << res.objective
            << " converged=" << res.converged << " iters " << res.iterations << " (expect ~12.43)\n";
  for (double v : res.restart_objectives) std::cout << "  restart obj " << v << "\n";

  return 0;
}
