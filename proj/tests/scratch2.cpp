#include <chrono>
#include <iostream>

#include "patrol/optimize.hpp"

using namespace patrol;

int main() {
  std::cout.setf(std::ios::unitbuf);
  auto t0 = std::chrono::steady_clock::now();
  auto secs = [&] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
               .count() /
           1000.0;
  };
  auto grid = make_grid(3, 3, true);
  auto gupi = uniform_visit_distribution(grid);

  // Problem 2: convex grid reversible, paper 12.43
  FeasibleSpec gspec{grid, gupi, 0.0, true};
  auto r2 = minimize_mean_hitting_reversible(gspec, false, 41);
  std::cout << "[" << secs() << "s] P2 grid reversible " << r2.objective << " conv " << r2.converged << "\n";

  // Problem 3 reversible: SF, paper 29.88
  auto [sf, sfpi] = sf_dataset();
  FeasibleSpec sfspec{sf, sfpi, 0.0, true};
  auto r3 = minimize_mean_hitting_reversible(sfspec, true, 777);
  std::cout << "[" << secs() << "s] P3 SF reversible weighted " << r3.objective << " conv " << r3.converged
            << " iters " << r3.iterations << "\n";
  for (double v : r3.restart_objectives) std::cout << "   restart " << v << "\n";

  // Problem 1: nonconvex grid, paper 6.78
  FeasibleSpec spec{grid, gupi, 0.0, false};
  auto r1 = minimize_mean_hitting(spec, 100, 12345);
  std::cout << "[" << secs() << "s] P1 grid best " << r1.objective << "\n";

  // Problem 3 nonreversible: SF, paper 16.06
  FeasibleSpec sfspec2{sf, sfpi, 0.0, false};
  auto r3n = minimize_weighted_mean_hitting(sfspec2, 100, 999);
  std::cout << "[" << secs() << "s] P3 SF nonreversible " << r3n.objective << "\n";
  return 0;
}
