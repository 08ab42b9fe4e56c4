#pragma once

#include <cstdint>
#include <vector>

namespace medea {

/// One selectable option of a group: time is the knapsack weight, energy the
/// cost to minimize. tie_pe / tie_v order equal-cost optima (lower wins).
struct MckpItem {
  double time = 0.0;
  double energy = 0.0;
  int tie_pe = 0;
  int tie_v = 0;
};

struct MckpSolution {
  std::vector<int> choice;  // item index per group
  double total_time = 0.0;
  double total_energy = 0.0;
};

/// Indices of the non-dominated items, sorted by time ascending (energy then
/// strictly decreasing). An item is dominated when another one is no worse in
/// both time and energy and strictly better in one; exact ties keep the
/// lowest (tie_pe, tie_v).
std::vector<int> pareto_filter(const std::vector<MckpItem>& items);

/// Sum over groups of the per-group minimum time: the feasibility bound.
double mckp_min_time(const std::vector<std::vector<MckpItem>>& groups);

/// Exact minimum-energy selection of one item per group with total time at
/// most capacity. Depth-first branch and bound over the groups in order,
/// pruned with the linear-relaxation bound of the per-group convex hulls.
/// Among equal-energy optima, returns the lexicographically smallest
/// assignment by (group order, tie_pe, tie_v). Throws InfeasibleDeadline when
/// even the all-fastest selection misses the capacity.
MckpSolution mckp_solve_exact(const std::vector<std::vector<MckpItem>>& groups,
                              double capacity);

/// Dynamic program on a quantized time grid. Weights are rounded up to the
/// quantum so any solution it reports is feasible on the real clock; the
/// result is optimal within that rounding. Same tie rule as the exact solver.
MckpSolution mckp_solve_quantized(const std::vector<std::vector<MckpItem>>& groups,
                                  double capacity, double quantum);

}  // namespace medea
