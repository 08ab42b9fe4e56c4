#include "medea/mckp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "medea/errors.hpp"

namespace medea {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Margins are relative: times are seconds and energies joules, so absolute
// floors would dwarf the µs / µJ magnitudes this model works in.
double time_margin(double capacity) { return std::abs(capacity) * 1e-12 + 1e-300; }

// Slack so floating-point noise in the bound never prunes a strictly better
// solution. Equal-energy subtrees may get re-explored; the strict incumbent
// update keeps the first (lexicographically smallest) optimum.
double energy_slack(double e) { return std::abs(e) * 1e-12 + 1e-300; }

struct HullStep {
  int group = 0;
  double dt = 0.0;     // extra time of the next-slower hull vertex
  double de = 0.0;     // energy saved by it
  double ratio = 0.0;  // de / dt, strictly decreasing within a group
};

}  // namespace

std::vector<int> pareto_filter(const std::vector<MckpItem>& items) {
  std::vector<int> order(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const MckpItem& x = items[a];
    const MckpItem& y = items[b];
    if (x.time != y.time) return x.time < y.time;
    if (x.energy != y.energy) return x.energy < y.energy;
    if (x.tie_pe != y.tie_pe) return x.tie_pe < y.tie_pe;
    return x.tie_v < y.tie_v;
  });
  std::vector<int> kept;
  for (int idx : order) {
    if (!kept.empty() && items[idx].energy >= items[kept.back()].energy) continue;
    kept.push_back(idx);
  }
  return kept;
}

double mckp_min_time(const std::vector<std::vector<MckpItem>>& groups) {
  double total = 0.0;
  for (const auto& g : groups) {
    double best = kInf;
    for (const MckpItem& it : g) best = std::min(best, it.time);
    total += best;
  }
  return total;
}

namespace {

struct Solver {
  const std::vector<std::vector<MckpItem>>& groups;
  double capacity;
  int n;

  // The live view per group: indices into the original item lists, time
  // ascending / energy strictly descending. Reduced-cost filtering shrinks
  // these between search phases.
  std::vector<std::vector<int>> pareto;
  std::vector<std::vector<int>> visit_order;  // tie-rule order, per group
  std::vector<std::vector<int>> tie_rank;     // inverse of visit_order
  std::vector<std::vector<int>> hulls;        // hull vertices, positions in pareto
  std::vector<int> class_prev;                // previous group with identical items
  std::vector<double> suf_min_time;
  std::vector<double> suf_min_energy;
  std::vector<double> suf_base_energy;  // every group on its fastest item
  std::vector<double> pre_min_time;     // groups before g on their fastest items
  std::vector<double> pre_min_energy;   // groups before g on their frugal items
  std::vector<HullStep> steps;          // global, ratio descending
  // steps restricted to groups >= g, ratio order kept; lp_bound walks these.
  std::vector<std::vector<HullStep>> suffix_steps;

  double t_eps;
  bool break_symmetry = false;
  double best_energy = kInf;
  bool have_value = false;
  std::vector<int> best_choice;  // positions in pareto
  std::vector<int> current;
  std::vector<int> current_rank;
  long long node_budget = 0;
  bool budget_hit = false;

  struct State {
    double t, e;
  };
  // Non-dominated completions of groups g..n-1 (time ascending, energy
  // strictly descending). Built once before the lex pass on large instances;
  // the cheapest completion within a time budget is then a binary search.
  std::vector<std::vector<State>> suffix_frontier;

  Solver(const std::vector<std::vector<MckpItem>>& groups_, double capacity_)
      : groups(groups_), capacity(capacity_), n(static_cast<int>(groups_.size())) {
    t_eps = time_margin(capacity);
    // Symmetric instances (identical kernels) make the plain search thrash on
    // permutations; restricting identical groups to tie-rank-non-decreasing
    // choices keeps exactly the lex-smallest representative of each choice
    // multiset. Left off for small instances, whose optima are then bitwise
    // faithful to plain enumeration even at equal-sum ulp corners.
    break_symmetry = n > 10;
    pareto.resize(n);
    for (int g = 0; g < n; ++g) pareto[g] = pareto_filter(groups[g]);
    prepare();
  }

  const MckpItem& item(int g, int pos) const { return groups[g][pareto[g][pos]]; }
  int last(int g) const { return static_cast<int>(pareto[g].size()) - 1; }

  /// Rebuild every structure derived from the current pareto view.
  void prepare() {
    visit_order.assign(n, {});
    tie_rank.assign(n, {});
    for (int g = 0; g < n; ++g) {
      std::vector<int> order(pareto[g].size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        const MckpItem& x = item(g, a);
        const MckpItem& y = item(g, b);
        if (x.tie_pe != y.tie_pe) return x.tie_pe < y.tie_pe;
        return x.tie_v < y.tie_v;
      });
      tie_rank[g].assign(order.size(), 0);
      for (std::size_t r = 0; r < order.size(); ++r) tie_rank[g][order[r]] = static_cast<int>(r);
      visit_order[g] = std::move(order);
    }
    class_prev.assign(n, -1);
    if (break_symmetry) {
      for (int g = 0; g < n; ++g) {
        for (int g2 = g - 1; g2 >= 0; --g2) {
          if (pareto[g2].size() != pareto[g].size()) continue;
          bool same = true;
          for (int pos = 0; pos <= last(g) && same; ++pos) {
            const MckpItem& a = item(g, pos);
            const MckpItem& b = item(g2, pos);
            same = a.time == b.time && a.energy == b.energy && a.tie_pe == b.tie_pe &&
                   a.tie_v == b.tie_v;
          }
          if (same) {
            class_prev[g] = g2;
            break;
          }
        }
      }
    }
    suf_min_time.assign(n + 1, 0.0);
    suf_min_energy.assign(n + 1, 0.0);
    suf_base_energy.assign(n + 1, 0.0);
    for (int g = n - 1; g >= 0; --g) {
      suf_min_time[g] = suf_min_time[g + 1] + item(g, 0).time;
      suf_min_energy[g] = suf_min_energy[g + 1] + item(g, last(g)).energy;
      suf_base_energy[g] = suf_base_energy[g + 1] + item(g, 0).energy;
    }
    pre_min_time.assign(n + 1, 0.0);
    pre_min_energy.assign(n + 1, 0.0);
    for (int g = 0; g < n; ++g) {
      pre_min_time[g + 1] = pre_min_time[g] + item(g, 0).time;
      pre_min_energy[g + 1] = pre_min_energy[g] + item(g, last(g)).energy;
    }
    steps.clear();
    hulls.assign(n, {});
    for (int g = 0; g < n; ++g) {
      // Lower convex hull of the (time, energy) frontier.
      std::vector<int>& hull = hulls[g];
      for (int pos = 0; pos <= last(g); ++pos) {
        while (hull.size() >= 2) {
          const MckpItem& a = item(g, hull[hull.size() - 2]);
          const MckpItem& b = item(g, hull.back());
          const MckpItem& c = item(g, pos);
          // Drop b when it lies on or above segment a-c.
          if ((b.energy - a.energy) * (c.time - a.time) >=
              (c.energy - a.energy) * (b.time - a.time))
            hull.pop_back();
          else
            break;
        }
        hull.push_back(pos);
      }
      for (std::size_t i = 1; i < hull.size(); ++i) {
        const MckpItem& prev = item(g, hull[i - 1]);
        const MckpItem& next = item(g, hull[i]);
        HullStep s;
        s.group = g;
        s.dt = next.time - prev.time;
        s.de = prev.energy - next.energy;
        s.ratio = s.de / s.dt;
        steps.push_back(s);
      }
    }
    std::stable_sort(steps.begin(), steps.end(),
                     [](const HullStep& a, const HullStep& b) { return a.ratio > b.ratio; });
    suffix_steps.assign(n + 1, {});
    for (int g = n - 1; g >= 0; --g) {
      suffix_steps[g].reserve(steps.size());
      for (const HullStep& s : steps)
        if (s.group >= g) suffix_steps[g].push_back(s);
    }
  }

  // Linear-relaxation lower bound on the energy of groups g..n-1 within the
  // remaining time budget. Callers guarantee the base selection fits.
  double lp_bound(int g, double budget) const {
    double slack = budget - suf_min_time[g];
    double saved = 0.0;
    for (const HullStep& s : suffix_steps[g]) {
      if (slack <= 0.0) break;
      if (s.dt <= slack) {
        saved += s.de;
        slack -= s.dt;
      } else {
        saved += s.ratio * slack;
        break;
      }
    }
    return std::max(suf_base_energy[g] - saved, suf_min_energy[g]);
  }

  // Root multiplier: the ratio of the step left fractional by the greedy LP
  // fill. Every step at least this efficient is taken in full.
  double critical_ratio() const {
    double slack = capacity - suf_min_time[0];
    for (const HullStep& s : steps) {
      if (s.dt > slack) return s.ratio;
      slack -= s.dt;
    }
    return 0.0;
  }

  // Lagrangian reduced-cost filtering. With multiplier lambda >= 0,
  //   L(lambda) = sum_g min_j (e_gj + lambda t_gj) - lambda * capacity
  // lower-bounds every deadline-feasible selection, and forcing item (g, j)
  // raises it by that item's gap to its group minimum. Items whose forced
  // bound exceeds the incumbent cannot appear in any schedule at or below the
  // incumbent and are dropped. This is what keeps large symmetric instances
  // (many identical kernels) tractable.
  void filter_items(double incumbent) {
    const double lambda = critical_ratio();
    std::vector<double> group_min(n, kInf);
    for (int g = 0; g < n; ++g)
      for (int pos = 0; pos <= last(g); ++pos)
        group_min[g] =
            std::min(group_min[g], item(g, pos).energy + lambda * item(g, pos).time);
    double root = -lambda * capacity;
    for (int g = 0; g < n; ++g) root += group_min[g];
    const double keep_below = incumbent + energy_slack(incumbent) * 1e3;
    for (int g = 0; g < n; ++g) {
      std::vector<int> kept;
      for (int pos = 0; pos <= last(g); ++pos) {
        const double forced =
            root + item(g, pos).energy + lambda * item(g, pos).time - group_min[g];
        if (forced <= keep_below) kept.push_back(pareto[g][pos]);
      }
      if (!kept.empty()) pareto[g] = std::move(kept);
    }
    prepare();
  }

  // Greedy hull walk from the all-fastest base, used only as a warm incumbent
  // energy. Steps of one group arrive in hull order, so walking the global
  // ratio-descending list visits them in-order per group.
  double greedy_energy() const {
    std::vector<int> hpos(n, 0);  // hull vertex index per group
    std::vector<char> blocked(n, 0);
    std::vector<int> applied;
    double slack = capacity - suf_min_time[0];
    for (const HullStep& s : steps) {
      if (blocked[s.group]) continue;
      if (s.dt > slack) {
        blocked[s.group] = 1;
        continue;
      }
      slack -= s.dt;
      hpos[s.group]++;
      applied.push_back(s.group);
    }
    auto totals = [&](double& t, double& e) {
      t = 0.0;
      e = 0.0;
      for (int g = 0; g < n; ++g) {
        const MckpItem& it = item(g, hulls[g][hpos[g]]);
        t += it.time;
        e += it.energy;
      }
    };
    double t = 0.0, e = 0.0;
    totals(t, e);
    // The slack bookkeeping and the exact group-order sum can disagree by
    // ulps; unwind greedy steps until the exact total fits.
    while (t > capacity && !applied.empty()) {
      hpos[applied.back()]--;
      applied.pop_back();
      totals(t, e);
    }
    return t <= capacity ? e : kInf;
  }

  // Phase 1, preferred engine: forward DP over non-dominated partial
  // (time, energy) sums. Merging collapses the permutation plateaus of
  // identical kernels that a tree search enumerates one by one; bound checks
  // keep only states that can still beat the incumbent. Falls back to the
  // branch-and-bound when the state frontier outgrows its cap (then the
  // instance is not plateau-shaped and tree search is the better tool).
  bool value_by_state_dp() {
    constexpr std::size_t kStateCap = 300'000;
    std::vector<State> states{{0.0, 0.0}};
    std::vector<State> merged;
    for (int g = 0; g < n; ++g) {
      merged.clear();
      for (int pos = 0; pos <= last(g); ++pos) {
        const MckpItem& it = item(g, pos);
        for (const State& s : states) {  // states sorted by time ascending
          const double t2 = s.t + it.time;
          if (t2 + suf_min_time[g + 1] > capacity + t_eps) break;
          const double e2 = s.e + it.energy;
          if (e2 + suf_min_energy[g + 1] >= best_energy - energy_slack(best_energy))
            continue;
          merged.push_back({t2, e2});
        }
      }
      // The incumbent seed sits strictly above the optimum, so the optimal
      // path always survives; an empty frontier means fp paranoia, not proof.
      if (merged.empty()) return false;
      std::sort(merged.begin(), merged.end(), [](const State& a, const State& b) {
        if (a.t != b.t) return a.t < b.t;
        return a.e < b.e;
      });
      states.clear();
      for (const State& s : merged) {
        if (!states.empty() && s.e >= states.back().e) continue;
        states.push_back(s);
      }
      if (states.size() > kStateCap) {
        std::vector<State> tight;
        tight.reserve(states.size());
        for (const State& s : states) {
          if (s.e + lp_bound(g + 1, capacity + t_eps - s.t) <
              best_energy - energy_slack(best_energy))
            tight.push_back(s);
        }
        states.swap(tight);
        if (states.size() > kStateCap || states.empty()) return false;
      }
    }
    for (const State& s : states) {
      if (s.t <= capacity && s.e < best_energy) {
        best_energy = s.e;
        have_value = true;
      }
    }
    return true;
  }

  /// Suffix frontiers for the lex pass: every non-dominated way to finish
  /// groups g..n-1 within the capacity and the optimal energy band. Gives the
  /// lex walk the true cheapest completion instead of a relaxation, which is
  /// what keeps it from wandering fruitless near-optimal prefixes. Cleared
  /// (with false returned) when they outgrow the cap.
  bool build_suffix_frontiers() {
    constexpr std::size_t kTotalCap = 4'000'000;
    suffix_frontier.assign(n + 1, {});
    suffix_frontier[n] = {{0.0, 0.0}};
    std::size_t total = 1;
    std::vector<State> merged;
    for (int g = n - 1; g >= 0; --g) {
      merged.clear();
      for (int pos = 0; pos <= last(g); ++pos) {
        const MckpItem& it = item(g, pos);
        for (const State& s : suffix_frontier[g + 1]) {  // sorted by time
          const double t2 = it.time + s.t;
          if (t2 + pre_min_time[g] > capacity + t_eps) break;
          const double e2 = it.energy + s.e;
          if (e2 + pre_min_energy[g] > best_energy + energy_slack(best_energy)) continue;
          merged.push_back({t2, e2});
        }
      }
      if (merged.empty()) {
        suffix_frontier.clear();
        return false;
      }
      std::sort(merged.begin(), merged.end(), [](const State& a, const State& b) {
        if (a.t != b.t) return a.t < b.t;
        return a.e < b.e;
      });
      auto& front = suffix_frontier[g];
      for (const State& s : merged) {
        if (!front.empty() && s.e >= front.back().e) continue;
        front.push_back(s);
      }
      total += front.size();
      if (total > kTotalCap) {
        suffix_frontier.clear();
        return false;
      }
    }
    return true;
  }

  /// Cheapest completion of groups g..n-1 within the time budget, +inf when
  /// nothing fits. The frontier is a staircase, so the answer sits at the
  /// largest reachable time.
  double suffix_completion(int g, double budget) const {
    const auto& front = suffix_frontier[g];
    auto it = std::upper_bound(front.begin(), front.end(), budget,
                               [](double b, const State& s) { return b < s.t; });
    if (it == front.begin()) return kInf;
    return std::prev(it)->e;
  }

  // Phase 1, fallback engine: branch and bound with best-bound-first children
  // along the relaxation's preferred path; the visit order here cannot change
  // which energy is optimal.
  void dfs_value(int g, double t, double e) {
    if (budget_hit) return;
    if (--node_budget <= 0) {
      budget_hit = true;
      return;
    }
    if (g == n) {
      if (t <= capacity && e < best_energy) {
        best_energy = e;
        have_value = true;
      }
      return;
    }
    const int min_rank = class_prev[g] >= 0 ? current_rank[class_prev[g]] : 0;
    struct Child {
      double bound;
      int pos;
    };
    std::vector<Child> children;
    children.reserve(pareto[g].size());
    for (int pos = 0; pos <= last(g); ++pos) {
      if (tie_rank[g][pos] < min_rank) continue;
      const MckpItem& it = item(g, pos);
      const double t2 = t + it.time;
      if (t2 + suf_min_time[g + 1] > capacity + t_eps) continue;
      const double e2 = e + it.energy;
      const double lb = e2 + lp_bound(g + 1, capacity + t_eps - t2);
      if (lb >= best_energy - energy_slack(best_energy)) continue;
      children.push_back({lb, pos});
    }
    std::sort(children.begin(), children.end(), [](const Child& a, const Child& b) {
      if (a.bound != b.bound) return a.bound < b.bound;
      return a.pos < b.pos;
    });
    for (const Child& c : children) {
      if (c.bound >= best_energy - energy_slack(best_energy)) continue;
      current[g] = c.pos;
      current_rank[g] = tie_rank[g][c.pos];
      dfs_value(g + 1, t + item(g, c.pos).time, e + item(g, c.pos).energy);
    }
  }

  // Phase 2: extract the lexicographically smallest assignment achieving the
  // known optimal energy. Children go in tie-rule order; subtrees that cannot
  // reach the optimum are cut, so the first matching leaf wins.
  bool dfs_lex(int g, double t, double e) {
    if (g == n) {
      // On symmetry-broken instances the optimal value may stem from a
      // permuted summation order whose canonical representative differs by
      // ulps, so the match is slack-tolerant there; small instances demand
      // the exact double.
      const double tol = break_symmetry ? energy_slack(best_energy) : 0.0;
      if (t <= capacity && std::abs(e - best_energy) <= tol) {
        best_choice = current;
        return true;
      }
      return false;
    }
    const int min_rank = class_prev[g] >= 0 ? current_rank[class_prev[g]] : 0;
    for (int pos : visit_order[g]) {
      if (tie_rank[g][pos] < min_rank) continue;
      const MckpItem& it = item(g, pos);
      const double t2 = t + it.time;
      if (t2 + suf_min_time[g + 1] > capacity + t_eps) continue;
      const double e2 = e + it.energy;
      const double completion = suffix_frontier.empty()
                                    ? lp_bound(g + 1, capacity + t_eps - t2)
                                    : suffix_completion(g + 1, capacity + t_eps - t2);
      if (e2 + completion > best_energy + energy_slack(best_energy)) continue;
      current[g] = pos;
      current_rank[g] = tie_rank[g][pos];
      if (dfs_lex(g + 1, t2, e2)) return true;
    }
    return false;
  }

  MckpSolution run() {
    // Group-order sum, matching how schedule totals are accumulated.
    double min_total = 0.0;
    for (int g = 0; g < n; ++g) min_total += item(g, 0).time;
    if (min_total > capacity)
      throw InfeasibleDeadline(min_total, "deadline below the fastest achievable schedule");

    MckpSolution sol;
    // Unconstrained optimum: the per-group minimum-energy items are unique on
    // a strict Pareto frontier.
    double slow_total = 0.0;
    for (int g = 0; g < n; ++g) slow_total += item(g, last(g)).time;
    if (slow_total <= capacity) {
      sol.choice.resize(n);
      for (int g = 0; g < n; ++g) sol.choice[g] = pareto[g][last(g)];
      finish(sol);
      return sol;
    }

    const double warm = greedy_energy();
    if (warm < kInf) {
      filter_items(warm);
      // Seed strictly above the warm energy so an optimum equal to it still
      // counts as a strict improvement and gets recorded.
      best_energy = warm * (1.0 + 1e-9) + 1e-300;
    }
    // Large instances go through the merging DP (plateau-friendly); small
    // ones run the plain search whose sums are bitwise faithful to direct
    // enumeration.
    if (!break_symmetry || !value_by_state_dp()) {
      // Budgeted restarts: whenever the search outgrows its node budget, the
      // instance is re-filtered against the incumbent (reduced costs tighten
      // as it improves) and the search starts over, smaller. Exact throughout.
      long long budget = 2'000'000;
      for (;;) {
        current.assign(n, 0);
        current_rank.assign(n, 0);
        node_budget = budget;
        budget_hit = false;
        dfs_value(0, 0.0, 0.0);
        if (!budget_hit) break;
        std::size_t before = 0, after = 0;
        for (int g = 0; g < n; ++g) before += pareto[g].size();
        filter_items(best_energy);
        for (int g = 0; g < n; ++g) after += pareto[g].size();
        if (after >= before) budget *= 2;  // no shrink: give the search more room
      }
    }
    if (!have_value) throw Error("mckp: search ended without a solution");

    // Re-filter against the now-known optimum, then extract in tie-rule order.
    filter_items(best_energy);
    suffix_frontier.clear();
    if (break_symmetry) build_suffix_frontiers();
    current.assign(n, 0);
    current_rank.assign(n, 0);
    if (!dfs_lex(0, 0.0, 0.0)) throw Error("mckp: optimum not reproducible in lex order");
    sol.choice.resize(n);
    for (int g = 0; g < n; ++g) sol.choice[g] = pareto[g][best_choice[g]];
    finish(sol);
    return sol;
  }

  void finish(MckpSolution& sol) const {
    sol.total_time = 0.0;
    sol.total_energy = 0.0;
    for (int g = 0; g < n; ++g) {
      sol.total_time += groups[g][sol.choice[g]].time;
      sol.total_energy += groups[g][sol.choice[g]].energy;
    }
  }
};

}  // namespace

MckpSolution mckp_solve_exact(const std::vector<std::vector<MckpItem>>& groups,
                              double capacity) {
  for (const auto& g : groups)
    if (g.empty()) throw Error("mckp: empty group");
  Solver solver(groups, capacity);
  return solver.run();
}

MckpSolution mckp_solve_quantized(const std::vector<std::vector<MckpItem>>& groups,
                                  double capacity, double quantum) {
  if (quantum <= 0.0) throw ValidationError("dp quantum must be positive");
  for (const auto& g : groups)
    if (g.empty()) throw Error("mckp: empty group");
  const int n = static_cast<int>(groups.size());
  const double min_total = mckp_min_time(groups);
  if (min_total > capacity)
    throw InfeasibleDeadline(min_total, "deadline below the fastest achievable schedule");

  const std::uint64_t cap = static_cast<std::uint64_t>(std::floor(capacity / quantum));
  std::vector<std::vector<std::uint64_t>> weights(n);
  for (int g = 0; g < n; ++g)
    for (const MckpItem& it : groups[g])
      weights[g].push_back(static_cast<std::uint64_t>(std::ceil(it.time / quantum)));

  const std::uint64_t cells = static_cast<std::uint64_t>(n + 1) * (cap + 1);
  if (cells > 200'000'000ull)
    throw Error("dp grid too large (" + std::to_string(cells) + " cells); increase the quantum");

  // Suffix DP so the forward reconstruction walks groups in kernel order and
  // can apply the tie rule directly.
  std::vector<std::vector<double>> dp(n + 1, std::vector<double>(cap + 1, kInf));
  std::fill(dp[n].begin(), dp[n].end(), 0.0);
  for (int g = n - 1; g >= 0; --g) {
    for (std::uint64_t w = 0; w <= cap; ++w) {
      double best = kInf;
      for (std::size_t i = 0; i < groups[g].size(); ++i) {
        if (weights[g][i] > w) continue;
        const double down = dp[g + 1][w - weights[g][i]];
        if (down == kInf) continue;
        best = std::min(best, groups[g][i].energy + down);
      }
      dp[g][w] = best;
    }
  }
  if (dp[0][cap] == kInf)
    throw InfeasibleDeadline(min_total,
                             "no quantized selection fits the deadline; refine the quantum");

  MckpSolution sol;
  sol.choice.resize(n);
  std::uint64_t w = cap;
  for (int g = 0; g < n; ++g) {
    std::vector<int> order(groups[g].size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (groups[g][a].tie_pe != groups[g][b].tie_pe)
        return groups[g][a].tie_pe < groups[g][b].tie_pe;
      return groups[g][a].tie_v < groups[g][b].tie_v;
    });
    bool placed = false;
    for (int i : order) {
      if (weights[g][i] > w) continue;
      const double down = dp[g + 1][w - weights[g][i]];
      if (down == kInf) continue;
      if (groups[g][i].energy + down == dp[g][w]) {
        sol.choice[g] = i;
        w -= weights[g][i];
        placed = true;
        break;
      }
    }
    if (!placed) throw Error("dp reconstruction failed");
  }
  for (int g = 0; g < n; ++g) {
    sol.total_time += groups[g][sol.choice[g]].time;
    sol.total_energy += groups[g][sol.choice[g]].energy;
  }
  return sol;
}

}  // namespace medea
