#include <cmath>
#include <limits>

#include "doctest.h"
#include "medea/errors.hpp"
#include "medea/gen.hpp"
#include "medea/optimizer.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace medea;

namespace {

std::vector<std::vector<MckpItem>> unpruned_items(const Problem& p) {
  std::vector<std::vector<MckpItem>> items;
  for (const Kernel& k : p.workload.kernels) {
    std::vector<MckpItem> row;
    for (const Configuration& c : enumerate_candidates(p, k))
      row.push_back(to_mckp_item(p.platform, c));
    items.push_back(std::move(row));
  }
  return items;
}

double items_min_time(const std::vector<std::vector<MckpItem>>& items) {
  double total = 0.0;
  for (const auto& row : items) {
    double best = std::numeric_limits<double>::infinity();
    for (const MckpItem& it : row) best = std::min(best, it.time);
    total += best;
  }
  return total;
}

double items_max_time(const std::vector<std::vector<MckpItem>>& items) {
  double total = 0.0;
  for (const auto& row : items) {
    double worst = 0.0;
    for (const MckpItem& it : row) worst = std::max(worst, it.time);
    total += worst;
  }
  return total;
}

}  // namespace

TEST_CASE("pareto filter implements the dominance and tie rules") {
  // Exact (time, energy) tie: the lowest (pe, voltage) survives.
  std::vector<MckpItem> tie = {{1.0, 1.0, 2, 0}, {1.0, 1.0, 1, 0}};
  auto kept = pareto_filter(tie);
  REQUIRE(kept.size() == 1);
  CHECK(tie[kept[0]].tie_pe == 1);

  // Same time, worse energy: dominated.
  std::vector<MckpItem> same_t = {{1.0, 4.0, 0, 0}, {1.0, 5.0, 1, 0}};
  kept = pareto_filter(same_t);
  REQUIRE(kept.size() == 1);
  CHECK(same_t[kept[0]].energy == 4.0);

  // Same energy, slower: dominated.
  std::vector<MckpItem> same_e = {{1.0, 5.0, 0, 0}, {2.0, 5.0, 1, 0}};
  kept = pareto_filter(same_e);
  REQUIRE(kept.size() == 1);
  CHECK(same_e[kept[0]].time == 1.0);

  // A proper frontier stays intact, sorted by time.
  std::vector<MckpItem> frontier = {{3.0, 1.0, 0, 2}, {1.0, 9.0, 0, 0}, {2.0, 4.0, 0, 1}};
  kept = pareto_filter(frontier);
  REQUIRE(kept.size() == 3);
  CHECK(frontier[kept[0]].time == 1.0);
  CHECK(frontier[kept[2]].time == 3.0);
}

TEST_CASE("group enumeration bounds and frontier shape") {
  const Problem p = testutil::tsd_problem(200.0);
  const auto groups = enumerate_groups(p);
  REQUIRE(groups.size() == p.workload.kernels.size());
  const std::size_t max_items = p.platform.pes.size() * p.platform.vf_table.size();
  for (const ConfigGroup& g : groups) {
    CHECK(g.items.size() >= 1);
    CHECK(g.items.size() <= max_items);
    for (std::size_t i = 1; i < g.items.size(); ++i) {
      CHECK(g.items[i].time > g.items[i - 1].time);
      CHECK(g.items[i].energy < g.items[i - 1].energy);
    }
  }
}

TEST_CASE("pruning keeps the fastest and the most frugal item") {
  testutil::Rng rng(21);
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Instance inst = generate_instance(seed);
    const Problem p = testutil::instance_problem(inst, 1.0);
    for (const Kernel& k : p.workload.kernels) {
      auto candidates = enumerate_candidates(p, k);
      if (candidates.empty()) continue;
      double min_t = 1e300, min_e = 1e300;
      for (const Configuration& c : candidates) {
        min_t = std::min(min_t, c.time);
        min_e = std::min(min_e, c.energy);
      }
      const auto pruned = prune_dominated(p.platform, candidates);
      bool has_min_t = false, has_min_e = false;
      for (const Configuration& c : pruned) {
        if (c.time == min_t) has_min_t = true;
        if (c.energy == min_e) has_min_e = true;
      }
      CHECK(has_min_t);
      CHECK(has_min_e);
    }
  }
}

TEST_CASE("solver matches brute force on random instances") {
  testutil::Rng rng(22);
  int solved = 0, infeasible = 0;
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    Instance inst = generate_instance(seed);
    Problem p = testutil::instance_problem(inst, 1.0);
    auto items = unpruned_items(p);
    for (const auto& row : items)
      if (row.empty()) goto next_seed;  // handled by NoValidConfiguration tests
    {
      const double lo = items_min_time(items);
      const double hi = items_max_time(items) * 1.05;
      p.deadline = std::max(lo * 0.5, lo + rng.uniform(-0.1, 1.0) * (hi - lo));
      const oracles::BruteResult brute = oracles::brute_force_mckp(items, p.deadline);
      if (!brute.feasible) {
        CHECK_THROWS_AS(solve(p), InfeasibleDeadline);
        ++infeasible;
      } else {
        const Schedule s = solve(p);
        CHECK(s.total_active_energy ==
              doctest::Approx(brute.energy).epsilon(1e-9));
        CHECK(s.total_active_time <= p.deadline);
        // Assignment equality under the tie rule.
        REQUIRE(s.assignments.size() == items.size());
        for (std::size_t g = 0; g < items.size(); ++g) {
          const MckpItem& chosen = items[g][brute.choice[g]];
          const MckpItem mine = to_mckp_item(p.platform, s.assignments[g].config);
          CHECK(mine.tie_pe == chosen.tie_pe);
          CHECK(mine.tie_v == chosen.tie_v);
        }
        ++solved;
      }
    }
  next_seed:;
  }
  CHECK(solved > 30);
  CHECK(infeasible > 0);
}

TEST_CASE("a generous deadline returns every per-kernel energy minimum") {
  const Problem p = testutil::tsd_problem(60000.0);
  const Schedule s = solve(p);
  const auto groups = enumerate_groups(p);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    double min_e = 1e300;
    for (const Configuration& c : groups[g].items) min_e = std::min(min_e, c.energy);
    CHECK(s.assignments[g].config.energy == min_e);
  }
}

TEST_CASE("the minimum-time corner is returned when the deadline equals it") {
  Problem p = testutil::tsd_problem(200.0);
  const double fastest = min_time(p);
  p.deadline = fastest;
  const Schedule s = solve(p);
  CHECK(s.total_active_time == fastest);
  const auto groups = enumerate_groups(p);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    double min_t = 1e300;
    for (const Configuration& c : groups[g].items) min_t = std::min(min_t, c.time);
    CHECK(s.assignments[g].config.time == min_t);
  }
}

TEST_CASE("infeasible deadlines report the achievable floor") {
  Problem p = testutil::tsd_problem(200.0);
  const double fastest = min_time(p);
  p.deadline = fastest * 0.5;
  try {
    solve(p);
    FAIL("expected InfeasibleDeadline");
  } catch (const InfeasibleDeadline& e) {
    CHECK(e.min_achievable_time == fastest);
  }
}

TEST_CASE("kernels with no home raise NoValidConfiguration") {
  Problem p = testutil::tsd_problem(200.0);
  Kernel odd;
  odd.id = static_cast<int>(p.workload.kernels.size()) + 1;
  odd.type = KernelType{KernelKind::Custom, "mystery_op"};
  odd.size = {64};
  odd.data_width = 8;
  p.workload.kernels.push_back(odd);
  try {
    solve(p);
    FAIL("expected NoValidConfiguration");
  } catch (const NoValidConfiguration& e) {
    CHECK(e.kernel_id == odd.id);
  }
}

TEST_CASE("report reproduces the sleep-energy accounting") {
  Problem p = testutil::tsd_problem(1000.0);
  REQUIRE(p.platform.sleep_power == doctest::Approx(129e-6).epsilon(1e-12));
  Schedule s;
  s.total_active_time = 0.223;
  s.total_active_energy = 368e-6;
  const EnergyReport r = report(p, s);
  CHECK(r.sleep_time == doctest::Approx(0.777).epsilon(1e-12));
  CHECK(std::abs(r.sleep_energy - 100.2e-6) <= 0.5e-6);
  CHECK(r.total_energy == r.active_energy + r.sleep_energy);

  // Active time equal to the deadline leaves exactly zero sleep energy.
  p.deadline = 0.05;
  s.total_active_time = 0.05;
  CHECK(report(p, s).sleep_energy == 0.0);
  // Defensive clamp for externally supplied overruns.
  s.total_active_time = 0.06;
  CHECK(report(p, s).sleep_time == 0.0);
}

TEST_CASE("deadline sweeps never increase optimal active energy") {
  for (std::uint64_t seed : {3ull, 17ull, 29ull}) {
    const Instance inst = generate_instance(seed);
    Problem p = testutil::instance_problem(inst, 1.0);
    const double fastest = min_time(p);
    double previous = std::numeric_limits<double>::infinity();
    for (int step = 0; step < 8; ++step) {
      p.deadline = fastest * (1.0 + 0.35 * step);
      const Schedule s = solve(p);
      CHECK(s.total_active_time <= p.deadline);
      CHECK(s.total_active_energy <= previous);
      previous = s.total_active_energy;
    }
  }
}

TEST_CASE("solving is deterministic") {
  const Problem p = testutil::tsd_problem(200.0);
  const Schedule a = solve(p);
  const Schedule b = solve(p);
  const EnergyReport ra = report(p, a), rb = report(p, b);
  CHECK(emit_schedule(p, a, ra) == emit_schedule(p, b, rb));
}

TEST_CASE("the quantized DP stays feasible and near the exact optimum") {
  for (std::uint64_t seed : {5ull, 9ull, 31ull}) {
    const Instance inst = generate_instance(seed);
    Problem p = testutil::instance_problem(inst, 1.0);
    p.deadline = min_time(p) * 1.4;
    const Schedule exact = solve(p);
    const Schedule dp = solve_dp(p, 1e-6);
    CHECK(dp.total_active_time <= p.deadline);
    // Optimal within the grid: never better than exact, close at 1 us.
    CHECK(dp.total_active_energy >= exact.total_active_energy * (1.0 - 1e-12));
    CHECK(dp.total_active_energy <= exact.total_active_energy * 1.05);
  }
  Problem p = testutil::tsd_problem(200.0);
  CHECK_THROWS_AS(solve_dp(p, 0.0), ValidationError);
}

TEST_CASE("schedule files round-trip") {
  const Problem p = testutil::tsd_problem(200.0);
  const Schedule s = solve(p);
  const EnergyReport r = report(p, s);
  const ParsedSchedule parsed = parse_schedule(emit_schedule(p, s, r));
  CHECK(parsed.workload_name == p.workload.name);
  REQUIRE(parsed.schedule.assignments.size() == s.assignments.size());
  for (std::size_t i = 0; i < s.assignments.size(); ++i) {
    CHECK(parsed.schedule.assignments[i].config.energy == s.assignments[i].config.energy);
    CHECK(parsed.schedule.assignments[i].config.cycles == s.assignments[i].config.cycles);
    CHECK(parsed.schedule.assignments[i].config.voltage == s.assignments[i].config.voltage);
  }
  CHECK(parsed.schedule.total_active_time == s.total_active_time);
  CHECK(parsed.report.total_energy_uj == to_ms(r).total_energy_uj);
}

TEST_CASE("staging warnings flag kernels above the shared capacity") {
  Problem p = testutil::tsd_problem(200.0);
  CHECK(staging_warnings(p).empty());
  Kernel big;
  big.id = 1;
  big.type = KernelType{KernelKind::Add, {}};
  big.size = {900000};
  big.data_width = 8;
  p.workload.kernels.insert(p.workload.kernels.begin(), big);
  for (std::size_t i = 0; i < p.workload.kernels.size(); ++i)
    p.workload.kernels[i].id = static_cast<int>(i) + 1;
  CHECK(staging_warnings(p).size() == 1);
}

TEST_CASE("vf switch penalties are accounted into the totals") {
  // A deadline with headroom: at a window-filling deadline the added switch
  // time alone would push the schedule into infeasibility.
  Problem p = testutil::tsd_problem(600.0);
  p.params.vf_switch_cycles = 1000;
  p.params.vf_switch_energy = 1e-9;
  const Schedule s = solve(p);
  double plain_time = 0.0, plain_energy = 0.0;
  for (const KernelAssignment& a : s.assignments) {
    plain_time += a.config.time;
    plain_energy += a.config.energy;
  }
  if (s.vf_switch_count > 0) {
    CHECK(s.total_active_time > plain_time);
    CHECK(s.total_active_energy ==
          doctest::Approx(plain_energy + s.vf_switch_count * 1e-9).epsilon(1e-12));
  } else {
    CHECK(s.total_active_time == plain_time);
  }
}
