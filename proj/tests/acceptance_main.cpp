// Acceptance suite: runs every criterion at its stated tolerance and prints
// one PASS/FAIL line per criterion. Exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "medea/baselines.hpp"
#include "medea/cli.hpp"
#include "medea/errors.hpp"
#include "medea/gen.hpp"
#include "medea/optimizer.hpp"
#include "medea/validator.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace medea;
namespace fs = std::filesystem;

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

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

// ---- criterion 1: solver optimality against exhaustive enumeration ----
bool criterion_solver_optimality(std::string& detail) {
  const double start = now_seconds();
  int solved = 0, infeasible = 0;
  testutil::Rng rng(1001);
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    const Instance inst = generate_instance(seed);
    Problem p = testutil::instance_problem(inst, 1.0);
    auto items = unpruned_items(p);
    for (const auto& row : items) {
      if (row.empty()) {
        detail = "instance " + std::to_string(seed) + " produced an empty group";
        return false;
      }
    }
    // Cap the enumeration size by truncating the workload (both sides see the
    // same problem).
    double product = 1.0;
    for (const auto& row : items) product *= static_cast<double>(row.size());
    while (product > 2e6 && items.size() > 1) {
      product /= static_cast<double>(items.back().size());
      items.pop_back();
      p.workload.kernels.pop_back();
    }
    double lo = 0.0, hi = 0.0;
    for (const auto& row : items) {
      double mn = std::numeric_limits<double>::infinity(), mx = 0.0;
      for (const MckpItem& it : row) {
        mn = std::min(mn, it.time);
        mx = std::max(mx, it.time);
      }
      lo += mn;
      hi += mx;
    }
    p.deadline = std::max(lo * 0.5, lo + rng.uniform(-0.05, 1.0) * (hi * 1.05 - lo));
    const oracles::BruteResult brute = oracles::brute_force_mckp(items, p.deadline);
    if (!brute.feasible) {
      try {
        solve(p);
        detail = "seed " + std::to_string(seed) + ": solver accepted an infeasible deadline";
        return false;
      } catch (const InfeasibleDeadline&) {
        ++infeasible;
      }
      continue;
    }
    const Schedule s = solve(p);
    const double rel = std::abs(s.total_active_energy - brute.energy) /
                       std::max(brute.energy, 1e-300);
    if (rel > 1e-9) {
      detail = "seed " + std::to_string(seed) + ": energy off by rel " + std::to_string(rel);
      return false;
    }
    for (std::size_t g = 0; g < items.size(); ++g) {
      const MckpItem& expect = items[g][brute.choice[g]];
      const MckpItem got = to_mckp_item(p.platform, s.assignments[g].config);
      if (got.tie_pe != expect.tie_pe || got.tie_v != expect.tie_v) {
        detail = "seed " + std::to_string(seed) + ": assignment differs at kernel " +
                 std::to_string(g + 1);
        return false;
      }
    }
    if (s.total_active_time > p.deadline) {
      detail = "seed " + std::to_string(seed) + ": deadline violated";
      return false;
    }
    ++solved;
  }
  const double elapsed = now_seconds() - start;
  detail = std::to_string(solved) + " solved, " + std::to_string(infeasible) +
           " infeasible, " + std::to_string(elapsed) + " s";
  return elapsed < 60.0 && solved + infeasible == 500;
}

// ---- criterion 2: active energy is non-increasing in the deadline ----
bool criterion_deadline_monotonicity(std::string& detail) {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Instance inst = generate_instance(seed + 7000);
    Problem p = testutil::instance_problem(inst, 1.0);
    const double fastest = min_time(p);
    double previous = std::numeric_limits<double>::infinity();
    for (int step = 0; step < 10; ++step) {
      p.deadline = fastest * (1.0 + 0.25 * step);
      const Schedule s = solve(p);
      if (s.total_active_time > p.deadline) {
        detail = "seed " + std::to_string(seed) + " step " + std::to_string(step) +
                 ": schedule misses its deadline";
        return false;
      }
      if (s.total_active_energy > previous) {
        detail = "seed " + std::to_string(seed) + " step " + std::to_string(step) +
                 ": energy increased with a looser deadline";
        return false;
      }
      previous = s.total_active_energy;
      ++checked;
    }
  }
  detail = std::to_string(checked) + " solves, zero violations";
  return true;
}

// ---- criterion 3: sleep accounting ----
bool criterion_sleep_accounting(std::string& detail) {
  Problem p;
  p.platform = load_platform(testutil::data_path("heeptimize.json"));
  if (p.platform.sleep_power != 129e-6) {
    detail = "fixture sleep power is not 129 uW";
    return false;
  }
  p.deadline = 1.0;
  Schedule s;
  s.total_active_time = 0.223;
  s.total_active_energy = 368e-6;
  const EnergyReport r = report(p, s);
  if (std::abs(r.sleep_time - 0.777) > 1e-12) {
    detail = "sleep time wrong: " + std::to_string(r.sleep_time);
    return false;
  }
  const double sleep_uj = r.sleep_energy * 1e6;
  if (std::abs(sleep_uj - 100.2) > 0.5) {
    detail = "sleep energy " + std::to_string(sleep_uj) + " uJ not within 0.5 of 100.2";
    return false;
  }
  for (double deadline : {0.05, 0.2}) {
    p.deadline = deadline;
    s.total_active_time = deadline;
    if (report(p, s).sleep_energy != 0.0) {
      detail = "active==deadline must give exactly zero sleep energy";
      return false;
    }
  }
  detail = "sleep 777 ms / " + std::to_string(sleep_uj) + " uJ";
  return true;
}

// ---- criterion 4: V-F fixture fidelity ----
bool criterion_vf_fixture(std::string& detail) {
  const PlatformSpec spec = load_platform(testutil::data_path("heeptimize.json"));
  const std::pair<double, double> expected[] = {
      {0.50, 122e6}, {0.65, 347e6}, {0.80, 578e6}, {0.90, 690e6}};
  for (const auto& [v, f] : expected) {
    if (max_frequency(spec, v) != f) {
      detail = "frequency at " + std::to_string(v) + " V is off";
      return false;
    }
  }
  try {
    max_frequency(spec, 0.70);
    detail = "unknown voltage did not error";
    return false;
  } catch (const UnknownVoltage&) {
  }
  detail = "122/347/578/690 MHz exact, unknown voltages rejected";
  return true;
}

// ---- criterion 5: savings arithmetic ----
bool criterion_savings(std::string& detail) {
  struct Case {
    double without, full, computed, printed;
  };
  const Case cases[] = {{576, 395, 31.4, 31.3},
                        {432, 395, 8.6, 8.5},
                        {1030, 946, 8.2, 8.1},
                        {974, 946, 2.9, 2.8},
                        {468, 468, 0.0, 0.0}};
  std::ostringstream all;
  for (const Case& c : cases) {
    const double s = savings(c.without, c.full);
    if (std::abs(s - c.computed) > 0.05 || std::abs(s - c.printed) > 0.2) {
      detail = "savings(" + std::to_string(c.without) + ", " + std::to_string(c.full) +
               ") = " + std::to_string(s);
      return false;
    }
    all << (all.tellp() > 0 ? " " : "") << s;
  }
  detail = all.str() + " %";
  return true;
}

// ---- criterion 6: the full optimizer dominates ablations and baselines ----
bool criterion_dominance(std::string& detail) {
  int comparisons = 0;
  testutil::Rng rng(1006);
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Instance inst = generate_instance(seed + 3000);
    Problem p = testutil::instance_problem(inst, 1.0);
    const double fastest = min_time(p);
    for (double factor : {1.05, 1.5, 3.0}) {
      p.deadline = fastest * factor;
      const auto [full, full_rep] = run_strategy(p, Strategy::Medea);
      const auto check = [&](double other_active, const char* what) {
        if (full_rep.active_energy > other_active * (1.0 + 1e-12)) {
          detail = "seed " + std::to_string(seed) + " x" + std::to_string(factor) + ": " +
                   what + " beat the optimizer";
          return false;
        }
        ++comparisons;
        return true;
      };
      for (Ablation a :
           {Ablation::NoKernelDvfs, Ablation::NoAdaptiveTiling, Ablation::NoKernelSched}) {
        try {
          const auto [s, rep] = run_ablation(p, a, &inst.groups);
          if (!check(rep.active_energy, to_string(a).c_str())) return false;
        } catch (const InfeasibleDeadline&) {
        } catch (const NoValidConfiguration&) {
        }
      }
      for (Strategy s : {Strategy::CpuMaxVf, Strategy::StaticAccelMaxVf,
                         Strategy::StaticAccelAppDvfs, Strategy::CoarseAppDvfs}) {
        try {
          const auto [sched, rep] = run_strategy(p, s, &inst.groups);
          if (!check(rep.active_energy, to_string(s).c_str())) return false;
        } catch (const InfeasibleDeadline&) {
        } catch (const NoValidConfiguration&) {
        }
      }
    }
  }
  detail = std::to_string(comparisons) + " comparisons, zero violations";
  return true;
}

// ---- criterion 7: tiling formulas against the event replay ----
bool criterion_tiling_replay(std::string& detail) {
  testutil::Rng rng(1007);
  int plans = 0, preselects = 0;
  while (plans < 1000) {
    Kernel k;
    k.id = 1;
    const int pick = static_cast<int>(rng.uniform_int(0, 3));
    if (pick == 0) {
      k.type = KernelType{KernelKind::Matmul, {}};
      k.size = {rng.uniform_int(1, 256), rng.uniform_int(1, 96), rng.uniform_int(1, 96)};
    } else if (pick == 1) {
      k.type = KernelType{KernelKind::Conv2d, {}};
      k.size = {rng.uniform_int(8, 64), rng.uniform_int(8, 64), rng.uniform_int(1, 8),
                rng.uniform_int(1, 8),  rng.uniform_int(1, 5),  rng.uniform_int(1, 5),
                rng.uniform_int(1, 2)};
    } else {
      k.type = KernelType{pick == 2 ? KernelKind::Add : KernelKind::Norm, {}};
      k.size = {rng.uniform_int(1, 4096), rng.uniform_int(1, 16)};
    }
    const int widths[] = {8, 16, 32};
    k.data_width = widths[rng.uniform_int(0, 2)];
    PE pe;
    pe.id = "pe";
    pe.role = PeRole::Accelerator;
    pe.lm_capacity = 1024 * rng.uniform_int(4, 128);
    const std::uint64_t buses[] = {4, 8, 16};
    pe.bus_width = buses[rng.uniform_int(0, 2)];
    pe.dma_setup = static_cast<std::uint64_t>(rng.uniform_int(8, 128));
    const std::uint64_t cpbs[] = {1, 2, 4};
    pe.cycles_per_beat = cpbs[rng.uniform_int(0, 2)];
    OpConstraint constraint;
    constraint.pe = pe.id;
    constraint.supported = true;
    if (k.type.kind == KernelKind::Matmul && rng.uniform(0, 1) < 0.4)
      constraint.limits = {rng.uniform_int(1, 256), 1024, 1024};
    const std::uint64_t proc = static_cast<std::uint64_t>(rng.uniform_int(100, 10'000'000));

    std::uint64_t best = UINT64_MAX;
    for (TilingMode mode :
         {TilingMode::Untiled, TilingMode::SingleBuffer, TilingMode::DoubleBuffer}) {
      const auto plan = plan_tiles(k, pe, constraint, mode);
      if (!plan) continue;
      if (plan->tile_bytes_in + plan->tile_bytes_out > plan->budget) {
        detail = "budget violated";
        return false;
      }
      const std::uint64_t budget_expect =
          mode == TilingMode::DoubleBuffer ? pe.lm_capacity / 2 : pe.lm_capacity;
      if (plan->budget != budget_expect) {
        detail = "wrong budget";
        return false;
      }
      const auto terms = tile_cycle_terms(k, pe, *plan, proc);
      const std::uint64_t estimate = estimate_cycles(k, pe, *plan, proc);
      const std::uint64_t replayed = mode == TilingMode::SingleBuffer
                                         ? oracles::replay_single_buffer(terms)
                                         : oracles::replay_double_buffer(terms);
      if (mode != TilingMode::Untiled && estimate != replayed) {
        detail = "formula " + std::to_string(estimate) + " != replay " +
                 std::to_string(replayed);
        return false;
      }
      best = std::min(best, estimate);
      if (mode != TilingMode::Untiled) ++plans;
    }
    const auto choice = preselect_mode(k, pe, constraint, proc);
    if (best == UINT64_MAX) {
      if (choice) {
        detail = "preselect returned a mode where none is feasible";
        return false;
      }
    } else {
      if (!choice || choice->cycles != best) {
        detail = "preselect did not return the cycle minimum";
        return false;
      }
      ++preselects;
    }
  }
  detail = std::to_string(plans) + " plans replayed, " + std::to_string(preselects) +
           " preselects checked";
  return true;
}

// ---- criterion 8: power decoupling round trip ----
bool criterion_power_roundtrip(std::string& detail) {
  // Synthesized like an actual characterization run: static power on the
  // platform's mW scale and the two sample frequencies well separated (nearly
  // equal frequencies make the two-point fit ill-conditioned by construction).
  testutil::Rng rng(1008);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double p_stat = rng.uniform(1e-4, 5e-3);
    const double slope = rng.uniform(1e-12, 1e-10);
    const double f1 = rng.uniform(5e7, 2e8);
    const double f2 = f1 * rng.uniform(1.5, 3.0);
    const double f_base = rng.uniform(5e7, 4e8);
    const DecoupledPower d =
        decouple_power({f1, p_stat + slope * f1}, {f2, p_stat + slope * f2}, f_base);
    const double expect_dyn = slope * f_base;
    const double rel_stat = std::abs(d.p_stat - p_stat) / p_stat;
    const double rel_dyn = std::abs(d.p_dyn_base - expect_dyn) / expect_dyn;
    worst = std::max({worst, rel_stat, rel_dyn});
  }
  std::ostringstream msg;
  msg << "worst relative error " << worst;
  detail = msg.str();
  return worst <= 1e-12;
}

// ---- criterion 9: determinism and self-validation ----
bool criterion_determinism(std::string& detail) {
  const fs::path out1 = testutil::make_temp_dir("medea_acc_det1");
  const fs::path out2 = testutil::make_temp_dir("medea_acc_det2");
  const std::vector<std::string> base = {
      "schedule",   "--workload", testutil::data_path("tsd_workload.json"),
      "--platform", testutil::data_path("heeptimize.json"),
      "--profiles", testutil::data_path("profiles_tsd_synthetic.json"),
      "--deadline", "200"};
  auto args1 = base;
  args1.push_back("--out");
  args1.push_back(out1.string());
  auto args2 = base;
  args2.push_back("--out");
  args2.push_back(out2.string());
  {
    std::ostringstream sink;
    auto* saved = std::cout.rdbuf(sink.rdbuf());
    const int rc1 = medea::cli::run(args1);
    const int rc2 = medea::cli::run(args2);
    std::cout.rdbuf(saved);
    if (rc1 != 0 || rc2 != 0) {
      detail = "cmd_schedule failed";
      return false;
    }
  }
  for (const char* name : {"schedule.json", "report.json"}) {
    if (testutil::read_file((out1 / name).string()) !=
        testutil::read_file((out2 / name).string())) {
      detail = std::string(name) + " differs between identical runs";
      return false;
    }
  }

  testutil::Rng rng(1009);
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    const Instance inst = generate_instance(seed + 50000);
    Problem p = testutil::instance_problem(inst, 1.0);
    p.deadline = min_time(p) * rng.uniform(1.0, 2.5);
    const Schedule s = solve(p);
    const ValidationResult r = validate(p, s);
    if (!r.pass) {
      detail = "validate(p, solve(p)) failed at seed " + std::to_string(seed) + ": " +
               (r.mismatches.empty() ? "?" : r.mismatches.front().field);
      return false;
    }
  }
  detail = "byte-identical outputs; 500 fuzzed schedules validated";
  return true;
}

// ---- criterion 10: bundled case study runs end to end ----
bool criterion_case_study(std::string& detail) {
  const double start = now_seconds();
  const fs::path out = testutil::make_temp_dir("medea_acc_tsd");
  const std::vector<std::string> common = {
      "--workload", testutil::data_path("tsd_workload.json"),
      "--platform", testutil::data_path("heeptimize.json"),
      "--profiles", testutil::data_path("profiles_tsd_synthetic.json"),
      "--groups",   testutil::data_path("tsd_groups.json"),
      "--deadline", "50,200,1000",
      "--out",      out.string()};
  auto compare_args = common;
  compare_args.insert(compare_args.begin(), "compare");
  auto ablate_args = common;
  ablate_args.insert(ablate_args.begin(), "ablate");
  if (medea::cli::run(compare_args) != 0 || medea::cli::run(ablate_args) != 0) {
    detail = "compare/ablate failed on the case study";
    return false;
  }
  const double elapsed = now_seconds() - start;

  // Qualitative ordering: per deadline, the optimizer's total is minimal among
  // feasible rows in both emitted tables.
  for (const char* file : {"compare.csv", "ablation.csv"}) {
    std::istringstream lines(testutil::read_file((out / file).string()));
    std::string line;
    std::getline(lines, line);
    std::map<std::string, double> reference;
    std::vector<std::pair<std::string, double>> others;
    const std::string ref_name = std::string(file) == "compare.csv" ? "medea" : "full";
    while (std::getline(lines, line)) {
      std::vector<std::string> cells;
      std::string cell;
      std::istringstream ls(line);
      while (std::getline(ls, cell, ',')) cells.push_back(cell);
      if (cells.size() < 7) continue;
      const bool feasible = cells.back() == "1";
      if (!feasible) continue;
      if (cells[1] == ref_name)
        reference[cells[0]] = std::stod(cells[5]);
      else
        others.emplace_back(cells[0], std::stod(cells[5]));
    }
    if (reference.size() != 3) {
      detail = std::string(file) + ": reference rows missing";
      return false;
    }
    for (const auto& [deadline, total] : others) {
      if (reference.at(deadline) > total * (1.0 + 1e-12)) {
        detail = std::string(file) + ": ordering violated at " + deadline + " ms";
        return false;
      }
    }
  }

  // The absolute numbers come from bundled synthetic profiles and are labeled
  // as such here and in the README.
  if (testutil::data_path("profiles_tsd_synthetic.json").find("synthetic") ==
      std::string::npos) {
    detail = "profiles fixture is not labeled synthetic";
    return false;
  }
  const fs::path readme = fs::path(MEDEA_DATA_DIR).parent_path() / "README.md";
  const std::string readme_text = testutil::read_file(readme.string());
  if (readme_text.find("synthetic") == std::string::npos) {
    detail = "README does not document the synthetic fixtures";
    return false;
  }
  detail = "compare + ablate in " + std::to_string(elapsed) + " s";
  return elapsed < 30.0;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    std::function<bool(std::string&)> fn;
  };
  const Entry entries[] = {
      {1, "solver optimality vs brute force (500 instances)", criterion_solver_optimality},
      {2, "deadline-energy monotonicity (50 x 10)", criterion_deadline_monotonicity},
      {3, "sleep-energy accounting", criterion_sleep_accounting},
      {4, "V-F table fixture fidelity", criterion_vf_fixture},
      {5, "feature-savings arithmetic", criterion_savings},
      {6, "optimizer dominance over ablations and baselines", criterion_dominance},
      {7, "tiling formulas vs event replay (1000 plans)", criterion_tiling_replay},
      {8, "power decoupling round trip (1000 samples)", criterion_power_roundtrip},
      {9, "determinism and self-validation", criterion_determinism},
      {10, "bundled case study end to end", criterion_case_study},
  };
  bool all = true;
  for (const Entry& e : entries) {
    std::string detail;
    bool ok = false;
    try {
      ok = e.fn(detail);
    } catch (const std::exception& ex) {
      detail = std::string("exception: ") + ex.what();
      ok = false;
    }
    std::printf("%s criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", e.id, e.name,
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    all = all && ok;
  }
  return all ? 0 : 1;
}
