#include "medea/baselines.hpp"

#include <algorithm>
#include <limits>
#include <utility>

#include "json_io.hpp"
#include "medea/errors.hpp"

namespace medea {

Strategy strategy_from_string(const std::string& s) {
  if (s == "cpu_maxvf") return Strategy::CpuMaxVf;
  if (s == "static_accel_maxvf") return Strategy::StaticAccelMaxVf;
  if (s == "static_accel_appdvfs") return Strategy::StaticAccelAppDvfs;
  if (s == "coarse_appdvfs") return Strategy::CoarseAppDvfs;
  if (s == "medea") return Strategy::Medea;
  throw ParseError("unknown strategy '" + s + "'");
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::CpuMaxVf: return "cpu_maxvf";
    case Strategy::StaticAccelMaxVf: return "static_accel_maxvf";
    case Strategy::StaticAccelAppDvfs: return "static_accel_appdvfs";
    case Strategy::CoarseAppDvfs: return "coarse_appdvfs";
    case Strategy::Medea: return "medea";
  }
  return "?";
}

Ablation ablation_from_string(const std::string& s) {
  if (s == "none") return Ablation::None;
  if (s == "no_kernel_dvfs") return Ablation::NoKernelDvfs;
  if (s == "no_adaptive_tiling") return Ablation::NoAdaptiveTiling;
  if (s == "no_kernel_sched") return Ablation::NoKernelSched;
  throw ParseError("unknown ablation '" + s + "'");
}

std::string to_string(Ablation a) {
  switch (a) {
    case Ablation::None: return "none";
    case Ablation::NoKernelDvfs: return "no_kernel_dvfs";
    case Ablation::NoAdaptiveTiling: return "no_adaptive_tiling";
    case Ablation::NoKernelSched: return "no_kernel_sched";
  }
  return "?";
}

void validate_groups(const std::vector<KernelGroup>& groups, const Workload& w) {
  if (groups.empty()) throw ValidationError("empty group list");
  int next = 1;
  for (const KernelGroup& g : groups) {
    if (g.first_kernel != next)
      throw ValidationError("group '" + g.name + "' starts at kernel " +
                            std::to_string(g.first_kernel) + ", expected " +
                            std::to_string(next));
    if (g.last_kernel < g.first_kernel)
      throw ValidationError("group '" + g.name + "' is empty");
    next = g.last_kernel + 1;
  }
  if (next != static_cast<int>(w.kernels.size()) + 1)
    throw ValidationError("groups do not cover the workload: end at " +
                          std::to_string(next - 1) + " of " +
                          std::to_string(w.kernels.size()));
}

std::vector<KernelGroup> parse_groups(const std::string& json_text) {
  using namespace detail;
  const njson j = parse_json(json_text, "groups");
  if (!j.is_array()) throw ParseError("groups: top level must be an array");
  std::vector<KernelGroup> out;
  for (const njson& jg : j) {
    KernelGroup g;
    g.name = require_string(jg, "name", "group");
    g.first_kernel = static_cast<int>(require_int(jg, "first_kernel", "group"));
    g.last_kernel = static_cast<int>(require_int(jg, "last_kernel", "group"));
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<KernelGroup> load_groups(const std::string& path) {
  return parse_groups(detail::read_file(path));
}

std::string emit_groups(const std::vector<KernelGroup>& groups) {
  detail::njson j = detail::njson::array();
  for (const KernelGroup& g : groups)
    j.push_back({{"name", g.name}, {"first_kernel", g.first_kernel},
                 {"last_kernel", g.last_kernel}});
  return j.dump(2) + "\n";
}

namespace {

const PE& cpu_pe(const PlatformSpec& spec) {
  for (const PE& pe : spec.pes)
    if (pe.role == PeRole::Cpu) return pe;
  throw ValidationError("platform has no CPU");
}

std::optional<Configuration> db_config(const Problem& p, const Kernel& k, const PE& pe,
                                       double voltage) {
  return build_configuration(p.platform, p.profiles, k, pe, voltage, p.params,
                             TilingMode::DoubleBuffer);
}

/// Kernel on pe, falling back to the CPU; both double-buffered. Throws when
/// the kernel cannot run double-buffered anywhere.
Configuration db_config_with_fallback(const Problem& p, const Kernel& k, const PE& pe,
                                      double voltage) {
  if (auto c = db_config(p, k, pe, voltage)) return *c;
  if (auto c = db_config(p, k, cpu_pe(p.platform), voltage)) return *c;
  throw NoValidConfiguration(k.id, "kernel " + std::to_string(k.id) + " (" +
                                       to_string(k.type) +
                                       ") has no double-buffered configuration");
}

StrategyResult finish(const Problem& p, std::vector<KernelAssignment> assignments,
                      const std::string& strategy) {
  Schedule s = assemble_schedule(p, std::move(assignments));
  if (s.total_active_time > p.deadline)
    throw InfeasibleDeadline(s.total_active_time,
                             strategy + " needs " + std::to_string(s.total_active_time) +
                                 " s, above the deadline");
  EnergyReport r = report(p, s);
  return {std::move(s), r};
}

/// Fixed-PE schedules evaluated per app-wide voltage; the PE per kernel is
/// decided by the caller.
struct VoltageCandidate {
  double voltage = 0.0;
  double time = 0.0;
  double energy = 0.0;
  std::vector<KernelAssignment> assignments;
};

StrategyResult pick_voltage(const Problem& p, std::vector<VoltageCandidate> candidates,
                            const std::string& strategy) {
  const VoltageCandidate* best = nullptr;
  double fastest = std::numeric_limits<double>::infinity();
  for (const VoltageCandidate& c : candidates) {
    fastest = std::min(fastest, c.time);
    if (c.time > p.deadline) continue;
    if (!best || c.energy < best->energy) best = &c;
  }
  if (!best)
    throw InfeasibleDeadline(fastest, strategy + " cannot meet the deadline at any voltage");
  return finish(p, best->assignments, strategy);
}

StrategyResult run_cpu_maxvf(const Problem& p) {
  const double v = p.platform.vf_table.back().voltage;
  const PE& cpu = cpu_pe(p.platform);
  std::vector<KernelAssignment> assignments;
  for (const Kernel& k : p.workload.kernels) {
    auto c = db_config(p, k, cpu, v);
    if (!c)
      throw NoValidConfiguration(k.id, "kernel " + std::to_string(k.id) +
                                           " cannot run double-buffered on the CPU");
    assignments.push_back({k.id, std::move(*c)});
  }
  return finish(p, std::move(assignments), "cpu_maxvf");
}

/// PE split of the static-accelerator strategies: the whole workload on one
/// accelerator at max V-F, unsupported kernels on the CPU; the accelerator
/// minimizing total energy wins.
std::vector<KernelAssignment> static_accel_split(const Problem& p) {
  const double v = p.platform.vf_table.back().voltage;
  std::optional<std::vector<KernelAssignment>> best;
  double best_energy = std::numeric_limits<double>::infinity();
  bool any_accel = false;
  for (const PE& pe : p.platform.pes) {
    if (pe.role != PeRole::Accelerator) continue;
    any_accel = true;
    std::vector<KernelAssignment> assignments;
    double energy = 0.0;
    for (const Kernel& k : p.workload.kernels) {
      Configuration c = db_config_with_fallback(p, k, pe, v);
      energy += c.energy;
      assignments.push_back({k.id, std::move(c)});
    }
    if (!best || energy < best_energy) {
      best = std::move(assignments);
      best_energy = energy;
    }
  }
  if (!any_accel) {
    // Degenerate platform: everything is "unsupported" and lands on the CPU.
    const PE& cpu = cpu_pe(p.platform);
    std::vector<KernelAssignment> assignments;
    for (const Kernel& k : p.workload.kernels)
      assignments.push_back({k.id, db_config_with_fallback(p, k, cpu, v)});
    return assignments;
  }
  return std::move(*best);
}

StrategyResult run_static_accel_maxvf(const Problem& p) {
  return finish(p, static_accel_split(p), "static_accel_maxvf");
}

StrategyResult run_static_accel_appdvfs(const Problem& p) {
  const std::vector<KernelAssignment> split = static_accel_split(p);
  std::vector<VoltageCandidate> candidates;
  for (const VfPoint& vf : p.platform.vf_table) {
    VoltageCandidate cand;
    cand.voltage = vf.voltage;
    bool ok = true;
    for (std::size_t i = 0; i < split.size(); ++i) {
      const Kernel& k = p.workload.kernels[i];
      const PE* pe = p.platform.find_pe(split[i].config.pe);
      auto c = db_config(p, k, *pe, vf.voltage);
      if (!c) {
        ok = false;
        break;
      }
      cand.time += c->time;
      cand.energy += c->energy;
      cand.assignments.push_back({k.id, std::move(*c)});
    }
    if (ok) candidates.push_back(std::move(cand));
  }
  return pick_voltage(p, std::move(candidates), "static_accel_appdvfs");
}

StrategyResult run_coarse_appdvfs(const Problem& p, const std::vector<KernelGroup>& groups) {
  validate_groups(groups, p.workload);
  std::vector<VoltageCandidate> candidates;
  for (const VfPoint& vf : p.platform.vf_table) {
    VoltageCandidate cand;
    cand.voltage = vf.voltage;
    for (const KernelGroup& g : groups) {
      std::optional<std::vector<KernelAssignment>> best_members;
      double best_energy = std::numeric_limits<double>::infinity();
      for (const PE& pe : p.platform.pes) {
        std::vector<KernelAssignment> members;
        double energy = 0.0;
        for (int id = g.first_kernel; id <= g.last_kernel; ++id) {
          const Kernel& k = p.workload.kernels[id - 1];
          Configuration c = db_config_with_fallback(p, k, pe, vf.voltage);
          energy += c.energy;
          members.push_back({k.id, std::move(c)});
        }
        if (!best_members || energy < best_energy) {
          best_members = std::move(members);
          best_energy = energy;
        }
      }
      for (KernelAssignment& a : *best_members) {
        cand.time += a.config.time;
        cand.energy += a.config.energy;
        cand.assignments.push_back(std::move(a));
      }
    }
    candidates.push_back(std::move(cand));
  }
  return pick_voltage(p, std::move(candidates), "coarse_appdvfs");
}

StrategyResult run_medea(const Problem& p) {
  Schedule s = solve(p);
  EnergyReport r = report(p, s);
  return {std::move(s), r};
}

}  // namespace

StrategyResult run_strategy(const Problem& p, Strategy s,
                            const std::vector<KernelGroup>* groups) {
  switch (s) {
    case Strategy::CpuMaxVf: return run_cpu_maxvf(p);
    case Strategy::StaticAccelMaxVf: return run_static_accel_maxvf(p);
    case Strategy::StaticAccelAppDvfs: return run_static_accel_appdvfs(p);
    case Strategy::CoarseAppDvfs:
      if (!groups) throw ValidationError("coarse_appdvfs requires kernel groups");
      return run_coarse_appdvfs(p, *groups);
    case Strategy::Medea: return run_medea(p);
  }
  throw Error("unreachable strategy");
}

namespace {

StrategyResult run_no_kernel_dvfs(const Problem& p) {
  std::vector<std::vector<Configuration>> candidates;
  candidates.reserve(p.workload.kernels.size());
  for (const Kernel& k : p.workload.kernels)
    candidates.push_back(enumerate_candidates(p, k));

  double fastest = std::numeric_limits<double>::infinity();
  for (const VfPoint& vf : p.platform.vf_table) {  // lowest feasible voltage wins
    std::vector<ConfigGroup> groups;
    bool usable = true;
    double min_total = 0.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      std::vector<Configuration> at_v;
      for (const Configuration& c : candidates[i])
        if (c.voltage == vf.voltage) at_v.push_back(c);
      if (at_v.empty()) {
        usable = false;
        break;
      }
      ConfigGroup g;
      g.kernel_id = p.workload.kernels[i].id;
      g.items = prune_dominated(p.platform, std::move(at_v));
      double best = g.items.front().time;
      for (const Configuration& c : g.items) best = std::min(best, c.time);
      min_total += best;
      groups.push_back(std::move(g));
    }
    if (!usable) continue;
    fastest = std::min(fastest, min_total);
    if (min_total > p.deadline) continue;
    Schedule s = solve_with_groups(p, groups);
    EnergyReport r = report(p, s);
    return {std::move(s), r};
  }
  throw InfeasibleDeadline(fastest, "no single voltage meets the deadline");
}

StrategyResult run_no_adaptive_tiling(const Problem& p) {
  std::vector<ConfigGroup> groups;
  for (const Kernel& k : p.workload.kernels) {
    std::vector<Configuration> items;
    for (const PE& pe : p.platform.pes)
      for (const VfPoint& vf : p.platform.vf_table)
        if (auto c = db_config(p, k, pe, vf.voltage)) items.push_back(std::move(*c));
    if (items.empty())
      throw NoValidConfiguration(k.id, "kernel " + std::to_string(k.id) +
                                           " has no double-buffered configuration");
    ConfigGroup g;
    g.kernel_id = k.id;
    g.items = prune_dominated(p.platform, std::move(items));
    groups.push_back(std::move(g));
  }
  Schedule s = solve_with_groups(p, groups);
  EnergyReport r = report(p, s);
  return {std::move(s), r};
}

StrategyResult run_no_kernel_sched(const Problem& p, const std::vector<KernelGroup>& groups,
                                   bool cpu_fallback) {
  validate_groups(groups, p.workload);
  const PE& cpu = cpu_pe(p.platform);
  struct GroupItem {
    MckpItem item;
    std::vector<KernelAssignment> members;
  };
  std::vector<std::vector<GroupItem>> group_items(groups.size());
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const KernelGroup& g = groups[gi];
    for (const PE& pe : p.platform.pes) {
      for (std::size_t vi = 0; vi < p.platform.vf_table.size(); ++vi) {
        const double v = p.platform.vf_table[vi].voltage;
        GroupItem gi_item;
        bool ok = true;
        for (int id = g.first_kernel; id <= g.last_kernel && ok; ++id) {
          const Kernel& k = p.workload.kernels[id - 1];
          auto c = build_configuration(p.platform, p.profiles, k, pe, v, p.params);
          if (!c && cpu_fallback)
            c = build_configuration(p.platform, p.profiles, k, cpu, v, p.params);
          if (!c) {
            ok = false;
            break;
          }
          gi_item.item.time += c->time;
          gi_item.item.energy += c->energy;
          gi_item.members.push_back({k.id, std::move(*c)});
        }
        if (!ok) continue;
        gi_item.item.tie_pe = p.platform.pe_index(pe.id);
        gi_item.item.tie_v = static_cast<int>(vi);
        group_items[gi].push_back(std::move(gi_item));
      }
    }
    if (group_items[gi].empty())
      throw NoValidConfiguration(g.first_kernel,
                                 "group '" + g.name + "' has no valid (PE, voltage) option");
  }
  std::vector<std::vector<MckpItem>> items(groups.size());
  for (std::size_t gi = 0; gi < groups.size(); ++gi)
    for (const GroupItem& it : group_items[gi]) items[gi].push_back(it.item);
  const MckpSolution sol = mckp_solve_exact(items, p.deadline);
  std::vector<KernelAssignment> assignments;
  for (std::size_t gi = 0; gi < groups.size(); ++gi)
    for (const KernelAssignment& a : group_items[gi][sol.choice[gi]].members)
      assignments.push_back(a);
  Schedule s = assemble_schedule(p, std::move(assignments));
  EnergyReport r = report(p, s);
  return {std::move(s), r};
}

}  // namespace

StrategyResult run_ablation(const Problem& p, Ablation a,
                            const std::vector<KernelGroup>* groups, bool cpu_fallback) {
  switch (a) {
    case Ablation::None: return run_medea(p);
    case Ablation::NoKernelDvfs: return run_no_kernel_dvfs(p);
    case Ablation::NoAdaptiveTiling: return run_no_adaptive_tiling(p);
    case Ablation::NoKernelSched:
      if (!groups) throw ValidationError("no_kernel_sched requires kernel groups");
      return run_no_kernel_sched(p, *groups, cpu_fallback);
  }
  throw Error("unreachable ablation");
}

double savings(double e_without, double e_full) {
  if (e_without <= 0.0)
    throw ValidationError("savings needs a positive baseline energy");
  return (e_without - e_full) / e_without * 100.0;
}

}  // namespace medea
