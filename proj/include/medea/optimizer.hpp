#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "medea/mckp.hpp"
#include "medea/perfmodel.hpp"
#include "medea/platform.hpp"
#include "medea/workload.hpp"

namespace medea {

struct Problem {
  Workload workload;
  PlatformSpec platform;
  Profiles profiles;
  double deadline = 0.0;  // seconds
  ModelParams params;
};

/// The valid configurations of one kernel after dominance pruning: sorted by
/// time ascending with strictly decreasing energy (a Pareto frontier).
struct ConfigGroup {
  int kernel_id = 0;
  std::vector<Configuration> items;
};

struct KernelAssignment {
  int kernel_id = 0;
  Configuration config;
};

struct Schedule {
  std::vector<KernelAssignment> assignments;  // one per kernel, in order
  std::uint64_t vf_switch_count = 0;
  double vf_switch_time = 0.0;    // seconds
  double vf_switch_energy = 0.0;  // joules
  double total_active_time = 0.0;
  double total_active_energy = 0.0;
};

/// Active/sleep split of one deadline window: the platform idles at
/// sleep_power from the end of the schedule to the deadline.
struct EnergyReport {
  double deadline = 0.0;
  double active_time = 0.0;
  double sleep_time = 0.0;
  double active_energy = 0.0;
  double sleep_energy = 0.0;
  double total_energy = 0.0;
};

/// All (PE, voltage) configurations of one kernel, unpruned, ordered by
/// PE then voltage.
std::vector<Configuration> enumerate_candidates(const Problem& p, const Kernel& k);

/// Per-kernel Pareto groups. Throws NoValidConfiguration when some kernel
/// runs nowhere.
std::vector<ConfigGroup> enumerate_groups(const Problem& p);

std::vector<Configuration> prune_dominated(const PlatformSpec& spec,
                                           std::vector<Configuration> items);

/// Fastest achievable total active time: sum of per-kernel minima.
double min_time(const Problem& p);

MckpItem to_mckp_item(const PlatformSpec& spec, const Configuration& c);

/// Kernel-order totals plus V-F switch-overhead accounting. Every schedule in
/// this artifact is assembled here.
Schedule assemble_schedule(const Problem& p, std::vector<KernelAssignment> assignments);

/// Exact minimum-active-energy schedule meeting the deadline, solved as a
/// multiple-choice knapsack over the per-kernel configuration groups.
Schedule solve(const Problem& p);
Schedule solve_with_groups(const Problem& p, const std::vector<ConfigGroup>& groups);

/// Quantized-DP variant for stress instances; optimal within the grid.
Schedule solve_dp(const Problem& p, double quantum_seconds);

EnergyReport report(const Problem& p, const Schedule& s);

/// Kernels whose staged footprint exceeds the shared-memory capacity.
/// Advisory only; staging is not a hard schedule constraint.
std::vector<std::string> staging_warnings(const Problem& p);

/// Report fields in the units used by emitted files (ms / uJ).
struct EnergyReportMs {
  double deadline_ms = 0.0;
  double active_time_ms = 0.0;
  double sleep_time_ms = 0.0;
  double active_energy_uj = 0.0;
  double sleep_energy_uj = 0.0;
  double total_energy_uj = 0.0;
};

EnergyReportMs to_ms(const EnergyReport& r);

/// Schedule file, JSON. Assignment fields are SI and bit-stable; the report
/// block carries the ms / uJ view.
std::string emit_schedule(const Problem& p, const Schedule& s, const EnergyReport& r);
std::string emit_report(const EnergyReport& r);

struct ParsedSchedule {
  std::string workload_name;
  Schedule schedule;
  EnergyReportMs report;
};

ParsedSchedule parse_schedule(const std::string& json_text);
ParsedSchedule load_schedule(const std::string& path);

}  // namespace medea
