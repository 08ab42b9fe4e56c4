#include "medea/optimizer.hpp"

#include <algorithm>
#include <fstream>
#include <utility>

#include "json_io.hpp"
#include "medea/errors.hpp"
#include "medea/tiling.hpp"

namespace medea {

std::vector<Configuration> enumerate_candidates(const Problem& p, const Kernel& k) {
  std::vector<Configuration> out;
  for (const PE& pe : p.platform.pes) {
    for (const VfPoint& vf : p.platform.vf_table) {
      auto c = build_configuration(p.platform, p.profiles, k, pe, vf.voltage, p.params);
      if (c) out.push_back(std::move(*c));
    }
  }
  return out;
}

MckpItem to_mckp_item(const PlatformSpec& spec, const Configuration& c) {
  MckpItem it;
  it.time = c.time;
  it.energy = c.energy;
  it.tie_pe = c.pe_index >= 0 ? c.pe_index : spec.pe_index(c.pe);
  it.tie_v = 0;
  for (std::size_t i = 0; i < spec.vf_table.size(); ++i)
    if (spec.vf_table[i].voltage == c.voltage) it.tie_v = static_cast<int>(i);
  return it;
}

std::vector<Configuration> prune_dominated(const PlatformSpec& spec,
                                           std::vector<Configuration> items) {
  std::vector<MckpItem> mapped;
  mapped.reserve(items.size());
  for (const Configuration& c : items) mapped.push_back(to_mckp_item(spec, c));
  std::vector<Configuration> kept;
  for (int idx : pareto_filter(mapped)) kept.push_back(std::move(items[idx]));
  return kept;
}

std::vector<ConfigGroup> enumerate_groups(const Problem& p) {
  std::vector<ConfigGroup> groups;
  groups.reserve(p.workload.kernels.size());
  for (const Kernel& k : p.workload.kernels) {
    ConfigGroup g;
    g.kernel_id = k.id;
    g.items = prune_dominated(p.platform, enumerate_candidates(p, k));
    if (g.items.empty())
      throw NoValidConfiguration(k.id, "kernel " + std::to_string(k.id) + " (" +
                                           to_string(k.type) +
                                           "): no valid configuration on any PE");
    groups.push_back(std::move(g));
  }
  return groups;
}

double min_time(const Problem& p) {
  const auto groups = enumerate_groups(p);
  double total = 0.0;
  for (const ConfigGroup& g : groups) {
    double best = g.items.front().time;
    for (const Configuration& c : g.items) best = std::min(best, c.time);
    total += best;
  }
  return total;
}

Schedule assemble_schedule(const Problem& p, std::vector<KernelAssignment> assignments) {
  Schedule s;
  s.assignments = std::move(assignments);
  for (const KernelAssignment& a : s.assignments) {
    s.total_active_time += a.config.time;
    s.total_active_energy += a.config.energy;
  }
  for (std::size_t i = 1; i < s.assignments.size(); ++i) {
    if (s.assignments[i].config.voltage == s.assignments[i - 1].config.voltage) continue;
    s.vf_switch_count++;
    s.vf_switch_time += static_cast<double>(p.params.vf_switch_cycles) /
                        s.assignments[i].config.frequency;
    s.vf_switch_energy += p.params.vf_switch_energy;
  }
  s.total_active_time += s.vf_switch_time;
  s.total_active_energy += s.vf_switch_energy;
  return s;
}

namespace {

// The solver works on per-kernel times; V-F switch penalties enter only at
// assembly. When configured penalties push the schedule past the deadline,
// that is an infeasibility of the knobs, not of the selection.
void check_overhead(const Problem& p, const Schedule& s) {
  if (s.total_active_time > p.deadline)
    throw InfeasibleDeadline(s.total_active_time,
                             "V-F switch overhead pushes the schedule past the deadline");
}

}  // namespace

Schedule solve_with_groups(const Problem& p, const std::vector<ConfigGroup>& groups) {
  std::vector<std::vector<MckpItem>> items(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (const Configuration& c : groups[g].items)
      items[g].push_back(to_mckp_item(p.platform, c));
  const MckpSolution sol = mckp_solve_exact(items, p.deadline);
  std::vector<KernelAssignment> assignments;
  assignments.reserve(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g)
    assignments.push_back({groups[g].kernel_id, groups[g].items[sol.choice[g]]});
  Schedule s = assemble_schedule(p, std::move(assignments));
  check_overhead(p, s);
  return s;
}

Schedule solve(const Problem& p) {
  if (p.deadline <= 0.0) throw ValidationError("deadline must be positive");
  return solve_with_groups(p, enumerate_groups(p));
}

Schedule solve_dp(const Problem& p, double quantum_seconds) {
  if (p.deadline <= 0.0) throw ValidationError("deadline must be positive");
  const auto groups = enumerate_groups(p);
  std::vector<std::vector<MckpItem>> items(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (const Configuration& c : groups[g].items)
      items[g].push_back(to_mckp_item(p.platform, c));
  const MckpSolution sol = mckp_solve_quantized(items, p.deadline, quantum_seconds);
  std::vector<KernelAssignment> assignments;
  assignments.reserve(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g)
    assignments.push_back({groups[g].kernel_id, groups[g].items[sol.choice[g]]});
  Schedule s = assemble_schedule(p, std::move(assignments));
  check_overhead(p, s);
  return s;
}

EnergyReport report(const Problem& p, const Schedule& s) {
  EnergyReport r;
  r.deadline = p.deadline;
  r.active_time = s.total_active_time;
  r.sleep_time = std::max(0.0, p.deadline - s.total_active_time);
  r.active_energy = s.total_active_energy;
  r.sleep_energy = p.platform.sleep_power * r.sleep_time;
  r.total_energy = r.active_energy + r.sleep_energy;
  return r;
}

std::vector<std::string> staging_warnings(const Problem& p) {
  std::vector<std::string> out;
  for (const Kernel& k : p.workload.kernels) {
    const Footprint f = operand_footprint(k);
    if (f.bytes_in + f.bytes_out > p.platform.shared_capacity)
      out.push_back("kernel " + std::to_string(k.id) + " (" + to_string(k.type) +
                    ") stages " + std::to_string(f.bytes_in + f.bytes_out) +
                    " bytes, above the shared capacity of " +
                    std::to_string(p.platform.shared_capacity));
  }
  return out;
}

EnergyReportMs to_ms(const EnergyReport& r) {
  EnergyReportMs m;
  m.deadline_ms = r.deadline * 1e3;
  m.active_time_ms = r.active_time * 1e3;
  m.sleep_time_ms = r.sleep_time * 1e3;
  m.active_energy_uj = r.active_energy * 1e6;
  m.sleep_energy_uj = r.sleep_energy * 1e6;
  m.total_energy_uj = r.total_energy * 1e6;
  return m;
}

namespace {

detail::njson report_block(const EnergyReportMs& m) {
  detail::njson j;
  j["deadline_ms"] = m.deadline_ms;
  j["active_time_ms"] = m.active_time_ms;
  j["sleep_time_ms"] = m.sleep_time_ms;
  j["active_energy_uj"] = m.active_energy_uj;
  j["sleep_energy_uj"] = m.sleep_energy_uj;
  j["total_energy_uj"] = m.total_energy_uj;
  return j;
}

}  // namespace

std::string emit_schedule(const Problem& p, const Schedule& s, const EnergyReport& r) {
  using detail::njson;
  njson j;
  j["workload"] = p.workload.name;
  j["assignments"] = njson::array();
  for (const KernelAssignment& a : s.assignments) {
    njson ja;
    ja["kernel_id"] = a.kernel_id;
    ja["pe"] = a.config.pe;
    ja["voltage_v"] = a.config.voltage;
    ja["frequency_hz"] = a.config.frequency;
    ja["mode"] = to_string(a.config.mode);
    ja["n_tiles"] = a.config.plan.n_tiles;
    ja["cycles"] = a.config.cycles;
    ja["time_s"] = a.config.time;
    ja["power_w"] = a.config.power;
    ja["energy_j"] = a.config.energy;
    j["assignments"].push_back(std::move(ja));
  }
  j["overhead"] = {{"vf_switch_count", s.vf_switch_count},
                   {"vf_switch_time_s", s.vf_switch_time},
                   {"vf_switch_energy_j", s.vf_switch_energy}};
  j["totals"] = {{"active_time_s", s.total_active_time},
                 {"active_energy_j", s.total_active_energy}};
  j["report"] = report_block(to_ms(r));
  return j.dump(2) + "\n";
}

std::string emit_report(const EnergyReport& r) {
  return report_block(to_ms(r)).dump(2) + "\n";
}

ParsedSchedule parse_schedule(const std::string& json_text) {
  using namespace detail;
  const njson j = parse_json(json_text, "schedule");
  ParsedSchedule out;
  if (j.contains("workload")) out.workload_name = j.at("workload").get<std::string>();
  for (const njson& ja : require_array(j, "assignments", "schedule")) {
    KernelAssignment a;
    a.kernel_id = static_cast<int>(require_int(ja, "kernel_id", "assignment"));
    a.config.pe = require_string(ja, "pe", "assignment");
    a.config.voltage = require_number(ja, "voltage_v", "assignment");
    a.config.frequency = require_number(ja, "frequency_hz", "assignment");
    a.config.mode = tiling_mode_from_string(require_string(ja, "mode", "assignment"));
    a.config.plan.mode = a.config.mode;
    a.config.plan.n_tiles = static_cast<std::uint64_t>(require_int(ja, "n_tiles", "assignment"));
    a.config.cycles = static_cast<std::uint64_t>(require_int(ja, "cycles", "assignment"));
    a.config.time = require_number(ja, "time_s", "assignment");
    a.config.power = require_number(ja, "power_w", "assignment");
    a.config.energy = require_number(ja, "energy_j", "assignment");
    out.schedule.assignments.push_back(std::move(a));
  }
  const njson& jo = require(j, "overhead", "schedule");
  out.schedule.vf_switch_count =
      static_cast<std::uint64_t>(require_int(jo, "vf_switch_count", "overhead"));
  out.schedule.vf_switch_time = require_number(jo, "vf_switch_time_s", "overhead");
  out.schedule.vf_switch_energy = require_number(jo, "vf_switch_energy_j", "overhead");
  const njson& jt = require(j, "totals", "schedule");
  out.schedule.total_active_time = require_number(jt, "active_time_s", "totals");
  out.schedule.total_active_energy = require_number(jt, "active_energy_j", "totals");
  const njson& jr = require(j, "report", "schedule");
  out.report.deadline_ms = require_number(jr, "deadline_ms", "report");
  out.report.active_time_ms = require_number(jr, "active_time_ms", "report");
  out.report.sleep_time_ms = require_number(jr, "sleep_time_ms", "report");
  out.report.active_energy_uj = require_number(jr, "active_energy_uj", "report");
  out.report.sleep_energy_uj = require_number(jr, "sleep_energy_uj", "report");
  out.report.total_energy_uj = require_number(jr, "total_energy_uj", "report");
  return out;
}

ParsedSchedule load_schedule(const std::string& path) {
  return parse_schedule(detail::read_file(path));
}

}  // namespace medea
