#include "medea/validator.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "json_io.hpp"
#include "medea/errors.hpp"
#include "medea/tiling.hpp"

namespace medea {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string num(std::uint64_t v) { return std::to_string(v); }

struct Checker {
  ValidationResult result;

  void expect(const std::string& field, int kernel_id, double expected, double actual) {
    if (expected == actual) return;
    result.pass = false;
    result.mismatches.push_back({field, kernel_id, num(expected), num(actual)});
  }
  void expect(const std::string& field, int kernel_id, std::uint64_t expected,
              std::uint64_t actual) {
    if (expected == actual) return;
    result.pass = false;
    result.mismatches.push_back({field, kernel_id, num(expected), num(actual)});
  }
  void expect(const std::string& field, int kernel_id, const std::string& expected,
              const std::string& actual) {
    if (expected == actual) return;
    result.pass = false;
    result.mismatches.push_back({field, kernel_id, expected, actual});
  }
  void fail(const std::string& field, int kernel_id, const std::string& expected,
            const std::string& actual) {
    result.pass = false;
    result.mismatches.push_back({field, kernel_id, expected, actual});
  }
};

}  // namespace

ValidationResult validate(const Problem& p, const Schedule& s,
                          const EnergyReportMs* report_block) {
  Checker chk;

  if (s.assignments.size() != p.workload.kernels.size())
    chk.fail("assignments", -1, std::to_string(p.workload.kernels.size()),
             std::to_string(s.assignments.size()));

  // Independent running totals; the solver's own bookkeeping is not reused.
  double total_time = 0.0;
  double total_energy = 0.0;

  for (std::size_t i = 0; i < s.assignments.size(); ++i) {
    const KernelAssignment& a = s.assignments[i];
    if (a.kernel_id < 1 || a.kernel_id > static_cast<int>(p.workload.kernels.size()))
      throw UnknownReference("assignment references unknown kernel " +
                             std::to_string(a.kernel_id));
    if (static_cast<int>(i) + 1 != a.kernel_id)
      chk.fail("kernel_order", a.kernel_id, std::to_string(i + 1),
               std::to_string(a.kernel_id));
    const Kernel& k = p.workload.kernels[a.kernel_id - 1];
    const PE* pe = p.platform.find_pe(a.config.pe);
    if (!pe) throw UnknownReference("assignment references unknown PE '" + a.config.pe + "'");
    bool voltage_known = false;
    for (const VfPoint& vf : p.platform.vf_table)
      if (vf.voltage == a.config.voltage) voltage_known = true;
    if (!voltage_known)
      throw UnknownReference("assignment references unknown voltage " +
                             std::to_string(a.config.voltage));

    const double frequency = max_frequency(p.platform, a.config.voltage);
    chk.expect("frequency", a.kernel_id, frequency, a.config.frequency);

    const OpConstraint constraint = effective_constraint(p.platform, *pe, k.type);
    if (!constraint.supported) {
      chk.fail("mode", a.kernel_id, "supported PE", to_string(k.type) + " unsupported on " + pe->id);
      continue;
    }
    auto plan = plan_tiles(k, *pe, constraint, a.config.mode);
    if (!plan) {
      chk.fail("mode", a.kernel_id, "feasible tiling", to_string(a.config.mode) + " untileable");
      continue;
    }
    chk.expect("n_tiles", a.kernel_id, plan->n_tiles, a.config.plan.n_tiles);

    std::uint64_t proc = 0;
    try {
      proc = kernel_proc_cycles(p.profiles, k, *pe);
    } catch (const MissingProfile& e) {
      chk.fail("cycles", a.kernel_id, "cycle profile", e.what());
      continue;
    }
    const std::uint64_t cycles =
        estimate_cycles(k, *pe, *plan, proc, p.params.tile_overhead_cycles);
    chk.expect("cycles", a.kernel_id, cycles, a.config.cycles);

    double power = 0.0;
    try {
      power = kernel_power(p.profiles, k, *pe, a.config.voltage, frequency);
    } catch (const MissingProfile& e) {
      chk.fail("power", a.kernel_id, "power profile", e.what());
      continue;
    }
    chk.expect("power", a.kernel_id, power, a.config.power);

    const double time = config_time(cycles, frequency);
    chk.expect("time", a.kernel_id, time, a.config.time);
    const double energy = config_energy(power, time);
    chk.expect("energy", a.kernel_id, energy, a.config.energy);

    total_time += time;
    total_energy += energy;
  }

  std::uint64_t switches = 0;
  double switch_time = 0.0;
  double switch_energy = 0.0;
  for (std::size_t i = 1; i < s.assignments.size(); ++i) {
    if (s.assignments[i].config.voltage == s.assignments[i - 1].config.voltage) continue;
    switches++;
    switch_time += static_cast<double>(p.params.vf_switch_cycles) /
                   max_frequency(p.platform, s.assignments[i].config.voltage);
    switch_energy += p.params.vf_switch_energy;
  }
  chk.expect("vf_switch_count", -1, switches, s.vf_switch_count);
  chk.expect("vf_switch_time", -1, switch_time, s.vf_switch_time);
  chk.expect("vf_switch_energy", -1, switch_energy, s.vf_switch_energy);
  total_time += switch_time;
  total_energy += switch_energy;
  chk.expect("total_active_time", -1, total_time, s.total_active_time);
  chk.expect("total_active_energy", -1, total_energy, s.total_active_energy);

  if (total_time > p.deadline)
    chk.fail("deadline", -1, "total_active_time <= " + num(p.deadline), num(total_time));

  if (report_block) {
    EnergyReport r;
    r.deadline = p.deadline;
    r.active_time = total_time;
    r.sleep_time = std::max(0.0, p.deadline - total_time);
    r.active_energy = total_energy;
    r.sleep_energy = p.platform.sleep_power * r.sleep_time;
    r.total_energy = r.active_energy + r.sleep_energy;
    const EnergyReportMs m = to_ms(r);
    chk.expect("report.deadline_ms", -1, m.deadline_ms, report_block->deadline_ms);
    chk.expect("report.active_time_ms", -1, m.active_time_ms, report_block->active_time_ms);
    chk.expect("report.sleep_time_ms", -1, m.sleep_time_ms, report_block->sleep_time_ms);
    chk.expect("report.active_energy_uj", -1, m.active_energy_uj,
               report_block->active_energy_uj);
    chk.expect("report.sleep_energy_uj", -1, m.sleep_energy_uj,
               report_block->sleep_energy_uj);
    chk.expect("report.total_energy_uj", -1, m.total_energy_uj,
               report_block->total_energy_uj);
  }

  return chk.result;
}

std::string emit_validation(const ValidationResult& r) {
  detail::njson j;
  j["pass"] = r.pass;
  j["mismatches"] = detail::njson::array();
  for (const Mismatch& m : r.mismatches) {
    detail::njson jm;
    jm["field"] = m.field;
    jm["kernel_id"] = m.kernel_id;
    jm["expected"] = m.expected;
    jm["actual"] = m.actual;
    j["mismatches"].push_back(std::move(jm));
  }
  return j.dump(2) + "\n";
}

}  // namespace medea
