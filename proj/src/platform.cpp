#include "medea/platform.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <tuple>

#include "json_io.hpp"
#include "medea/errors.hpp"

namespace medea {

const PE* PlatformSpec::find_pe(const std::string& id) const {
  for (const PE& pe : pes)
    if (pe.id == id) return &pe;
  return nullptr;
}

int PlatformSpec::pe_index(const std::string& id) const {
  for (std::size_t i = 0; i < pes.size(); ++i)
    if (pes[i].id == id) return static_cast<int>(i);
  return -1;
}

void validate_platform(const PlatformSpec& spec) {
  if (spec.pes.empty()) throw ValidationError("platform has no PEs");
  int cpus = 0;
  std::set<std::string> ids;
  for (const PE& pe : spec.pes) {
    if (pe.id.empty()) throw ValidationError("PE with empty id");
    if (!ids.insert(pe.id).second) throw ValidationError("duplicate PE id '" + pe.id + "'");
    if (pe.role == PeRole::Cpu) ++cpus;
    if (pe.lm_capacity == 0) throw ValidationError("PE '" + pe.id + "': lm_capacity must be > 0");
    if (pe.bus_width != 4 && pe.bus_width != 8 && pe.bus_width != 16)
      throw ValidationError("PE '" + pe.id + "': bus_width must be 4, 8 or 16");
    if (pe.cycles_per_beat == 0)
      throw ValidationError("PE '" + pe.id + "': cycles_per_beat must be > 0");
  }
  if (cpus != 1) throw ValidationError("platform must have exactly one CPU PE, found " +
                                       std::to_string(cpus));
  if (spec.vf_table.empty()) throw ValidationError("empty V-F table");
  for (std::size_t i = 0; i < spec.vf_table.size(); ++i) {
    const VfPoint& p = spec.vf_table[i];
    if (p.frequency <= 0.0) throw ValidationError("V-F point with non-positive frequency");
    if (i > 0) {
      if (p.voltage == spec.vf_table[i - 1].voltage)
        throw ValidationError("duplicate voltage in V-F table");
      if (p.voltage < spec.vf_table[i - 1].voltage)
        throw ValidationError("V-F table not sorted by voltage");
      if (p.frequency <= spec.vf_table[i - 1].frequency)
        throw ValidationError("frequency not strictly increasing with voltage");
    }
  }
  if (spec.sleep_power < 0.0) throw ValidationError("negative sleep power");
  std::set<std::pair<std::string, std::string>> ckeys;
  for (const OpConstraint& c : spec.constraints) {
    if (!spec.find_pe(c.pe)) throw ValidationError("constraint references unknown PE '" + c.pe + "'");
    if (!ckeys.insert({c.pe, to_string(c.type)}).second)
      throw ValidationError("duplicate constraint for (" + c.pe + ", " + to_string(c.type) + ")");
    if (!c.supported && !c.limits.empty())
      throw ValidationError("unsupported constraint (" + c.pe + ", " + to_string(c.type) +
                            ") must not carry limits");
    for (std::int64_t l : c.limits)
      if (l < 1) throw ValidationError("constraint limit < 1 for (" + c.pe + ", " +
                                       to_string(c.type) + ")");
    const int arity = kind_arity(c.type);
    if (!c.limits.empty() && arity > 0 && static_cast<int>(c.limits.size()) != arity)
      throw ValidationError("constraint limits arity mismatch for (" + c.pe + ", " +
                            to_string(c.type) + ")");
  }
}

void validate_profiles(const Profiles& profiles, const PlatformSpec& spec) {
  std::set<std::tuple<std::string, std::string, std::vector<std::int64_t>, int>> ckeys;
  for (const CycleProfileEntry& e : profiles.cycles) {
    if (!spec.find_pe(e.pe))
      throw ValidationError("cycle profile references unknown PE '" + e.pe + "'");
    if (e.proc_cycles < 1) throw ValidationError("cycle profile with proc_cycles < 1");
    if (!ckeys.insert({e.pe, to_string(e.type), e.size, e.data_width}).second)
      throw ValidationError("duplicate cycle profile for (" + e.pe + ", " + to_string(e.type) + ")");
  }
  std::set<std::tuple<std::string, std::string, double>> pkeys;
  for (const PowerProfileEntry& e : profiles.power) {
    if (!spec.find_pe(e.pe))
      throw ValidationError("power profile references unknown PE '" + e.pe + "'");
    if (e.p_stat < 0.0 || e.p_dyn_base < 0.0)
      throw ValidationError("negative power in profile for (" + e.pe + ", " + to_string(e.type) + ")");
    if (e.f_base <= 0.0)
      throw ValidationError("non-positive f_base in profile for (" + e.pe + ", " +
                            to_string(e.type) + ")");
    if (!pkeys.insert({e.pe, to_string(e.type), e.voltage}).second)
      throw ValidationError("duplicate power profile for (" + e.pe + ", " + to_string(e.type) +
                            ") at " + std::to_string(e.voltage) + " V");
  }
  // Coverage for every explicitly supported (pe, kind).
  for (const OpConstraint& c : spec.constraints) {
    if (!c.supported) continue;
    bool has_cycles = false;
    for (const CycleProfileEntry& e : profiles.cycles)
      if (e.pe == c.pe && e.type == c.type) { has_cycles = true; break; }
    if (!has_cycles)
      throw ValidationError("no cycle profile for supported (" + c.pe + ", " +
                            to_string(c.type) + ")");
    for (const VfPoint& vf : spec.vf_table) {
      if (!pkeys.count({c.pe, to_string(c.type), vf.voltage}))
        throw ValidationError("no power profile for supported (" + c.pe + ", " +
                              to_string(c.type) + ") at " + std::to_string(vf.voltage) + " V");
    }
  }
}

namespace {

PeRole role_from_string(const std::string& s, const std::string& ctx) {
  if (s == "cpu") return PeRole::Cpu;
  if (s == "accelerator") return PeRole::Accelerator;
  throw ParseError(ctx + ": unknown role '" + s + "'");
}

std::vector<std::int64_t> int_list(const detail::njson& arr, const std::string& ctx) {
  std::vector<std::int64_t> out;
  for (const detail::njson& d : arr) {
    if (!d.is_number_integer()) throw ParseError(ctx + ": list entries must be integers");
    out.push_back(d.get<std::int64_t>());
  }
  return out;
}

}  // namespace

PlatformSpec parse_platform(const std::string& json_text) {
  using namespace detail;
  const njson j = parse_json(json_text, "platform");
  PlatformSpec spec;
  if (j.contains("name")) spec.name = require_string(j, "name", "platform");
  for (const njson& jp : require_array(j, "pes", "platform")) {
    PE pe;
    const std::string ctx = "pe";
    pe.id = require_string(jp, "id", ctx);
    pe.role = role_from_string(require_string(jp, "role", ctx), "pe '" + pe.id + "'");
    pe.lm_capacity = static_cast<std::uint64_t>(require_int(jp, "lm_capacity", ctx));
    pe.bus_width = static_cast<std::uint64_t>(require_int(jp, "bus_width", ctx));
    pe.dma_setup = static_cast<std::uint64_t>(require_int(jp, "dma_setup", ctx));
    pe.cycles_per_beat = static_cast<std::uint64_t>(require_int(jp, "cycles_per_beat", ctx));
    spec.pes.push_back(std::move(pe));
  }
  for (const njson& jv : require_array(j, "vf_table", "platform")) {
    VfPoint p;
    p.voltage = require_number(jv, "voltage_v", "vf point");
    p.frequency = require_number(jv, "frequency_hz", "vf point");
    spec.vf_table.push_back(p);
  }
  spec.shared_capacity =
      static_cast<std::uint64_t>(require_int(j, "shared_capacity_bytes", "platform"));
  spec.sleep_power = require_number(j, "sleep_power_w", "platform");
  if (j.contains("constraints")) {
    for (const njson& jc : j.at("constraints")) {
      OpConstraint c;
      c.pe = require_string(jc, "pe", "constraint");
      c.type = kernel_type_from_string(require_string(jc, "kind", "constraint"));
      c.supported = jc.contains("supported") ? jc.at("supported").get<bool>() : true;
      if (jc.contains("limits")) c.limits = int_list(jc.at("limits"), "constraint limits");
      spec.constraints.push_back(std::move(c));
    }
  }
  validate_platform(spec);
  return spec;
}

PlatformSpec load_platform(const std::string& path) {
  return parse_platform(detail::read_file(path));
}

std::string emit_platform(const PlatformSpec& spec) {
  using detail::njson;
  njson j;
  j["name"] = spec.name;
  j["pes"] = njson::array();
  for (const PE& pe : spec.pes) {
    njson jp;
    jp["id"] = pe.id;
    jp["role"] = pe.role == PeRole::Cpu ? "cpu" : "accelerator";
    jp["lm_capacity"] = pe.lm_capacity;
    jp["bus_width"] = pe.bus_width;
    jp["dma_setup"] = pe.dma_setup;
    jp["cycles_per_beat"] = pe.cycles_per_beat;
    j["pes"].push_back(std::move(jp));
  }
  j["vf_table"] = njson::array();
  for (const VfPoint& p : spec.vf_table)
    j["vf_table"].push_back({{"voltage_v", p.voltage}, {"frequency_hz", p.frequency}});
  j["shared_capacity_bytes"] = spec.shared_capacity;
  j["sleep_power_w"] = spec.sleep_power;
  j["constraints"] = njson::array();
  for (const OpConstraint& c : spec.constraints) {
    njson jc;
    jc["pe"] = c.pe;
    jc["kind"] = to_string(c.type);
    jc["supported"] = c.supported;
    if (!c.limits.empty()) jc["limits"] = c.limits;
    j["constraints"].push_back(std::move(jc));
  }
  return j.dump(2) + "\n";
}

void write_platform(const PlatformSpec& spec, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << emit_platform(spec);
}

Profiles parse_profiles(const std::string& json_text) {
  using namespace detail;
  const njson j = parse_json(json_text, "profiles");
  Profiles p;
  for (const njson& je : require_array(j, "cycles", "profiles")) {
    CycleProfileEntry e;
    e.pe = require_string(je, "pe", "cycle entry");
    e.type = kernel_type_from_string(require_string(je, "kind", "cycle entry"));
    e.size = int_list(require_array(je, "size", "cycle entry"), "cycle entry size");
    e.data_width = static_cast<int>(require_int(je, "data_width", "cycle entry"));
    e.proc_cycles = static_cast<std::uint64_t>(require_int(je, "proc_cycles", "cycle entry"));
    p.cycles.push_back(std::move(e));
  }
  for (const njson& je : require_array(j, "power", "profiles")) {
    PowerProfileEntry e;
    e.pe = require_string(je, "pe", "power entry");
    e.type = kernel_type_from_string(require_string(je, "kind", "power entry"));
    e.voltage = require_number(je, "voltage", "power entry");
    e.p_stat = require_number(je, "p_stat", "power entry");
    e.p_dyn_base = require_number(je, "p_dyn_base", "power entry");
    e.f_base = require_number(je, "f_base", "power entry");
    p.power.push_back(std::move(e));
  }
  return p;
}

Profiles load_profiles(const std::string& path) {
  return parse_profiles(detail::read_file(path));
}

std::string emit_profiles(const Profiles& p) {
  using detail::njson;
  njson j;
  j["cycles"] = njson::array();
  for (const CycleProfileEntry& e : p.cycles) {
    njson je;
    je["pe"] = e.pe;
    je["kind"] = to_string(e.type);
    je["size"] = e.size;
    je["data_width"] = e.data_width;
    je["proc_cycles"] = e.proc_cycles;
    j["cycles"].push_back(std::move(je));
  }
  j["power"] = njson::array();
  for (const PowerProfileEntry& e : p.power) {
    njson je;
    je["pe"] = e.pe;
    je["kind"] = to_string(e.type);
    je["voltage"] = e.voltage;
    je["p_stat"] = e.p_stat;
    je["p_dyn_base"] = e.p_dyn_base;
    je["f_base"] = e.f_base;
    j["power"].push_back(std::move(je));
  }
  return j.dump(2) + "\n";
}

void write_profiles(const Profiles& p, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << emit_profiles(p);
}

double max_frequency(const PlatformSpec& spec, double voltage) {
  for (const VfPoint& p : spec.vf_table)
    if (p.voltage == voltage) return p.frequency;
  throw UnknownVoltage("voltage " + std::to_string(voltage) + " V not in the platform V-F table");
}

OpConstraint effective_constraint(const PlatformSpec& spec, const PE& pe,
                                  const KernelType& type) {
  for (const OpConstraint& c : spec.constraints)
    if (c.pe == pe.id && c.type == type) return c;
  OpConstraint def;
  def.pe = pe.id;
  def.type = type;
  def.supported = (pe.role == PeRole::Cpu);
  return def;
}

DecoupledPower decouple_power(const PowerSample& a, const PowerSample& b, double f_base) {
  if (a.frequency == b.frequency)
    throw DegenerateMeasurement("power samples share the frequency " +
                                std::to_string(a.frequency) + " Hz");
  if (a.power < 0.0 || b.power < 0.0) throw ValidationError("negative power sample");
  if (f_base <= 0.0) throw ValidationError("f_base must be positive");
  const double slope = (b.power - a.power) / (b.frequency - a.frequency);
  const double intercept = a.power - slope * a.frequency;
  DecoupledPower d;
  d.p_stat = intercept;
  d.p_dyn_base = slope * f_base;
  if (d.p_stat < 0.0) {
    d.p_stat = 0.0;
    d.clamped = true;
  }
  if (d.p_dyn_base < 0.0) {
    d.p_dyn_base = 0.0;
    d.clamped = true;
  }
  return d;
}

}  // namespace medea
