#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "medea/workload.hpp"

namespace medea {

/// One operating point: the maximum supported frequency at that voltage.
struct VfPoint {
  double voltage = 0.0;    // volts
  double frequency = 0.0;  // hertz

  bool operator==(const VfPoint&) const = default;
};

/// Per-(PE, kind) operational constraint. Empty limits = unlimited.
struct OpConstraint {
  std::string pe;
  KernelType type;
  bool supported = true;
  std::vector<std::int64_t> limits;  // per-dimension maxima

  bool operator==(const OpConstraint&) const = default;
};

enum class PeRole { Cpu, Accelerator };

struct PE {
  std::string id;
  PeRole role = PeRole::Accelerator;
  std::uint64_t lm_capacity = 0;     // local memory, bytes
  std::uint64_t bus_width = 4;       // bytes per DMA beat: 4, 8 or 16
  std::uint64_t dma_setup = 0;       // cycles per transfer
  std::uint64_t cycles_per_beat = 1;

  bool operator==(const PE&) const = default;
};

struct PlatformSpec {
  std::string name;
  std::vector<PE> pes;
  std::vector<VfPoint> vf_table;      // sorted by voltage, voltages unique
  std::uint64_t shared_capacity = 0;  // bytes
  double sleep_power = 0.0;           // watts
  std::vector<OpConstraint> constraints;

  const PE* find_pe(const std::string& id) const;
  /// Position in pes, or -1. Used as the canonical PE ordering for tie rules.
  int pe_index(const std::string& id) const;

  bool operator==(const PlatformSpec&) const = default;
};

/// Measured processing-only cycles for one kernel instance on one PE,
/// operands resident in local memory, untiled.
struct CycleProfileEntry {
  std::string pe;
  KernelType type;
  std::vector<std::int64_t> size;
  int data_width = 8;
  std::uint64_t proc_cycles = 1;

  bool operator==(const CycleProfileEntry&) const = default;
};

/// Decoupled platform power while a kernel of this type runs on this PE at
/// this voltage. Size-independent by model assumption.
struct PowerProfileEntry {
  std::string pe;
  KernelType type;
  double voltage = 0.0;     // volts
  double p_stat = 0.0;      // watts
  double p_dyn_base = 0.0;  // watts at f_base
  double f_base = 1.0;      // hertz

  bool operator==(const PowerProfileEntry&) const = default;
};

struct Profiles {
  std::vector<CycleProfileEntry> cycles;
  std::vector<PowerProfileEntry> power;

  bool operator==(const Profiles&) const = default;
};

void validate_platform(const PlatformSpec& spec);
/// Key uniqueness plus coverage: every explicitly supported (pe, kind) needs
/// at least one cycle entry and a power entry at every platform voltage.
void validate_profiles(const Profiles& profiles, const PlatformSpec& spec);

PlatformSpec parse_platform(const std::string& json_text);
PlatformSpec load_platform(const std::string& path);
std::string emit_platform(const PlatformSpec& spec);
void write_platform(const PlatformSpec& spec, const std::string& path);

Profiles parse_profiles(const std::string& json_text);
Profiles load_profiles(const std::string& path);
std::string emit_profiles(const Profiles& p);
void write_profiles(const Profiles& p, const std::string& path);

/// F_max(v) for a listed voltage. Throws UnknownVoltage otherwise.
double max_frequency(const PlatformSpec& spec, double voltage);

/// Constraint for (pe, kind) after platform defaults: the CPU supports every
/// kind unlimited, accelerators support nothing unless declared.
OpConstraint effective_constraint(const PlatformSpec& spec, const PE& pe,
                                  const KernelType& type);

struct PowerSample {
  double frequency = 0.0;  // hertz
  double power = 0.0;      // watts
};

struct DecoupledPower {
  double p_stat = 0.0;
  double p_dyn_base = 0.0;
  bool clamped = false;  // a negative fit was clamped to zero
};

/// Fit total = p_stat + slope * f through two samples at one voltage and
/// report the dynamic component at f_base. Throws DegenerateMeasurement when
/// the sample frequencies coincide.
DecoupledPower decouple_power(const PowerSample& a, const PowerSample& b, double f_base);

}  // namespace medea
