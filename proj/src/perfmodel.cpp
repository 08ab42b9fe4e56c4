#include "medea/perfmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "medea/errors.hpp"

namespace medea {

double config_time(std::uint64_t cycles, double frequency) {
  return static_cast<double>(cycles) / frequency;
}

double config_energy(double power, double time) { return power * time; }

double kernel_ops(const Kernel& k) {
  const auto& s = k.size;
  if (k.type.kind == KernelKind::Matmul)
    return static_cast<double>(s[0]) * static_cast<double>(s[1]) * static_cast<double>(s[2]);
  if (k.type.kind == KernelKind::Conv2d) {
    double ops = 1.0;
    for (int i = 0; i < 6; ++i) ops *= static_cast<double>(s[i]);
    const double stride = static_cast<double>(s[6]);
    return ops / (stride * stride);
  }
  double ops = 1.0;
  for (std::int64_t d : s) ops *= static_cast<double>(d);
  return ops;
}

namespace {

const CycleProfileEntry* nearest_reference(const Profiles& profiles, const Kernel& k,
                                           const PE& pe) {
  const double target = kernel_ops(k);
  const CycleProfileEntry* best = nullptr;
  double best_dist = std::numeric_limits<double>::infinity();
  double best_ops = 0.0;
  // Two passes: same data width preferred, any width as fallback.
  for (bool same_width : {true, false}) {
    for (const CycleProfileEntry& e : profiles.cycles) {
      if (e.pe != pe.id || !(e.type == k.type)) continue;
      if (same_width != (e.data_width == k.data_width)) continue;
      Kernel ref;
      ref.type = e.type;
      ref.size = e.size;
      const double ops = kernel_ops(ref);
      const double dist = std::abs(ops - target);
      if (!best || dist < best_dist || (dist == best_dist && ops < best_ops) ||
          (dist == best_dist && ops == best_ops &&
           (e.proc_cycles < best->proc_cycles ||
            (e.proc_cycles == best->proc_cycles && e.size < best->size)))) {
        best = &e;
        best_dist = dist;
        best_ops = ops;
      }
    }
    if (best) return best;
  }
  return nullptr;
}

}  // namespace

std::uint64_t kernel_proc_cycles(const Profiles& profiles, const Kernel& k, const PE& pe) {
  for (const CycleProfileEntry& e : profiles.cycles) {
    if (e.pe == pe.id && e.type == k.type && e.size == k.size &&
        e.data_width == k.data_width)
      return e.proc_cycles;
  }
  const CycleProfileEntry* ref = nearest_reference(profiles, k, pe);
  if (!ref)
    throw MissingProfile("no cycle profile for (" + pe.id + ", " + to_string(k.type) + ")");
  Kernel ref_kernel;
  ref_kernel.type = ref->type;
  ref_kernel.size = ref->size;
  const double scaled =
      static_cast<double>(ref->proc_cycles) * kernel_ops(k) / kernel_ops(ref_kernel);
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(scaled)));
}

double kernel_power(const Profiles& profiles, const Kernel& k, const PE& pe,
                    double voltage, double frequency) {
  for (const PowerProfileEntry& e : profiles.power) {
    if (e.pe == pe.id && e.type == k.type && e.voltage == voltage)
      return e.p_stat + e.p_dyn_base * (frequency / e.f_base);
  }
  throw MissingProfile("no power profile for (" + pe.id + ", " + to_string(k.type) + ") at " +
                       std::to_string(voltage) + " V");
}

std::optional<Configuration> build_configuration(const PlatformSpec& spec,
                                                 const Profiles& profiles,
                                                 const Kernel& k, const PE& pe,
                                                 double voltage, const ModelParams& params,
                                                 std::optional<TilingMode> forced_mode) {
  const OpConstraint constraint = effective_constraint(spec, pe, k.type);
  if (!constraint.supported) return std::nullopt;

  std::uint64_t proc = 0;
  try {
    proc = kernel_proc_cycles(profiles, k, pe);
  } catch (const MissingProfile&) {
    return std::nullopt;
  }

  ModeChoice choice;
  if (forced_mode) {
    auto plan = plan_tiles(k, pe, constraint, *forced_mode);
    if (!plan) return std::nullopt;
    choice.mode = *forced_mode;
    choice.cycles = estimate_cycles(k, pe, *plan, proc, params.tile_overhead_cycles);
    choice.plan = std::move(*plan);
  } else {
    auto picked = preselect_mode(k, pe, constraint, proc, params.tile_overhead_cycles);
    if (!picked) return std::nullopt;
    choice = std::move(*picked);
  }

  const double frequency = max_frequency(spec, voltage);
  double power = 0.0;
  try {
    power = kernel_power(profiles, k, pe, voltage, frequency);
  } catch (const MissingProfile&) {
    return std::nullopt;
  }

  Configuration c;
  c.pe = pe.id;
  c.pe_index = spec.pe_index(pe.id);
  c.voltage = voltage;
  c.frequency = frequency;
  c.mode = choice.mode;
  c.plan = std::move(choice.plan);
  c.cycles = choice.cycles;
  c.time = config_time(c.cycles, frequency);
  c.power = power;
  c.energy = config_energy(power, c.time);
  return c;
}

}  // namespace medea
