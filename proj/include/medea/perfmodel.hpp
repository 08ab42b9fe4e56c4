#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "medea/platform.hpp"
#include "medea/tiling.hpp"
#include "medea/workload.hpp"

namespace medea {

/// Model knobs. Defaults reproduce the plain formulation: no per-tile
/// overhead and free V-F switches.
struct ModelParams {
  std::uint64_t tile_overhead_cycles = 0;
  std::uint64_t vf_switch_cycles = 0;  // charged at the switched-to frequency
  double vf_switch_energy = 0.0;       // joules per switch
};

/// One way to run a kernel: a (PE, voltage, tiling mode) choice with its
/// derived cycle count, time, power and energy. time = cycles / frequency and
/// energy = power * time are computed exactly once, here.
struct Configuration {
  std::string pe;
  int pe_index = -1;  // position in PlatformSpec::pes
  double voltage = 0.0;
  double frequency = 0.0;
  TilingMode mode = TilingMode::Untiled;
  TilePlan plan;
  std::uint64_t cycles = 0;
  double time = 0.0;    // seconds
  double power = 0.0;   // watts
  double energy = 0.0;  // joules
};

double config_time(std::uint64_t cycles, double frequency);
double config_energy(double power, double time);

/// Abstract work measure used to scale cycle counts between sizes:
/// matmul = M*K*N, conv2d = H*W*C_in*C_out*K_h*K_w / stride^2,
/// elementwise = product of dims.
double kernel_ops(const Kernel& k);

/// Processing-only cycles for k on pe: the exact profile entry when one
/// matches (size, data_width), otherwise linear-in-ops extrapolation from the
/// reference entry with the nearest op count (same kind and data width
/// preferred), rounded up. Throws MissingProfile when no entry exists.
std::uint64_t kernel_proc_cycles(const Profiles& profiles, const Kernel& k, const PE& pe);

/// p_stat + p_dyn_base * (f / f_base) from the (pe, kind, voltage) entry.
double kernel_power(const Profiles& profiles, const Kernel& k, const PE& pe,
                    double voltage, double frequency);

/// Build the configuration for (k, pe, voltage) with the cycle-optimal tiling
/// mode, or with forced_mode when given (used by the fixed-tiling baselines).
/// Invalidity — unsupported kind, untileable, missing profiles — is a value:
/// nullopt removes the configuration from the kernel's option set.
std::optional<Configuration> build_configuration(const PlatformSpec& spec,
                                                 const Profiles& profiles,
                                                 const Kernel& k, const PE& pe,
                                                 double voltage,
                                                 const ModelParams& params = {},
                                                 std::optional<TilingMode> forced_mode = {});

}  // namespace medea
