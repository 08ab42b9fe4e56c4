#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "medea/optimizer.hpp"

namespace medea {

enum class Strategy {
  CpuMaxVf,
  StaticAccelMaxVf,
  StaticAccelAppDvfs,
  CoarseAppDvfs,
  Medea,
};

enum class Ablation {
  None,
  NoKernelDvfs,
  NoAdaptiveTiling,
  NoKernelSched,
};

Strategy strategy_from_string(const std::string& s);
std::string to_string(Strategy s);
Ablation ablation_from_string(const std::string& s);
std::string to_string(Ablation a);

/// A contiguous slice of the workload scheduled as one unit by the
/// coarse-grained strategies. Groups must partition 1..N.
struct KernelGroup {
  std::string name;
  int first_kernel = 0;
  int last_kernel = 0;
};

std::vector<KernelGroup> parse_groups(const std::string& json_text);
std::vector<KernelGroup> load_groups(const std::string& path);
std::string emit_groups(const std::vector<KernelGroup>& groups);
void validate_groups(const std::vector<KernelGroup>& groups, const Workload& w);

using StrategyResult = std::pair<Schedule, EnergyReport>;

/// The comparison strategies. All of them run every kernel double-buffered;
/// medea delegates to the full optimizer. groups is required only for
/// CoarseAppDvfs.
StrategyResult run_strategy(const Problem& p, Strategy s,
                            const std::vector<KernelGroup>* groups = nullptr);

/// Rerun the optimizer with one feature disabled. NoKernelDvfs fixes the
/// lowest deadline-feasible voltage for the whole workload, NoAdaptiveTiling
/// forces double buffering, NoKernelSched decides (PE, voltage) once per
/// kernel group. cpu_fallback moves group members that are invalid on the
/// group's PE onto the CPU instead of invalidating the whole option.
StrategyResult run_ablation(const Problem& p, Ablation a,
                            const std::vector<KernelGroup>* groups = nullptr,
                            bool cpu_fallback = true);

/// (e_without - e_full) / e_without * 100.
double savings(double e_without, double e_full);

}  // namespace medea
