#include "medea/cli.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "medea/baselines.hpp"
#include "medea/errors.hpp"
#include "medea/gen.hpp"
#include "medea/optimizer.hpp"
#include "medea/validator.hpp"

namespace medea::cli {

namespace {

namespace fs = std::filesystem;

struct Manifest {
  std::string workload_path;
  std::string platform_path;
  std::string profiles_path;
  std::string groups_path;
  std::string schedule_path;
  std::string out_dir = ".";
  std::vector<double> deadlines_ms;
  std::string strategy = "medea";
  std::string ablation = "none";
  std::uint64_t seed = 1;
  std::uint64_t tile_overhead_cycles = 0;
  std::uint64_t vf_switch_cycles = 0;
  double vf_switch_energy_uj = 0.0;
  double dp_quantum_us = 0.0;  // 0 = exact branch-and-bound solver
  std::string gen_kernels = "3:8";
  std::string gen_accels = "1:2";
  std::string gen_voltages = "2:4";
};

std::string fmt(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void check_deadlines(const std::vector<double>& deadlines_ms) {
  if (deadlines_ms.empty()) throw ValidationError("at least one --deadline is required");
  for (std::size_t i = 1; i < deadlines_ms.size(); ++i)
    if (deadlines_ms[i] <= deadlines_ms[i - 1])
      throw ValidationError("deadline list must be strictly increasing");
  for (double d : deadlines_ms)
    if (d <= 0.0) throw ValidationError("deadlines must be positive");
}

ModelParams params_from(const Manifest& m) {
  ModelParams p;
  p.tile_overhead_cycles = m.tile_overhead_cycles;
  p.vf_switch_cycles = m.vf_switch_cycles;
  p.vf_switch_energy = m.vf_switch_energy_uj * 1e-6;
  return p;
}

Problem load_problem(const Manifest& m, double deadline_ms) {
  Problem p;
  p.workload = load_workload(m.workload_path);
  p.platform = load_platform(m.platform_path);
  p.profiles = load_profiles(m.profiles_path);
  validate_profiles(p.profiles, p.platform);
  p.deadline = deadline_ms * 1e-3;
  p.params = params_from(m);
  return p;
}

void write_text_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.parent_path() / (".tmp_" + path.filename().string());
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, path);
}

void write_csv(const fs::path& path, const std::string& header,
               const std::vector<std::string>& rows) {
  std::string content = header + "\n";
  for (const std::string& r : rows) content += r + "\n";
  write_text_atomic(path, content);
}

StrategyResult dispatch(const Problem& p, const Manifest& m,
                        const std::vector<KernelGroup>* groups) {
  const Ablation ablation = ablation_from_string(m.ablation);
  if (ablation != Ablation::None) return run_ablation(p, ablation, groups);
  const Strategy strategy = strategy_from_string(m.strategy);
  if (strategy == Strategy::Medea && m.dp_quantum_us > 0.0) {
    Schedule s = solve_dp(p, m.dp_quantum_us * 1e-6);
    EnergyReport r = report(p, s);
    return {std::move(s), r};
  }
  return run_strategy(p, strategy, groups);
}

int do_schedule(const Manifest& m) {
  check_deadlines(m.deadlines_ms);
  if (m.deadlines_ms.size() != 1)
    throw ValidationError("schedule takes exactly one --deadline");
  const Problem p = load_problem(m, m.deadlines_ms[0]);
  for (const std::string& w : staging_warnings(p)) std::cerr << "warning: " << w << "\n";
  std::vector<KernelGroup> groups;
  const bool has_groups = !m.groups_path.empty();
  if (has_groups) groups = load_groups(m.groups_path);
  const auto [schedule, rep] = dispatch(p, m, has_groups ? &groups : nullptr);
  fs::create_directories(m.out_dir);
  write_text_atomic(fs::path(m.out_dir) / "schedule.json", emit_schedule(p, schedule, rep));
  write_text_atomic(fs::path(m.out_dir) / "report.json", emit_report(rep));
  const EnergyReportMs ms = to_ms(rep);
  std::cout << "active " << fmt(ms.active_time_ms) << " ms / " << fmt(ms.active_energy_uj)
            << " uJ, sleep " << fmt(ms.sleep_time_ms) << " ms / " << fmt(ms.sleep_energy_uj)
            << " uJ, total " << fmt(ms.total_energy_uj) << " uJ\n";
  return 0;
}

int do_compare(const Manifest& m) {
  check_deadlines(m.deadlines_ms);
  if (m.groups_path.empty())
    throw ValidationError("compare requires --groups for the coarse-grained strategy");
  const std::vector<KernelGroup> groups = load_groups(m.groups_path);
  const Strategy all[] = {Strategy::CpuMaxVf, Strategy::StaticAccelMaxVf,
                          Strategy::StaticAccelAppDvfs, Strategy::CoarseAppDvfs,
                          Strategy::Medea};
  std::vector<std::string> rows;
  for (double deadline_ms : m.deadlines_ms) {
    const Problem p = load_problem(m, deadline_ms);
    for (Strategy s : all) {
      std::string row = fmt(deadline_ms) + "," + to_string(s) + ",";
      try {
        const auto [schedule, rep] = run_strategy(p, s, &groups);
        const EnergyReportMs ms = to_ms(rep);
        row += fmt(ms.active_time_ms) + "," + fmt(ms.active_energy_uj) + "," +
               fmt(ms.sleep_energy_uj) + "," + fmt(ms.total_energy_uj) + ",1";
      } catch (const InfeasibleDeadline&) {
        row += ",,,,0";
      } catch (const NoValidConfiguration&) {
        row += ",,,,0";
      }
      rows.push_back(std::move(row));
    }
  }
  fs::create_directories(m.out_dir);
  write_csv(fs::path(m.out_dir) / "compare.csv",
            "deadline_ms,strategy,active_time_ms,active_energy_uj,sleep_energy_uj,"
            "total_energy_uj,feasible",
            rows);
  return 0;
}

int do_ablate(const Manifest& m) {
  check_deadlines(m.deadlines_ms);
  if (m.groups_path.empty())
    throw ValidationError("ablate requires --groups for the no_kernel_sched ablation");
  const std::vector<KernelGroup> groups = load_groups(m.groups_path);
  const Ablation all[] = {Ablation::NoKernelDvfs, Ablation::NoAdaptiveTiling,
                          Ablation::NoKernelSched};
  std::vector<std::string> rows;
  for (double deadline_ms : m.deadlines_ms) {
    const Problem p = load_problem(m, deadline_ms);
    bool full_ok = false;
    double full_total_uj = 0.0;
    {
      std::string row = fmt(deadline_ms) + ",full,";
      try {
        const auto [schedule, rep] = run_ablation(p, Ablation::None, &groups);
        const EnergyReportMs ms = to_ms(rep);
        full_ok = true;
        full_total_uj = ms.total_energy_uj;
        row += fmt(ms.active_time_ms) + "," + fmt(ms.active_energy_uj) + "," +
               fmt(ms.sleep_energy_uj) + "," + fmt(ms.total_energy_uj) + ",0,1";
      } catch (const InfeasibleDeadline&) {
        row += ",,,,,0";
      }
      rows.push_back(std::move(row));
    }
    for (Ablation a : all) {
      std::string row = fmt(deadline_ms) + "," + to_string(a) + ",";
      try {
        const auto [schedule, rep] = run_ablation(p, a, &groups);
        const EnergyReportMs ms = to_ms(rep);
        row += fmt(ms.active_time_ms) + "," + fmt(ms.active_energy_uj) + "," +
               fmt(ms.sleep_energy_uj) + "," + fmt(ms.total_energy_uj) + ",";
        row += full_ok ? fmt(savings(ms.total_energy_uj, full_total_uj)) : std::string();
        row += ",1";
      } catch (const InfeasibleDeadline&) {
        row += ",,,,,0";
      }
      rows.push_back(std::move(row));
    }
  }
  fs::create_directories(m.out_dir);
  write_csv(fs::path(m.out_dir) / "ablation.csv",
            "deadline_ms,setup,active_time_ms,active_energy_uj,sleep_energy_uj,"
            "total_energy_uj,savings_pct,feasible",
            rows);
  return 0;
}

int do_validate(const Manifest& m) {
  check_deadlines(m.deadlines_ms);
  if (m.deadlines_ms.size() != 1)
    throw ValidationError("validate takes exactly one --deadline");
  if (m.schedule_path.empty()) throw ValidationError("validate requires --schedule");
  const Problem p = load_problem(m, m.deadlines_ms[0]);
  const ParsedSchedule parsed = load_schedule(m.schedule_path);
  const ValidationResult result = validate(p, parsed.schedule, &parsed.report);
  fs::create_directories(m.out_dir);
  write_text_atomic(fs::path(m.out_dir) / "validation.json", emit_validation(result));
  if (!result.pass) {
    for (const Mismatch& mm : result.mismatches)
      std::cerr << "mismatch: " << mm.field
                << (mm.kernel_id >= 0 ? " (kernel " + std::to_string(mm.kernel_id) + ")" : "")
                << " expected " << mm.expected << ", got " << mm.actual << "\n";
    return 3;
  }
  std::cout << "schedule valid\n";
  return 0;
}

std::pair<int, int> parse_range(const std::string& s, const std::string& what) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw ValidationError(what + " must look like min:max");
  int lo = 0, hi = 0;
  try {
    lo = std::stoi(s.substr(0, colon));
    hi = std::stoi(s.substr(colon + 1));
  } catch (const std::exception&) {
    throw ValidationError(what + " must look like min:max");
  }
  if (lo < 1 || hi < lo) throw ValidationError(what + ": bad range");
  return {lo, hi};
}

int do_gen(const Manifest& m) {
  GenConfig cfg;
  std::tie(cfg.min_kernels, cfg.max_kernels) = parse_range(m.gen_kernels, "--gen-kernels");
  std::tie(cfg.min_accels, cfg.max_accels) = parse_range(m.gen_accels, "--gen-accels");
  std::tie(cfg.min_voltages, cfg.max_voltages) = parse_range(m.gen_voltages, "--gen-voltages");
  const Instance inst = generate_instance(m.seed, cfg);
  fs::create_directories(m.out_dir);
  write_text_atomic(fs::path(m.out_dir) / "workload.json", emit_workload(inst.workload));
  write_text_atomic(fs::path(m.out_dir) / "platform.json", emit_platform(inst.platform));
  write_text_atomic(fs::path(m.out_dir) / "profiles.json", emit_profiles(inst.profiles));
  write_text_atomic(fs::path(m.out_dir) / "groups.json", emit_groups(inst.groups));
  std::cout << "generated " << inst.workload.kernels.size() << " kernels, "
            << inst.platform.pes.size() << " PEs, " << inst.platform.vf_table.size()
            << " V-F points (seed " << m.seed << ")\n";
  return 0;
}

void add_problem_options(CLI::App* cmd, Manifest& m, bool need_profiles = true) {
  cmd->add_option("--workload", m.workload_path, "workload JSON")->required();
  cmd->add_option("--platform", m.platform_path, "platform JSON")->required();
  cmd->add_option("--profiles", m.profiles_path, "profiles JSON")->required(need_profiles);
  cmd->add_option("--deadline", m.deadlines_ms, "deadline(s) in ms, comma separated")
      ->required()
      ->delimiter(',');
  cmd->add_option("--groups", m.groups_path, "kernel groups JSON");
  cmd->add_option("--out", m.out_dir, "output directory");
  cmd->add_option("--tile-overhead-cycles", m.tile_overhead_cycles,
                  "per-tile compute overhead");
  cmd->add_option("--vf-switch-cycles", m.vf_switch_cycles,
                  "cycles charged per V-F switch (accounting only)");
  cmd->add_option("--vf-switch-energy-uj", m.vf_switch_energy_uj,
                  "energy charged per V-F switch, uJ (accounting only)");
  cmd->add_option("--dp-quantum-us", m.dp_quantum_us,
                  "use the quantized DP solver with this time grid, us");
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"design-time energy scheduler for heterogeneous platforms"};
  app.require_subcommand(1);
  Manifest m;

  CLI::App* sched = app.add_subcommand("schedule", "solve one deadline and emit the schedule");
  add_problem_options(sched, m);
  sched->add_option("--strategy", m.strategy,
                    "cpu_maxvf | static_accel_maxvf | static_accel_appdvfs | "
                    "coarse_appdvfs | medea");
  sched->add_option("--ablation", m.ablation,
                    "none | no_kernel_dvfs | no_adaptive_tiling | no_kernel_sched");

  CLI::App* compare = app.add_subcommand("compare", "run every strategy over the deadline list");
  add_problem_options(compare, m);

  CLI::App* ablate = app.add_subcommand("ablate", "feature-ablation sweep");
  add_problem_options(ablate, m);

  CLI::App* validate_cmd = app.add_subcommand("validate", "replay and check a schedule file");
  add_problem_options(validate_cmd, m);
  validate_cmd->add_option("--schedule", m.schedule_path, "schedule JSON to check")->required();

  CLI::App* gen = app.add_subcommand("gen", "write a seeded random instance");
  gen->add_option("--seed", m.seed, "generator seed")->required();
  gen->add_option("--out", m.out_dir, "output directory");
  gen->add_option("--gen-kernels", m.gen_kernels, "kernel count range min:max");
  gen->add_option("--gen-accels", m.gen_accels, "accelerator count range min:max");
  gen->add_option("--gen-voltages", m.gen_voltages, "V-F point count range min:max");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (sched->parsed()) return do_schedule(m);
    if (compare->parsed()) return do_compare(m);
    if (ablate->parsed()) return do_ablate(m);
    if (validate_cmd->parsed()) return do_validate(m);
    if (gen->parsed()) return do_gen(m);
  } catch (const InfeasibleDeadline& e) {
    std::cerr << "infeasible deadline: " << e.what() << " (fastest achievable: "
              << fmt(e.min_achievable_time * 1e3) << " ms)\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace medea::cli
