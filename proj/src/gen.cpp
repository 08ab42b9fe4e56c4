#include "medea/gen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "medea/errors.hpp"
#include "medea/perfmodel.hpp"

namespace medea {

namespace {

/// splitmix64; fixed here so a seed means the same instance on every build.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {  // inclusive
    return lo + static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  double uniform(double lo, double hi) {
    const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }
  bool chance(double p) { return uniform(0.0, 1.0) < p; }
};

const KernelKind kPoolKinds[] = {KernelKind::Matmul, KernelKind::Add, KernelKind::Norm,
                                 KernelKind::Scale,  KernelKind::Softmax,
                                 KernelKind::Gelu};
const KernelKind kAccelKinds[] = {KernelKind::Matmul, KernelKind::Add, KernelKind::Norm};

}  // namespace

Instance generate_instance(std::uint64_t seed, const GenConfig& cfg) {
  Rng rng(seed * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull);
  Instance inst;

  // Workload.
  const int n_kernels = static_cast<int>(rng.uniform_int(cfg.min_kernels, cfg.max_kernels));
  inst.workload.name = "gen_" + std::to_string(seed);
  for (int i = 0; i < n_kernels; ++i) {
    Kernel k;
    k.id = i + 1;
    k.type = KernelType{kPoolKinds[rng.uniform_int(0, 5)], {}};
    if (k.type.kind == KernelKind::Matmul) {
      k.size = {rng.uniform_int(cfg.min_dim, cfg.max_dim),
                rng.uniform_int(cfg.min_dim, cfg.max_dim),
                rng.uniform_int(cfg.min_dim, cfg.max_dim)};
    } else {
      k.size = {rng.uniform_int(cfg.min_elems, cfg.max_elems)};
    }
    const int widths[] = {8, 16, 32};
    k.data_width = widths[rng.uniform_int(0, 2)];
    inst.workload.kernels.push_back(std::move(k));
  }

  // Platform.
  inst.platform.name = "gen_platform_" + std::to_string(seed);
  PE cpu;
  cpu.id = "cpu";
  cpu.role = PeRole::Cpu;
  cpu.lm_capacity = 1024 * rng.uniform_int(64, 256);
  cpu.bus_width = 4;
  cpu.dma_setup = static_cast<std::uint64_t>(rng.uniform_int(8, 128));
  cpu.cycles_per_beat = static_cast<std::uint64_t>(rng.uniform_int(1, 2));
  inst.platform.pes.push_back(cpu);
  const int n_accels = static_cast<int>(rng.uniform_int(cfg.min_accels, cfg.max_accels));
  for (int a = 0; a < n_accels; ++a) {
    PE pe;
    pe.id = "accel" + std::to_string(a + 1);
    pe.role = PeRole::Accelerator;
    pe.lm_capacity = 1024 * rng.uniform_int(16, 128);
    const std::uint64_t buses[] = {4, 8, 16};
    pe.bus_width = buses[rng.uniform_int(0, 2)];
    pe.dma_setup = static_cast<std::uint64_t>(rng.uniform_int(8, 128));
    pe.cycles_per_beat = static_cast<std::uint64_t>(rng.uniform_int(1, 2));
    inst.platform.pes.push_back(pe);
  }

  const int n_voltages = static_cast<int>(rng.uniform_int(cfg.min_voltages, cfg.max_voltages));
  double voltage = 0.5;
  double frequency = cfg.base_frequency_hz * rng.uniform(0.5, 2.0);
  for (int v = 0; v < n_voltages; ++v) {
    inst.platform.vf_table.push_back({voltage, frequency});
    voltage += rng.uniform(0.1, 0.2);
    frequency *= rng.uniform(1.5, 2.2);
  }
  inst.platform.shared_capacity = 1024 * rng.uniform_int(128, 512);
  inst.platform.sleep_power = rng.log_uniform(5e-5, 5e-4);

  for (int a = 0; a < n_accels; ++a) {
    const std::string pe_id = "accel" + std::to_string(a + 1);
    bool any = false;
    for (KernelKind kind : kAccelKinds) {
      if (!rng.chance(0.75)) continue;
      any = true;
      OpConstraint c;
      c.pe = pe_id;
      c.type = KernelType{kind, {}};
      c.supported = true;
      if (kind == KernelKind::Matmul && rng.chance(0.5))
        c.limits = {rng.uniform_int(cfg.min_dim, cfg.max_dim), 4 * cfg.max_dim,
                    4 * cfg.max_dim};
      inst.platform.constraints.push_back(std::move(c));
    }
    if (!any) {
      OpConstraint c;
      c.pe = pe_id;
      c.type = KernelType{KernelKind::Matmul, {}};
      inst.platform.constraints.push_back(std::move(c));
    }
  }

  // Profiles: one reference cycle entry per (pe, kind) at a reference size,
  // power rows at every voltage. Cycle entries deliberately sit at sizes the
  // workload rarely matches so extrapolation is exercised.
  auto reference_kernel = [&](KernelKind kind) {
    Kernel ref;
    ref.type = KernelType{kind, {}};
    if (kind == KernelKind::Matmul)
      ref.size = {rng.uniform_int(cfg.min_dim, cfg.max_dim),
                  rng.uniform_int(cfg.min_dim, cfg.max_dim),
                  rng.uniform_int(cfg.min_dim, cfg.max_dim)};
    else
      ref.size = {rng.uniform_int(cfg.min_elems, cfg.max_elems)};
    return ref;
  };
  auto emit_profiles_for = [&](const std::string& pe_id, KernelKind kind, double rate_scale) {
    const Kernel ref = reference_kernel(kind);
    const double rate = rng.log_uniform(cfg.min_cycle_rate, cfg.max_cycle_rate) * rate_scale;
    CycleProfileEntry ce;
    ce.pe = pe_id;
    ce.type = ref.type;
    ce.size = ref.size;
    ce.data_width = 8;
    ce.proc_cycles = std::max<std::uint64_t>(
        1, static_cast<std::uint64_t>(std::ceil(kernel_ops(ref) * rate)));
    inst.profiles.cycles.push_back(std::move(ce));
    const double base_stat = rng.log_uniform(cfg.min_power_w, cfg.max_power_w) * 0.3;
    const double base_dyn = rng.log_uniform(cfg.min_power_w, cfg.max_power_w);
    for (const VfPoint& vf : inst.platform.vf_table) {
      PowerProfileEntry pe_entry;
      pe_entry.pe = pe_id;
      pe_entry.type = ref.type;
      pe_entry.voltage = vf.voltage;
      const double scale = (vf.voltage / 0.5) * (vf.voltage / 0.5);
      pe_entry.p_stat = base_stat * scale;
      pe_entry.p_dyn_base = base_dyn * scale;
      pe_entry.f_base = vf.frequency;
      inst.profiles.power.push_back(std::move(pe_entry));
    }
  };
  for (KernelKind kind : kPoolKinds) emit_profiles_for("cpu", kind, 4.0);
  for (const OpConstraint& c : inst.platform.constraints)
    if (c.supported) emit_profiles_for(c.pe, c.type.kind, 0.25);

  // Contiguous random partition for group-level runs.
  int start = 1;
  int group_no = 0;
  for (int id = 1; id <= n_kernels; ++id) {
    if (id == n_kernels || rng.chance(0.4)) {
      inst.groups.push_back({"g" + std::to_string(++group_no), start, id});
      start = id + 1;
    }
  }

  validate_workload(inst.workload);
  validate_platform(inst.platform);
  validate_profiles(inst.profiles, inst.platform);
  return inst;
}

Workload make_transformer_workload(const TransformerConfig& cfg) {
  Workload w;
  w.name = "tsd_like";
  int id = 0;
  auto push = [&](KernelKind kind, std::vector<std::int64_t> size) {
    w.kernels.push_back(Kernel{++id, KernelType{kind, {}}, std::move(size), cfg.data_width});
  };
  // Embedding: spectral features plus the input projection.
  push(KernelKind::Fft, {2 * cfg.embed_in});
  push(KernelKind::Matmul, {cfg.seq_len, cfg.embed_in, cfg.d_model});
  for (int b = 0; b < cfg.blocks; ++b) {
    push(KernelKind::Norm, {cfg.seq_len, cfg.d_model});
    for (Kernel k : expand_attention_block(
             {cfg.seq_len, cfg.d_model, cfg.n_heads}, cfg.data_width)) {
      k.id = ++id;
      w.kernels.push_back(std::move(k));
    }
    push(KernelKind::Add, {cfg.seq_len, cfg.d_model});
    push(KernelKind::Norm, {cfg.seq_len, cfg.d_model});
    push(KernelKind::Matmul, {cfg.seq_len, cfg.d_model, cfg.ffn_dim});
    push(KernelKind::Gelu, {cfg.seq_len, cfg.ffn_dim});
    push(KernelKind::Matmul, {cfg.seq_len, cfg.ffn_dim, cfg.d_model});
    push(KernelKind::Add, {cfg.seq_len, cfg.d_model});
  }
  // Classifier head.
  push(KernelKind::Norm, {1, cfg.d_model});
  push(KernelKind::Matmul, {1, cfg.d_model, cfg.n_classes});
  push(KernelKind::Softmax, {1, cfg.n_classes});
  validate_workload(w);
  return w;
}

std::vector<KernelGroup> transformer_groups(const TransformerConfig& cfg) {
  std::vector<KernelGroup> groups;
  int next = 1;
  auto take = [&](const std::string& name, int count) {
    groups.push_back({name, next, next + count - 1});
    next += count;
  };
  take("embedding", 2);
  for (int b = 1; b <= cfg.blocks; ++b) {
    const std::string prefix = "enc" + std::to_string(b) + "_";
    take(prefix + "norm1", 1);
    for (int h = 1; h <= cfg.n_heads; ++h)
      take(prefix + "head" + std::to_string(h), 7);
    take(prefix + "attn_out", 2);
    take(prefix + "residual1", 1);
    take(prefix + "norm2", 1);
    take(prefix + "ffn", 3);
    take(prefix + "residual2", 1);
  }
  take("classifier", 3);
  return groups;
}

}  // namespace medea
