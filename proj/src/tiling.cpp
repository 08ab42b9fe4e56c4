#include "medea/tiling.hpp"

#include <algorithm>

#include "medea/errors.hpp"

namespace medea {

namespace {

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }


std::uint64_t elem_bytes(const Kernel& k) {
  return static_cast<std::uint64_t>(k.data_width) / 8;
}

/// Extent of the canonical split axis: matmul rows, conv2d output rows,
/// otherwise dim 0.
std::int64_t split_extent(const Kernel& k) {
  if (k.type.kind == KernelKind::Conv2d)
    return static_cast<std::int64_t>(ceil_div(k.size[0], k.size[6]));
  return k.size[0];
}

/// Footprint of a tile covering `rows` positions of the split axis.
Footprint footprint_at(const Kernel& k, std::int64_t rows) {
  const std::uint64_t b = elem_bytes(k);
  const auto& s = k.size;
  Footprint f;
  if (k.type.kind == KernelKind::Matmul) {
    const std::uint64_t m = rows, kk = s[1], n = s[2];
    f.bytes_in = (m * kk + kk * n) * b;  // activations plus the whole weight block
    f.bytes_out = m * n * b;
  } else if (k.type.kind == KernelKind::Conv2d) {
    const std::uint64_t h = s[0], w = s[1], cin = s[2], cout = s[3];
    const std::uint64_t kh = s[4], kw = s[5], stride = s[6];
    const std::uint64_t w_out = ceil_div(w, stride);
    const std::uint64_t h_in = std::min<std::uint64_t>(h, (rows - 1) * stride + kh);
    f.bytes_in = (h_in * w * cin + kh * kw * cin * cout) * b;
    f.bytes_out = static_cast<std::uint64_t>(rows) * w_out * cout * b;
  } else {
    std::uint64_t rest = 1;
    for (std::size_t i = 1; i < s.size(); ++i) rest *= static_cast<std::uint64_t>(s[i]);
    const std::uint64_t bytes = static_cast<std::uint64_t>(rows) * rest * b;
    f.bytes_in = k.type.kind == KernelKind::Add ? 2 * bytes : bytes;
    f.bytes_out = bytes;
  }
  return f;
}

std::vector<std::int64_t> tile_dims_at(const Kernel& k, std::int64_t rows) {
  std::vector<std::int64_t> dims = k.size;
  if (k.type.kind == KernelKind::Conv2d) {
    const std::int64_t h_in = (rows - 1) * k.size[6] + k.size[4];
    dims[0] = std::min(k.size[0], h_in);
  } else {
    dims[0] = rows;
  }
  return dims;
}

bool within_limits(const std::vector<std::int64_t>& dims,
                   const std::vector<std::int64_t>& limits) {
  if (limits.empty()) return true;
  if (limits.size() != dims.size())
    throw ValidationError("constraint limits arity does not match kernel dims");
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (dims[i] > limits[i]) return false;
  return true;
}

}  // namespace

std::string to_string(TilingMode m) {
  switch (m) {
    case TilingMode::Untiled: return "untiled";
    case TilingMode::SingleBuffer: return "single_buffer";
    case TilingMode::DoubleBuffer: return "double_buffer";
  }
  return "?";
}

TilingMode tiling_mode_from_string(const std::string& s) {
  if (s == "untiled") return TilingMode::Untiled;
  if (s == "single_buffer") return TilingMode::SingleBuffer;
  if (s == "double_buffer") return TilingMode::DoubleBuffer;
  throw ParseError("unknown tiling mode '" + s + "'");
}

Footprint operand_footprint(const Kernel& k) {
  return footprint_at(k, split_extent(k));
}

std::optional<TilePlan> plan_tiles(const Kernel& k, const PE& pe,
                                   const OpConstraint& constraint, TilingMode mode) {
  if (!constraint.supported) return std::nullopt;
  const std::uint64_t budget =
      mode == TilingMode::DoubleBuffer ? pe.lm_capacity / 2 : pe.lm_capacity;
  const std::int64_t total = split_extent(k);

  auto feasible = [&](std::uint64_t n) {
    const std::int64_t rows = static_cast<std::int64_t>(ceil_div(total, n));
    const Footprint f = footprint_at(k, rows);
    if (f.bytes_in + f.bytes_out > budget) return false;
    return within_limits(tile_dims_at(k, rows), constraint.limits);
  };

  auto make_plan = [&](std::uint64_t n) {
    const std::int64_t rows = static_cast<std::int64_t>(ceil_div(total, n));
    const Footprint f = footprint_at(k, rows);
    return TilePlan{mode, n, tile_dims_at(k, rows), f.bytes_in, f.bytes_out, budget};
  };

  if (mode == TilingMode::Untiled) {
    if (!feasible(1)) return std::nullopt;
    return make_plan(1);
  }
  const std::uint64_t n_max = static_cast<std::uint64_t>(total);
  if (!feasible(n_max)) return std::nullopt;  // even one-row tiles do not fit
  std::uint64_t lo = 1, hi = n_max;           // smallest feasible n; feasible(n) is monotone
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (feasible(mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  return make_plan(lo);
}

std::vector<Footprint> tile_footprints(const Kernel& k, const TilePlan& plan) {
  const std::int64_t total = split_extent(k);
  const std::int64_t rows = static_cast<std::int64_t>(ceil_div(total, plan.n_tiles));
  std::vector<Footprint> out;
  out.reserve(plan.n_tiles);
  for (std::uint64_t t = 0; t < plan.n_tiles; ++t) {
    const std::int64_t r =
        t + 1 < plan.n_tiles ? rows : total - rows * static_cast<std::int64_t>(plan.n_tiles - 1);
    out.push_back(footprint_at(k, r));
  }
  return out;
}

TileCycleTerms tile_cycle_terms(const Kernel& k, const PE& pe, const TilePlan& plan,
                                std::uint64_t proc_cycles_total,
                                std::uint64_t tile_overhead_cycles) {
  TileCycleTerms terms;
  const auto xfer = [&](std::uint64_t bytes) {
    return pe.dma_setup + ceil_div(bytes, pe.bus_width) * pe.cycles_per_beat;
  };
  const auto footprints = tile_footprints(k, plan);
  const std::uint64_t compute =
      plan.mode == TilingMode::Untiled
          ? proc_cycles_total
          : ceil_div(proc_cycles_total, plan.n_tiles) + tile_overhead_cycles;
  for (const Footprint& f : footprints) {
    terms.in_cycles.push_back(xfer(f.bytes_in));
    terms.out_cycles.push_back(xfer(f.bytes_out));
    terms.compute_cycles.push_back(compute);
  }
  return terms;
}

std::uint64_t single_buffer_cycles(const TileCycleTerms& t) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < t.compute_cycles.size(); ++i)
    total += t.in_cycles[i] + t.compute_cycles[i] + t.out_cycles[i];
  return total;
}

std::uint64_t double_buffer_cycles(const TileCycleTerms& t) {
  const std::size_t n = t.compute_cycles.size();
  std::uint64_t total = t.in_cycles[0];
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t next_in = i + 1 < n ? t.in_cycles[i + 1] : 0;
    const std::uint64_t prev_out = i > 0 ? t.out_cycles[i - 1] : 0;
    total += std::max(t.compute_cycles[i], next_in + prev_out);
  }
  return total + t.out_cycles[n - 1];
}

std::uint64_t estimate_cycles(const Kernel& k, const PE& pe, const TilePlan& plan,
                              std::uint64_t proc_cycles_total,
                              std::uint64_t tile_overhead_cycles) {
  const TileCycleTerms terms = tile_cycle_terms(k, pe, plan, proc_cycles_total,
                                                tile_overhead_cycles);
  switch (plan.mode) {
    case TilingMode::Untiled:
      return terms.in_cycles[0] + proc_cycles_total + terms.out_cycles[0];
    case TilingMode::SingleBuffer:
      return single_buffer_cycles(terms);
    case TilingMode::DoubleBuffer:
      return double_buffer_cycles(terms);
  }
  return 0;
}

std::optional<ModeChoice> preselect_mode(const Kernel& k, const PE& pe,
                                         const OpConstraint& constraint,
                                         std::uint64_t proc_cycles_total,
                                         std::uint64_t tile_overhead_cycles) {
  std::optional<ModeChoice> best;
  for (TilingMode mode :
       {TilingMode::Untiled, TilingMode::DoubleBuffer, TilingMode::SingleBuffer}) {
    auto plan = plan_tiles(k, pe, constraint, mode);
    if (!plan) continue;
    const std::uint64_t cycles =
        estimate_cycles(k, pe, *plan, proc_cycles_total, tile_overhead_cycles);
    if (!best || cycles < best->cycles) best = ModeChoice{mode, std::move(*plan), cycles};
  }
  return best;
}

}  // namespace medea
