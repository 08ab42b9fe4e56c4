#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "medea/platform.hpp"
#include "medea/workload.hpp"

namespace medea {

enum class TilingMode { Untiled, SingleBuffer, DoubleBuffer };

std::string to_string(TilingMode m);
TilingMode tiling_mode_from_string(const std::string& s);

struct Footprint {
  std::uint64_t bytes_in = 0;
  std::uint64_t bytes_out = 0;
};

/// Local-memory footprint of the whole kernel: inputs (including any weight
/// operand) and outputs. matmul [M,K,N] reads M*K + K*N and writes M*N
/// elements; add reads two operands; conv2d uses same-padded output
/// ceil(H/stride) x ceil(W/stride) x C_out plus the K_h*K_w*C_in*C_out
/// weights; the remaining kinds are elementwise. Custom kinds use the
/// elementwise model.
Footprint operand_footprint(const Kernel& k);

/// How a kernel is split along its canonical outermost dimension
/// (matmul: M, conv2d: output rows, elementwise: dim 0) to fit a byte budget
/// and the per-dimension limits.
struct TilePlan {
  TilingMode mode = TilingMode::Untiled;
  std::uint64_t n_tiles = 1;
  std::vector<std::int64_t> tile_dims;  // dims of the largest tile
  std::uint64_t tile_bytes_in = 0;      // largest tile
  std::uint64_t tile_bytes_out = 0;
  std::uint64_t budget = 0;  // lm_capacity, halved for double buffering
};

/// Smallest tile count whose largest tile fits the mode's budget and the
/// constraint limits. Untiled requires the whole kernel to fit. Returns
/// nullopt when even a one-row tile does not fit (untileable), which removes
/// this (kernel, PE) pairing from the configuration space.
std::optional<TilePlan> plan_tiles(const Kernel& k, const PE& pe,
                                   const OpConstraint& constraint, TilingMode mode);

/// Byte footprint of every tile of the plan's split, in execution order.
/// Tiles 1..n-1 carry ceil(split/n) rows, the last tile the remainder.
std::vector<Footprint> tile_footprints(const Kernel& k, const TilePlan& plan);

/// Per-tile DMA and compute cycle terms. A transfer of b bytes costs
/// dma_setup + ceil(b / bus_width) * cycles_per_beat. Tiled modes spend
/// ceil(proc_total / n_tiles) + tile_overhead compute cycles per tile.
struct TileCycleTerms {
  std::vector<std::uint64_t> in_cycles;
  std::vector<std::uint64_t> out_cycles;
  std::vector<std::uint64_t> compute_cycles;
};

TileCycleTerms tile_cycle_terms(const Kernel& k, const PE& pe, const TilePlan& plan,
                                std::uint64_t proc_cycles_total,
                                std::uint64_t tile_overhead_cycles = 0);

/// Sequential per-tile execution: sum of in + compute + out over all tiles.
std::uint64_t single_buffer_cycles(const TileCycleTerms& t);

/// Stage-pipelined execution: while tile t computes, the DMA brings in tile
/// t+1 and drains tile t-1, so each stage costs
/// max(compute_t, in_{t+1} + out_{t-1}) with out-of-range terms zero, plus
/// the prologue in_1 and epilogue out_n.
std::uint64_t double_buffer_cycles(const TileCycleTerms& t);

std::uint64_t estimate_cycles(const Kernel& k, const PE& pe, const TilePlan& plan,
                              std::uint64_t proc_cycles_total,
                              std::uint64_t tile_overhead_cycles = 0);

struct ModeChoice {
  TilingMode mode = TilingMode::Untiled;
  TilePlan plan;
  std::uint64_t cycles = 0;
};

/// Evaluate every feasible mode and keep the cheapest; ties prefer
/// untiled, then double buffering. Returns nullopt when no mode fits.
std::optional<ModeChoice> preselect_mode(const Kernel& k, const PE& pe,
                                         const OpConstraint& constraint,
                                         std::uint64_t proc_cycles_total,
                                         std::uint64_t tile_overhead_cycles = 0);

}  // namespace medea
