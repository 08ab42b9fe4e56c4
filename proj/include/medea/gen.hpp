#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "medea/baselines.hpp"
#include "medea/platform.hpp"
#include "medea/workload.hpp"

namespace medea {

/// Ranges for the seeded instance generator. Drawing is implemented on top of
/// a fixed 64-bit generator so a seed reproduces the same instance on any
/// build.
struct GenConfig {
  int min_kernels = 3, max_kernels = 8;
  int min_accels = 1, max_accels = 2;
  int min_voltages = 2, max_voltages = 4;
  std::int64_t min_dim = 8, max_dim = 96;         // matmul dims
  std::int64_t min_elems = 256, max_elems = 8192; // elementwise sizes
  double min_cycle_rate = 0.05, max_cycle_rate = 50.0;  // cycles per op, log-uniform
  double min_power_w = 2e-4, max_power_w = 3e-2;        // log-uniform
  double base_frequency_hz = 1e8;
};

struct Instance {
  Workload workload;
  PlatformSpec platform;
  Profiles profiles;
  std::vector<KernelGroup> groups;  // a contiguous partition, for group runs
};

Instance generate_instance(std::uint64_t seed, const GenConfig& cfg = {});

/// Transformer-style synthetic workload: embedding (fft + projection), then
/// per encoder block norm / multi-head attention / residual / norm /
/// feed-forward / residual, then a small classifier head.
struct TransformerConfig {
  int blocks = 4;
  std::int64_t seq_len = 64;
  std::int64_t d_model = 128;
  std::int64_t n_heads = 4;
  std::int64_t ffn_dim = 192;
  std::int64_t embed_in = 256;
  std::int64_t n_classes = 2;
  int data_width = 8;
};

Workload make_transformer_workload(const TransformerConfig& cfg);

/// Matching group fixture: embedding, per block {norm, each head, attention
/// output, residual, norm, ffn, residual}, classifier.
std::vector<KernelGroup> transformer_groups(const TransformerConfig& cfg);

}  // namespace medea
