#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace medea {

enum class KernelKind {
  Matmul,
  Conv2d,
  Norm,
  Add,
  Transpose,
  Scale,
  Softmax,
  Gelu,
  Fft,
  ClassConcat,
  Custom,
};

/// Operator type tag. Builtin kinds map 1:1 onto KernelKind; any other
/// lowercase name is carried as a custom kind.
struct KernelType {
  KernelKind kind = KernelKind::Custom;
  std::string custom_name;  // set only when kind == Custom

  bool operator==(const KernelType&) const = default;
  bool operator<(const KernelType& o) const {
    if (kind != o.kind) return kind < o.kind;
    return custom_name < o.custom_name;
  }
};

KernelType kernel_type_from_string(const std::string& s);
std::string to_string(const KernelType& t);

/// Dimension-list length required by a kind, or -1 for "one or more".
int kind_arity(const KernelType& t);

/// One DNN operator, the scheduling granule.
///
/// size semantics per kind: matmul = [M, K, N]; conv2d =
/// [H, W, C_in, C_out, K_h, K_w, stride]; fft = [n]; the elementwise kinds
/// (norm, add, transpose, scale, softmax, gelu, classconcat, custom) take any
/// non-empty shape.
struct Kernel {
  int id = 0;  // ordinal position in the workload, 1-based
  KernelType type;
  std::vector<std::int64_t> size;
  int data_width = 8;  // bits per element: 8, 16 or 32

  bool operator==(const Kernel&) const = default;
};

/// An ordered list of kernels executed strictly sequentially.
struct Workload {
  std::string name;
  std::vector<Kernel> kernels;

  bool operator==(const Workload&) const = default;
};

/// Throws ValidationError naming the offending kernel index.
void validate_workload(const Workload& w);

Workload parse_workload(const std::string& json_text);
Workload load_workload(const std::string& path);
std::string emit_workload(const Workload& w);
void write_workload(const Workload& w, const std::string& path);

struct AttentionDims {
  std::int64_t seq_len = 0;
  std::int64_t d_model = 0;
  std::int64_t n_heads = 1;
};

/// Expand one multi-head self-attention block into its kernel chain: per head
/// the Q/K/V projections, QK^T, scale, softmax and attention*V, followed by
/// the head concat and the output projection. Deterministic; ids start at 1.
std::vector<Kernel> expand_attention_block(const AttentionDims& dims, int data_width);

}  // namespace medea
