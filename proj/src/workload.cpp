#include "medea/workload.hpp"

#include <array>
#include <cctype>
#include <fstream>
#include <utility>

#include "json_io.hpp"
#include "medea/errors.hpp"

namespace medea {

namespace {

constexpr std::array<std::pair<KernelKind, const char*>, 10> kBuiltinKinds = {{
    {KernelKind::Matmul, "matmul"},
    {KernelKind::Conv2d, "conv2d"},
    {KernelKind::Norm, "norm"},
    {KernelKind::Add, "add"},
    {KernelKind::Transpose, "transpose"},
    {KernelKind::Scale, "scale"},
    {KernelKind::Softmax, "softmax"},
    {KernelKind::Gelu, "gelu"},
    {KernelKind::Fft, "fft"},
    {KernelKind::ClassConcat, "classconcat"},
}};

bool valid_custom_name(const std::string& s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s.front()))) return false;
  for (char c : s) {
    if (!std::islower(static_cast<unsigned char>(c)) &&
        !std::isdigit(static_cast<unsigned char>(c)) && c != '_')
      return false;
  }
  return true;
}

}  // namespace

KernelType kernel_type_from_string(const std::string& s) {
  for (const auto& [kind, name] : kBuiltinKinds) {
    if (s == name) return KernelType{kind, {}};
  }
  if (!valid_custom_name(s))
    throw ValidationError("invalid kernel kind '" + s +
                          "': custom names must be lowercase identifiers");
  return KernelType{KernelKind::Custom, s};
}

std::string to_string(const KernelType& t) {
  if (t.kind == KernelKind::Custom) return t.custom_name;
  for (const auto& [kind, name] : kBuiltinKinds) {
    if (t.kind == kind) return name;
  }
  return "?";
}

int kind_arity(const KernelType& t) {
  switch (t.kind) {
    case KernelKind::Matmul: return 3;
    case KernelKind::Conv2d: return 7;
    case KernelKind::Fft: return 1;
    default: return -1;  // one or more dims
  }
}

void validate_workload(const Workload& w) {
  if (w.kernels.empty()) throw ValidationError("workload '" + w.name + "' is empty");
  for (std::size_t i = 0; i < w.kernels.size(); ++i) {
    const Kernel& k = w.kernels[i];
    const std::string ctx = "kernel " + std::to_string(i + 1);
    if (k.id != static_cast<int>(i) + 1)
      throw ValidationError(ctx + ": id " + std::to_string(k.id) +
                            " does not match list position");
    if (k.data_width != 8 && k.data_width != 16 && k.data_width != 32)
      throw ValidationError(ctx + ": data_width must be 8, 16 or 32");
    if (k.type.kind == KernelKind::Custom && !valid_custom_name(k.type.custom_name))
      throw ValidationError(ctx + ": invalid custom kind name");
    const int arity = kind_arity(k.type);
    if (arity > 0 && static_cast<int>(k.size.size()) != arity)
      throw ValidationError(ctx + " (" + to_string(k.type) + "): arity mismatch, expected " +
                            std::to_string(arity) + " dims, got " +
                            std::to_string(k.size.size()));
    if (arity < 0 && k.size.empty())
      throw ValidationError(ctx + " (" + to_string(k.type) + "): arity mismatch, needs >= 1 dim");
    unsigned __int128 elems = 1;
    for (std::int64_t d : k.size) {
      if (d < 1) throw ValidationError(ctx + ": dimension " + std::to_string(d) + " < 1");
      elems *= static_cast<unsigned __int128>(d);
      if (elems > (static_cast<unsigned __int128>(1) << 60))
        throw ValidationError(ctx + ": size overflow");
    }
  }
}

Workload parse_workload(const std::string& json_text) {
  using namespace detail;
  const njson j = parse_json(json_text, "workload");
  Workload w;
  if (j.contains("name")) w.name = require_string(j, "name", "workload");
  const njson& kernels = require_array(j, "kernels", "workload");
  int id = 0;
  for (const njson& jk : kernels) {
    const std::string ctx = "kernel " + std::to_string(id + 1);
    Kernel k;
    k.id = ++id;  // ids always renumbered to list order
    k.type = kernel_type_from_string(require_string(jk, "kind", ctx));
    for (const njson& d : require_array(jk, "size", ctx)) {
      if (!d.is_number_integer()) throw ParseError(ctx + ": size entries must be integers");
      k.size.push_back(d.get<std::int64_t>());
    }
    k.data_width = static_cast<int>(require_int(jk, "data_width", ctx));
    w.kernels.push_back(std::move(k));
  }
  validate_workload(w);
  return w;
}

Workload load_workload(const std::string& path) {
  return parse_workload(detail::read_file(path));
}

std::string emit_workload(const Workload& w) {
  detail::njson j;
  j["name"] = w.name;
  j["kernels"] = detail::njson::array();
  for (const Kernel& k : w.kernels) {
    detail::njson jk;
    jk["kind"] = to_string(k.type);
    jk["size"] = k.size;
    jk["data_width"] = k.data_width;
    j["kernels"].push_back(std::move(jk));
  }
  return j.dump(2) + "\n";
}

void write_workload(const Workload& w, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << emit_workload(w);
}

std::vector<Kernel> expand_attention_block(const AttentionDims& dims, int data_width) {
  if (dims.seq_len < 1 || dims.d_model < 1 || dims.n_heads < 1)
    throw ValidationError("attention dims must be positive");
  if (dims.d_model % dims.n_heads != 0)
    throw ValidationError("d_model " + std::to_string(dims.d_model) +
                          " not divisible by n_heads " + std::to_string(dims.n_heads));
  const std::int64_t s = dims.seq_len;
  const std::int64_t d = dims.d_model;
  const std::int64_t dh = d / dims.n_heads;

  std::vector<Kernel> out;
  int id = 0;
  auto push = [&](KernelKind kind, std::vector<std::int64_t> size) {
    out.push_back(Kernel{++id, KernelType{kind, {}}, std::move(size), data_width});
  };
  for (std::int64_t h = 0; h < dims.n_heads; ++h) {
    push(KernelKind::Matmul, {s, d, dh});   // Q projection
    push(KernelKind::Matmul, {s, d, dh});   // K projection
    push(KernelKind::Matmul, {s, d, dh});   // V projection
    push(KernelKind::Matmul, {s, dh, s});   // Q K^T
    push(KernelKind::Scale, {s, s});
    push(KernelKind::Softmax, {s, s});
    push(KernelKind::Matmul, {s, s, dh});   // attention * V
  }
  push(KernelKind::ClassConcat, {s, d});
  push(KernelKind::Matmul, {s, d, d});      // output projection
  return out;
}

}  // namespace medea
