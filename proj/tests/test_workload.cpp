#include <string>

#include "doctest.h"
#include "medea/errors.hpp"
#include "medea/gen.hpp"
#include "medea/workload.hpp"
#include "testutil.hpp"

using namespace medea;

TEST_CASE("minimal workload parses") {
  const Workload w = parse_workload(R"({
    "name": "tiny",
    "kernels": [{"kind": "matmul", "size": [16, 16, 16], "data_width": 8}]
  })");
  REQUIRE(w.kernels.size() == 1);
  CHECK(w.kernels[0].id == 1);
  CHECK(w.kernels[0].type.kind == KernelKind::Matmul);
  CHECK(w.kernels[0].size == std::vector<std::int64_t>{16, 16, 16});
}

TEST_CASE("explicit ids are renumbered to list order") {
  const Workload w = parse_workload(R"({
    "kernels": [
      {"id": 7, "kind": "add", "size": [64], "data_width": 8},
      {"id": 2, "kind": "norm", "size": [64], "data_width": 8}
    ]
  })");
  CHECK(w.kernels[0].id == 1);
  CHECK(w.kernels[1].id == 2);
  CHECK(w.kernels[0].type.kind == KernelKind::Add);
}

TEST_CASE("arity violations are rejected with the kernel index") {
  CHECK_THROWS_WITH_AS(
      parse_workload(
          R"({"kernels": [{"kind": "matmul", "size": [16, 16], "data_width": 8}]})"),
      doctest::Contains("arity"), ValidationError);
  CHECK_THROWS_AS(
      parse_workload(R"({"kernels": [{"kind": "fft", "size": [8, 8], "data_width": 8}]})"),
      ValidationError);
  CHECK_THROWS_AS(parse_workload(R"({"kernels": []})"), ValidationError);
  CHECK_THROWS_AS(
      parse_workload(R"({"kernels": [{"kind": "add", "size": [0], "data_width": 8}]})"),
      ValidationError);
  CHECK_THROWS_AS(
      parse_workload(R"({"kernels": [{"kind": "add", "size": [4], "data_width": 12}]})"),
      ValidationError);
}

TEST_CASE("custom kinds must be lowercase identifiers") {
  const Workload w = parse_workload(
      R"({"kernels": [{"kind": "myop_2", "size": [4], "data_width": 8}]})");
  CHECK(w.kernels[0].type.kind == KernelKind::Custom);
  CHECK(to_string(w.kernels[0].type) == "myop_2");
  CHECK_THROWS_AS(
      parse_workload(R"({"kernels": [{"kind": "MyOp", "size": [4], "data_width": 8}]})"),
      ValidationError);
}

TEST_CASE("malformed files raise ParseError") {
  CHECK_THROWS_AS(parse_workload("{"), ParseError);
  CHECK_THROWS_AS(parse_workload(R"({"kernels": [{"size": [4], "data_width": 8}]})"),
                  ParseError);
  CHECK_THROWS_AS(load_workload("/nonexistent/workload.json"), ParseError);
}

TEST_CASE("workload emit/load round-trips") {
  for (std::uint64_t seed : {1ull, 7ull, 42ull, 1234ull, 99999ull}) {
    const Instance inst = generate_instance(seed);
    const Workload again = parse_workload(emit_workload(inst.workload));
    CHECK(again == inst.workload);
  }
  const Workload tsd = make_transformer_workload({});
  CHECK(parse_workload(emit_workload(tsd)) == tsd);
}

TEST_CASE("attention block expansion matches the hand count") {
  // Per head: Q, K, V projections, QK^T, scale, softmax, A*V. Plus concat and
  // the output projection.
  const auto one_head = expand_attention_block({4, 8, 1}, 8);
  REQUIRE(one_head.size() == 9);
  const KernelKind expected[] = {
      KernelKind::Matmul, KernelKind::Matmul, KernelKind::Matmul, KernelKind::Matmul,
      KernelKind::Scale,  KernelKind::Softmax, KernelKind::Matmul,
      KernelKind::ClassConcat, KernelKind::Matmul};
  for (std::size_t i = 0; i < one_head.size(); ++i) {
    CHECK(one_head[i].type.kind == expected[i]);
    CHECK(one_head[i].id == static_cast<int>(i) + 1);
  }
  CHECK(one_head[0].size == std::vector<std::int64_t>{4, 8, 8});  // d_head == d_model
  CHECK(one_head[3].size == std::vector<std::int64_t>{4, 8, 4});
  CHECK(one_head[8].size == std::vector<std::int64_t>{4, 8, 8});

  const auto two_heads = expand_attention_block({4, 8, 2}, 8);
  CHECK(two_heads.size() == 2 * 7 + 2);
  CHECK(two_heads[0].size == std::vector<std::int64_t>{4, 8, 4});

  CHECK_THROWS_AS(expand_attention_block({4, 7, 2}, 8), ValidationError);
}

TEST_CASE("attention block expansion is deterministic") {
  const auto a = expand_attention_block({64, 128, 4}, 8);
  const auto b = expand_attention_block({64, 128, 4}, 8);
  CHECK(a == b);
}

TEST_CASE("bundled transformer workload fixture matches the builder") {
  const Workload built = make_transformer_workload({});
  const Workload loaded = load_workload(testutil::data_path("tsd_workload.json"));
  CHECK(built == loaded);
  // 2 embedding + 4 blocks of (1 + 4*7 + 2 + 1 + 1 + 3 + 1) + 3 classifier.
  CHECK(built.kernels.size() == 2 + 4 * 37 + 3);
}
