#include "doctest.h"
#include "medea/errors.hpp"
#include "medea/perfmodel.hpp"
#include "testutil.hpp"

using namespace medea;

namespace {

Kernel mk(KernelKind kind, std::vector<std::int64_t> size, int width = 8) {
  Kernel k;
  k.id = 1;
  k.type = KernelType{kind, {}};
  k.size = std::move(size);
  k.data_width = width;
  return k;
}

Profiles one_entry_profiles(const PE& pe) {
  Profiles p;
  p.cycles.push_back({pe.id, KernelType{KernelKind::Matmul, {}}, {16, 16, 16}, 8, 4096});
  return p;
}

}  // namespace

TEST_CASE("exact profile entries are returned verbatim") {
  PE pe;
  pe.id = "cpu";
  const Profiles p = one_entry_profiles(pe);
  CHECK(kernel_proc_cycles(p, mk(KernelKind::Matmul, {16, 16, 16}), pe) == 4096);
}

TEST_CASE("unprofiled sizes scale linearly in op count") {
  PE pe;
  pe.id = "cpu";
  const Profiles p = one_entry_profiles(pe);
  CHECK(kernel_proc_cycles(p, mk(KernelKind::Matmul, {32, 16, 16}), pe) == 8192);
  CHECK(kernel_proc_cycles(p, mk(KernelKind::Matmul, {8, 16, 16}), pe) == 2048);
}

TEST_CASE("extrapolation picks the reference nearest in op count") {
  PE pe;
  pe.id = "cpu";
  Profiles p;
  // Two references at 1e3 and 1e6 elements; a 2e3 query must use the first.
  p.cycles.push_back({pe.id, KernelType{KernelKind::Norm, {}}, {1000}, 8, 5000});
  p.cycles.push_back({pe.id, KernelType{KernelKind::Norm, {}}, {1000000}, 8, 3000000});
  CHECK(kernel_proc_cycles(p, mk(KernelKind::Norm, {2000}), pe) == 10000);
  // And close to the big one it must switch over.
  CHECK(kernel_proc_cycles(p, mk(KernelKind::Norm, {900000}), pe) == 2700000);
}

TEST_CASE("extrapolation falls back across data widths when needed") {
  PE pe;
  pe.id = "cpu";
  const Profiles p = one_entry_profiles(pe);  // width 8 reference only
  CHECK(kernel_proc_cycles(p, mk(KernelKind::Matmul, {16, 16, 16}, 16), pe) == 4096);
}

TEST_CASE("missing profiles raise") {
  PE pe;
  pe.id = "cpu";
  const Profiles p = one_entry_profiles(pe);
  CHECK_THROWS_AS(kernel_proc_cycles(p, mk(KernelKind::Softmax, {64}), pe), MissingProfile);
  CHECK_THROWS_AS(kernel_power(p, mk(KernelKind::Matmul, {16, 16, 16}), pe, 0.5, 1e8),
                  MissingProfile);
}

TEST_CASE("kernel power scales linearly in frequency") {
  PE pe;
  pe.id = "cpu";
  Profiles p;
  p.power.push_back({pe.id, KernelType{KernelKind::Matmul, {}}, 0.5, 1e-3, 2e-3, 100e6});
  const Kernel k = mk(KernelKind::Matmul, {16, 16, 16});
  CHECK(kernel_power(p, k, pe, 0.5, 100e6) == doctest::Approx(3e-3).epsilon(1e-12));
  CHECK(kernel_power(p, k, pe, 0.5, 200e6) == doctest::Approx(5e-3).epsilon(1e-12));
  CHECK(kernel_power(p, k, pe, 0.5, 0.0) == doctest::Approx(1e-3).epsilon(1e-12));
}

TEST_CASE("unsupported kernels produce no configuration") {
  const Problem p = testutil::tsd_problem(200.0);
  const PE& carus = *p.platform.find_pe("carus");
  const Kernel softmax = mk(KernelKind::Softmax, {64, 64});
  CHECK_FALSE(
      build_configuration(p.platform, p.profiles, softmax, carus, 0.9).has_value());
}

TEST_CASE("the cpu runs everything at any listed voltage") {
  const Problem p = testutil::tsd_problem(200.0);
  const PE& cpu = *p.platform.find_pe("cpu");
  for (const Kernel& k : p.workload.kernels) {
    const auto c = build_configuration(p.platform, p.profiles, k, cpu, 0.9);
    REQUIRE(c.has_value());
    CHECK(c->time > 0.0);
    CHECK(c->energy > 0.0);
  }
}

TEST_CASE("configuration time and energy identities hold exactly") {
  const Problem p = testutil::tsd_problem(200.0);
  for (const Kernel& k : p.workload.kernels) {
    for (const PE& pe : p.platform.pes) {
      for (const VfPoint& vf : p.platform.vf_table) {
        const auto c = build_configuration(p.platform, p.profiles, k, pe, vf.voltage);
        if (!c) continue;
        CHECK(c->frequency == max_frequency(p.platform, c->voltage));
        CHECK(c->time == config_time(c->cycles, c->frequency));
        CHECK(c->energy == config_energy(c->power, c->time));
      }
    }
  }
}

TEST_CASE("time never increases with voltage for a fixed kernel and PE") {
  const Problem p = testutil::tsd_problem(200.0);
  for (const Kernel& k : p.workload.kernels) {
    for (const PE& pe : p.platform.pes) {
      double previous = 1e300;
      for (const VfPoint& vf : p.platform.vf_table) {
        const auto c = build_configuration(p.platform, p.profiles, k, pe, vf.voltage);
        if (!c) continue;
        CHECK(c->time <= previous);
        previous = c->time;
      }
    }
  }
}

TEST_CASE("forced double buffering reports the forced mode") {
  const Problem p = testutil::tsd_problem(200.0);
  const PE& cgra = *p.platform.find_pe("cgra");
  const Kernel k = mk(KernelKind::Matmul, {64, 128, 192});
  const auto c = build_configuration(p.platform, p.profiles, k, cgra, 0.9, {},
                                     TilingMode::DoubleBuffer);
  REQUIRE(c.has_value());
  CHECK(c->mode == TilingMode::DoubleBuffer);
  const auto adaptive = build_configuration(p.platform, p.profiles, k, cgra, 0.9);
  REQUIRE(adaptive.has_value());
  CHECK(adaptive->cycles <= c->cycles);
}

TEST_CASE("per-tile overhead raises tiled cycle counts") {
  const Problem p = testutil::tsd_problem(200.0);
  const PE& cgra = *p.platform.find_pe("cgra");
  const Kernel k = mk(KernelKind::Matmul, {64, 128, 192});
  ModelParams heavy;
  heavy.tile_overhead_cycles = 1000;
  const auto plain = build_configuration(p.platform, p.profiles, k, cgra, 0.9, {},
                                         TilingMode::DoubleBuffer);
  const auto taxed = build_configuration(p.platform, p.profiles, k, cgra, 0.9, heavy,
                                         TilingMode::DoubleBuffer);
  REQUIRE(plain.has_value());
  REQUIRE(taxed.has_value());
  CHECK(taxed->cycles > plain->cycles);
}
