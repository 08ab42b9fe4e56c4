#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "medea/baselines.hpp"
#include "medea/errors.hpp"
#include "medea/gen.hpp"
#include "medea/optimizer.hpp"
#include "medea/validator.hpp"

namespace py = pybind11;
using namespace medea;

namespace {

Problem make_problem(const std::string& workload_path, const std::string& platform_path,
                     const std::string& profiles_path, double deadline_s) {
  Problem p;
  p.workload = load_workload(workload_path);
  p.platform = load_platform(platform_path);
  p.profiles = load_profiles(profiles_path);
  validate_profiles(p.profiles, p.platform);
  p.deadline = deadline_s;
  return p;
}

}  // namespace

PYBIND11_MODULE(medea_py, m) {
  m.doc() = "deadline-constrained energy scheduler for heterogeneous platforms";

  py::register_exception<InfeasibleDeadline>(m, "InfeasibleDeadlineError");
  py::register_exception<NoValidConfiguration>(m, "NoValidConfigurationError");
  py::register_exception<UnknownVoltage>(m, "UnknownVoltageError");

  py::class_<Kernel>(m, "Kernel")
      .def_readonly("id", &Kernel::id)
      .def_property_readonly("kind", [](const Kernel& k) { return to_string(k.type); })
      .def_readonly("size", &Kernel::size)
      .def_readonly("data_width", &Kernel::data_width);

  py::class_<Workload>(m, "Workload")
      .def_readonly("name", &Workload::name)
      .def_readonly("kernels", &Workload::kernels);

  py::class_<VfPoint>(m, "VfPoint")
      .def_readonly("voltage", &VfPoint::voltage)
      .def_readonly("frequency", &VfPoint::frequency);

  py::class_<PE>(m, "PE")
      .def_readonly("id", &PE::id)
      .def_readonly("lm_capacity", &PE::lm_capacity)
      .def_readonly("bus_width", &PE::bus_width);

  py::class_<PlatformSpec>(m, "PlatformSpec")
      .def_readonly("name", &PlatformSpec::name)
      .def_readonly("pes", &PlatformSpec::pes)
      .def_readonly("vf_table", &PlatformSpec::vf_table)
      .def_readonly("shared_capacity", &PlatformSpec::shared_capacity)
      .def_readonly("sleep_power", &PlatformSpec::sleep_power);

  py::class_<Profiles>(m, "Profiles");

  py::class_<Problem>(m, "Problem")
      .def_readonly("workload", &Problem::workload)
      .def_readonly("platform", &Problem::platform)
      .def_readwrite("deadline", &Problem::deadline);

  py::class_<Configuration>(m, "Configuration")
      .def_readonly("pe", &Configuration::pe)
      .def_readonly("voltage", &Configuration::voltage)
      .def_readonly("frequency", &Configuration::frequency)
      .def_property_readonly("mode", [](const Configuration& c) { return to_string(c.mode); })
      .def_property_readonly("n_tiles", [](const Configuration& c) { return c.plan.n_tiles; })
      .def_readonly("cycles", &Configuration::cycles)
      .def_readonly("time", &Configuration::time)
      .def_readonly("power", &Configuration::power)
      .def_readonly("energy", &Configuration::energy);

  py::class_<KernelAssignment>(m, "KernelAssignment")
      .def_readonly("kernel_id", &KernelAssignment::kernel_id)
      .def_readonly("config", &KernelAssignment::config);

  py::class_<Schedule>(m, "Schedule")
      .def_readonly("assignments", &Schedule::assignments)
      .def_readonly("total_active_time", &Schedule::total_active_time)
      .def_readonly("total_active_energy", &Schedule::total_active_energy);

  py::class_<EnergyReport>(m, "EnergyReport")
      .def_readonly("deadline", &EnergyReport::deadline)
      .def_readonly("active_time", &EnergyReport::active_time)
      .def_readonly("sleep_time", &EnergyReport::sleep_time)
      .def_readonly("active_energy", &EnergyReport::active_energy)
      .def_readonly("sleep_energy", &EnergyReport::sleep_energy)
      .def_readonly("total_energy", &EnergyReport::total_energy);

  py::class_<KernelGroup>(m, "KernelGroup")
      .def_readonly("name", &KernelGroup::name)
      .def_readonly("first_kernel", &KernelGroup::first_kernel)
      .def_readonly("last_kernel", &KernelGroup::last_kernel);

  py::class_<Mismatch>(m, "Mismatch")
      .def_readonly("field", &Mismatch::field)
      .def_readonly("kernel_id", &Mismatch::kernel_id)
      .def_readonly("expected", &Mismatch::expected)
      .def_readonly("actual", &Mismatch::actual);

  py::class_<ValidationResult>(m, "ValidationResult")
      .def_readonly("pass_", &ValidationResult::pass)
      .def_readonly("mismatches", &ValidationResult::mismatches);

  py::class_<DecoupledPower>(m, "DecoupledPower")
      .def_readonly("p_stat", &DecoupledPower::p_stat)
      .def_readonly("p_dyn_base", &DecoupledPower::p_dyn_base)
      .def_readonly("clamped", &DecoupledPower::clamped);

  m.def("load_workload", &load_workload, py::arg("path"));
  m.def("load_platform", &load_platform, py::arg("path"));
  m.def("load_profiles", &load_profiles, py::arg("path"));
  m.def("load_groups", &load_groups, py::arg("path"));
  m.def("load_problem", &make_problem, py::arg("workload"), py::arg("platform"),
        py::arg("profiles"), py::arg("deadline_s"));
  m.def("max_frequency", &max_frequency, py::arg("platform"), py::arg("voltage"));
  m.def(
      "decouple_power",
      [](double f1, double p1, double f2, double p2, double f_base) {
        return decouple_power({f1, p1}, {f2, p2}, f_base);
      },
      py::arg("f1"), py::arg("p1"), py::arg("f2"), py::arg("p2"), py::arg("f_base"));
  m.def(
      "expand_attention_block",
      [](std::int64_t seq_len, std::int64_t d_model, std::int64_t n_heads, int data_width) {
        return expand_attention_block({seq_len, d_model, n_heads}, data_width);
      },
      py::arg("seq_len"), py::arg("d_model"), py::arg("n_heads"), py::arg("data_width") = 8);
  m.def("solve", &solve, py::arg("problem"));
  m.def("solve_dp", &solve_dp, py::arg("problem"), py::arg("quantum_seconds"));
  m.def("min_time", &min_time, py::arg("problem"));
  m.def("report", &report, py::arg("problem"), py::arg("schedule"));
  m.def(
      "run_strategy",
      [](const Problem& p, const std::string& s, const std::vector<KernelGroup>* groups) {
        return run_strategy(p, strategy_from_string(s), groups);
      },
      py::arg("problem"), py::arg("strategy"), py::arg("groups") = nullptr);
  m.def(
      "run_ablation",
      [](const Problem& p, const std::string& a, const std::vector<KernelGroup>* groups) {
        return run_ablation(p, ablation_from_string(a), groups);
      },
      py::arg("problem"), py::arg("ablation"), py::arg("groups") = nullptr);
  m.def("savings", &savings, py::arg("e_without"), py::arg("e_full"));
  m.def(
      "validate",
      [](const Problem& p, const Schedule& s) { return validate(p, s, nullptr); },
      py::arg("problem"), py::arg("schedule"));
}
