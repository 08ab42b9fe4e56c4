#pragma once

#include <string>
#include <vector>

#include "medea/optimizer.hpp"

namespace medea {

struct Mismatch {
  std::string field;
  int kernel_id = -1;  // -1 for schedule-level fields
  std::string expected;
  std::string actual;
};

struct ValidationResult {
  bool pass = true;
  std::vector<Mismatch> mismatches;
};

/// Replay a schedule against the models: re-derive every assignment's plan,
/// cycles, time, power and energy from scratch, re-total, and compare each
/// reported field exactly. Totals are recomputed here with bookkeeping
/// independent of the solver's. The optional report block is checked in the
/// emitted ms / uJ domain. Throws UnknownReference for kernels, PEs or
/// voltages not present in the problem.
ValidationResult validate(const Problem& p, const Schedule& s,
                          const EnergyReportMs* report_block = nullptr);

std::string emit_validation(const ValidationResult& r);

}  // namespace medea
