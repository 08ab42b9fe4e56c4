#pragma once

#include <stdexcept>
#include <string>

namespace medea {

/// Base class for every error raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input (bad JSON, missing or mistyped fields).
struct ParseError : Error {
  using Error::Error;
};

/// Structurally valid input that violates a model invariant.
struct ValidationError : Error {
  using Error::Error;
};

/// Voltage not listed in the platform V-F table. No interpolation is done.
struct UnknownVoltage : Error {
  using Error::Error;
};

/// Power decoupling needs two samples at distinct frequencies.
struct DegenerateMeasurement : Error {
  using Error::Error;
};

/// No cycle or power profile entry usable for a (PE, kernel) pair.
struct MissingProfile : Error {
  using Error::Error;
};

/// A kernel cannot run on any PE under any voltage or tiling mode.
struct NoValidConfiguration : Error {
  NoValidConfiguration(int kernel_id, const std::string& what)
      : Error(what), kernel_id(kernel_id) {}
  int kernel_id;
};

/// The deadline is below the fastest achievable schedule.
struct InfeasibleDeadline : Error {
  InfeasibleDeadline(double min_achievable_time, const std::string& what)
      : Error(what), min_achievable_time(min_achievable_time) {}
  double min_achievable_time;  // seconds
};

/// A schedule references a kernel, PE or voltage absent from the problem.
struct UnknownReference : Error {
  using Error::Error;
};

}  // namespace medea
