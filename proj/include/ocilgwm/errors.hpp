#pragma once

#include <stdexcept>
#include <string>

namespace ocilgwm {

// Error taxonomy shared by all modules. Every throw site uses one of these
// so callers (CLI, bindings, tests) can map failures to exit codes uniformly.

/// Incompatible shapes (matmul operands, parameter sets, ...).
struct DimensionError : std::invalid_argument {
  explicit DimensionError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Invalid hyper-parameter or config value (tau <= 0, gamma outside [0,1], ...).
struct ParameterError : std::invalid_argument {
  explicit ParameterError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Invalid data content (label outside the observed class set, non-simplex row).
struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// API contract violation (stale forward cache, incomplete accuracy matrix,
/// second epoch over a one-epoch stream).
struct ContractError : std::logic_error {
  explicit ContractError(const std::string& msg) : std::logic_error(msg) {}
};

/// Malformed external file (binary dataset, CSV consumed by plot/aggregate).
struct FormatError : std::runtime_error {
  explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ocilgwm
