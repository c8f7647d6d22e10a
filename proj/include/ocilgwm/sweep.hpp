#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ocilgwm/config.hpp"

namespace ocilgwm {

// Grid of one swept parameter x seeds. Every cell is an independent run with
// its own rng streams and output subdirectory.
struct SweepSpec {
  std::string parameter;            // lambda | gamma | delta | alpha | memory_size
  std::vector<std::string> values;  // delta additionally accepts "task"
  std::vector<std::uint64_t> seeds;
  RunConfig base;
  std::string out_dir;
  std::size_t workers = 0;  // 0: OCILGWM_WORKERS env var, else hardware concurrency
};

struct SweepCell {
  std::string value;
  std::uint64_t seed = 0;
  double faa = 0.0;
  double frf = 0.0;
  double ala = 0.0;
  std::string run_dir;
};

struct SweepResult {
  std::vector<SweepCell> cells;  // value-major, then seed
  std::string csv_path;
};

/// Returns base with the swept parameter set to the given value token.
/// Unknown parameter names throw ParameterError.
RunConfig apply_sweep_value(RunConfig base, const std::string& parameter,
                            const std::string& value);

/// Runs the full grid on a worker pool and writes sweep.csv (one row per run
/// plus one mean/std aggregate row per value) under spec.out_dir.
SweepResult run_sweep(const SweepSpec& spec);

}  // namespace ocilgwm
