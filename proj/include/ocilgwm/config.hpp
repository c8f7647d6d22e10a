#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "ocilgwm/fusion.hpp"
#include "ocilgwm/losses.hpp"
#include "ocilgwm/network.hpp"
#include "ocilgwm/stream.hpp"

namespace ocilgwm {

struct StreamConfig {
  std::string type = "synthetic";  // "synthetic" | "binary"
  SyntheticSpec synthetic;         // seed is derived from the run seed at run time
  std::string path;                // binary dataset path
  std::size_t classes_per_task = 4;
  double train_fraction = 2.0 / 3.0;
};

// Strong-augmentation knobs: num_ops transforms per sample at a strength of
// magnitude / 30.
struct AugmentConfig {
  std::size_t strong_num_ops = 3;
  double strong_magnitude = 15.0;
};

struct RunConfig {
  std::uint64_t seed = 1;
  std::string out_dir = "runs/out";
  MlpArchitecture arch;  // num_classes_total is resolved from the stream
  StreamConfig stream;
  AugmentConfig augment;
  std::size_t buffer_capacity = 40;
  std::size_t stream_batch_size = 10;
  std::size_t memory_batch_size = 10;
  double lr = 1e-3;
  double weight_decay = 1e-4;
  LossConfig loss;
  FusionConfig fusion;
  std::size_t eval_interval_batches = 0;  // 0 = evaluate only at task boundaries
  bool record_drift = true;

  /// Validates every field; throws ParameterError naming the offending field.
  void validate() const;
};

/// Strict parse: unknown keys raise ParameterError. Omitted fields keep their
/// defaults, so a minimal config is valid.
RunConfig parse_run_config(const nlohmann::json& j);

RunConfig load_run_config(const std::string& path);

/// Full resolved config, suitable for persisting next to run outputs and for
/// bit-exact re-runs.
nlohmann::json run_config_to_json(const RunConfig& cfg);

/// Applies "--ablate kd,fuse,gwmkd" style toggles; "none" (or "") is a no-op.
void apply_ablation(RunConfig& cfg, const std::string& ablate_list);

}  // namespace ocilgwm
