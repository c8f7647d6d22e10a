#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "ocilgwm/config.hpp"
#include "ocilgwm/fusion.hpp"
#include "ocilgwm/losses.hpp"
#include "ocilgwm/metrics.hpp"
#include "ocilgwm/network.hpp"
#include "ocilgwm/replay.hpp"
#include "ocilgwm/stream.hpp"

namespace ocilgwm {

// Named RNG substreams of one run. Each consumer owns its engine, so toggling
// one consumer never perturbs another's draws.
struct RngStreams {
  Rng init{0};
  Rng data{0};
  Rng aug1{0};
  Rng aug2{0};
  Rng dirichlet{0};
  Rng reservoir{0};
  Rng retrieval{0};

  static RngStreams from_seed(std::uint64_t seed);
};

/// Seed of the stream-generation substream (class order, sample draws).
std::uint64_t stream_generation_seed(std::uint64_t run_seed);

/// Seed of the shared student initialization draw.
std::uint64_t student_init_seed(std::uint64_t run_seed);

struct RunState {
  RunConfig cfg;  // resolved (num_classes_total filled in)
  TaskStream stream;
  OneEpochCursor cursor;
  std::vector<StudentModel> students;  // exactly two, initialized identically
  GlobalWorkspace gwm;
  MemoryBuffer buffer;
  RngStreams rngs;

  AugmentParams weak_aug;      // h1
  AugmentParams strong_aug;    // h2
  AugmentParams baseline_aug;  // the replay baseline's own augmentation

  std::size_t task_index = 0;
  std::size_t batch_in_task = 0;  // i in the fuse rule; resets per task
  std::size_t batch_global = 0;
  std::vector<int> seen;  // observed classes through the current task
};

struct BatchDiagnostics {
  std::size_t batch_global = 0;
  std::size_t task = 0;
  LossBreakdown student1;
  LossBreakdown student2;
  double cos_s1_s2 = 0.0;
  double cos_s1_gwm = 0.0;
  double cos_s2_gwm = 0.0;
  bool fused = false;
  // mean over both students; NaN when no old-class samples are buffered yet
  double drift = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::size_t> sample_ids;  // stream batch B_i only
};

using BatchObserver = std::function<void(const RunState&, const BatchDiagnostics&)>;

struct RunArtifacts {
  AccuracyMatrix accuracy;
  double faa = 0.0;
  double frf = 0.0;
  double ala = 0.0;
  std::string out_dir;
};

/// Builds the full run state: stream, identically initialized students, the
/// workspace anchored at their common init, buffer and substreams.
RunState init_run_state(const RunConfig& cfg);

/// One Algorithm-1 step: retrieve -> merge -> augment -> forward (students +
/// workspace, the latter without gradients) -> losses -> both optimizer steps
/// -> combine + EMA -> conditional fuse-back -> reservoir update with the
/// stream batch only.
BatchDiagnostics train_batch(RunState& state, const StreamBatch& batch, bool last_in_task);

/// Streams every task once, evaluates after each task, writes all run CSVs
/// into cfg.out_dir and returns the final metrics.
RunArtifacts train_run(const RunConfig& cfg, const BatchObserver& observer = {});

}  // namespace ocilgwm
