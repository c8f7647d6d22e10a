#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ocilgwm/matrix.hpp"
#include "ocilgwm/rng.hpp"

namespace ocilgwm {

// Synthetic Gaussian-cluster benchmark: class means on a radius-R sphere,
// samples N(mean, sigma^2 I). Deterministic in seed.
struct SyntheticSpec {
  std::size_t num_classes = 20;
  std::size_t dim = 32;
  std::size_t classes_per_task = 4;
  double mean_radius = 5.0;
  double noise_std = 1.0;
  std::size_t train_per_class = 400;
  std::size_t test_per_class = 100;
  std::uint64_t seed = 1;

  void validate() const;
};

struct TaskData {
  std::vector<int> class_set;  // labels owned by this task (disjoint across tasks)
  Matrix train_x;
  std::vector<int> train_y;
  Matrix test_x;
  std::vector<int> test_y;
  std::size_t id_offset = 0;  // global id of this task's first training sample
};

struct TaskStream {
  std::size_t num_tasks = 0;
  std::size_t num_classes = 0;
  std::size_t dim = 0;
  std::vector<int> class_order;  // shuffle applied before the task split
  std::vector<TaskData> tasks;
  double data_std = 1.0;  // pooled std of training entries; scales augmentation

  /// Union of the class sets of tasks 0..up_to_task, sorted.
  std::vector<int> seen_classes(std::size_t up_to_task) const;
  std::size_t total_train_samples() const;
};

TaskStream generate_synthetic(const SyntheticSpec& spec);

struct StreamBatch {
  Matrix x;
  std::vector<int> y;
  std::vector<std::size_t> ids;  // global train-sample ids, for one-epoch audits
};

// Hands out each task's training data exactly once. A second request for the
// same task violates the one-epoch constraint and throws ContractError.
class OneEpochCursor {
 public:
  /// Shuffled batches covering task t exactly once; the last batch may be short.
  std::vector<StreamBatch> stream_batches(const TaskStream& stream, std::size_t task,
                                          std::size_t batch_size, Rng& rng);

 private:
  std::vector<bool> consumed_;
};

// Stochastic vector-space augmentation. The weak preset is additive noise plus
// coordinate dropout; the strong preset composes num_ops ops per sample drawn
// from {noise, dropout, scaling, sign-flip} at a magnitude-scaled strength.
struct AugmentParams {
  double noise_std = 0.0;
  double dropout_p = 0.0;
  double scale_half_range = 0.0;
  double sign_flip_p = 0.0;
  std::size_t num_ops = 0;  // 0 = fixed noise+dropout pipeline

  static AugmentParams identity() { return {}; }
  static AugmentParams weak(double data_std);
  static AugmentParams strong(double data_std, std::size_t num_ops = 3,
                              double magnitude = 15.0 / 30.0);
};

/// Applies a pipeline to a batch with an external stream; labels (kept by the
/// caller) are untouched and the shape is preserved.
Matrix augment(const AugmentParams& params, const Matrix& batch, Rng& rng);

class Augmenter {
 public:
  Augmenter(AugmentParams params, std::uint64_t seed) : params_(params), rng_(seed) {}

  const AugmentParams& params() const { return params_; }

  /// Applies the pipeline with the augmenter's own stream.
  Matrix apply(const Matrix& batch) { return augment(params_, batch, rng_); }

 private:
  AugmentParams params_;
  Rng rng_;
};

// Externally supplied datasets, fixed binary layout:
//   "OCIL" magic, version byte 1, LE u32 n/d/C, n*d float32 row-major, n u32 labels.
struct RawDataset {
  std::size_t num_classes = 0;
  Matrix features;
  std::vector<int> labels;
};

/// Parses and validates (labels < C, all features finite). Malformed input
/// throws FormatError naming the byte offset.
RawDataset load_binary_dataset(const std::string& path);

void write_binary_dataset(const std::string& path, const RawDataset& ds);

/// Builds a task stream from a raw dataset: shuffles the class order, splits
/// each class train/test by train_fraction, partitions classes into tasks.
TaskStream build_stream_from_dataset(const RawDataset& ds, std::size_t classes_per_task,
                                     double train_fraction, std::uint64_t seed);

}  // namespace ocilgwm
