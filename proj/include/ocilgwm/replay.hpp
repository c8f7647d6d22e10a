#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ocilgwm/matrix.hpp"
#include "ocilgwm/rng.hpp"

namespace ocilgwm {

struct MemorySlot {
  std::vector<double> sample;
  int label = 0;
  int task_of_origin = 0;
};

struct LabeledBatch {
  Matrix x;
  std::vector<int> y;
};

// Fixed-capacity reservoir of labeled samples. The RNG substreams live with
// the caller so that reservoir and retrieval draws stay independent.
class MemoryBuffer {
 public:
  explicit MemoryBuffer(std::size_t capacity = 0) : capacity_(capacity) {}

  std::size_t capacity() const { return capacity_; }
  std::size_t occupied() const { return slots_.size(); }
  /// Total number of stream samples observed so far (n in the reservoir rule).
  std::size_t observed() const { return observed_; }
  const MemorySlot& slot(std::size_t i) const { return slots_[i]; }

  /// Classic reservoir update, one decision per incoming sample: running index
  /// k < capacity inserts at slot k, otherwise j ~ U[0, k] replaces slot j when
  /// j < capacity. Advances n by the batch size.
  void reservoir_update(const Matrix& batch, const std::vector<int>& labels, int task, Rng& rng);

  /// Uniform sample without replacement from the occupied slots; returns all
  /// occupied slots when fewer than batch_size are stored (possibly none).
  LabeledBatch random_retrieve(std::size_t batch_size, Rng& rng) const;

 private:
  std::size_t capacity_;
  std::size_t observed_ = 0;
  std::vector<MemorySlot> slots_;
};

/// Debug snapshot: one "slot,label,task_of_origin" row per occupied slot.
void write_buffer_snapshot(const MemoryBuffer& buf, const std::string& path);

}  // namespace ocilgwm
