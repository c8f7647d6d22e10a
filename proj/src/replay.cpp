#include "ocilgwm/replay.hpp"

#include <fstream>
#include <numeric>

#include "ocilgwm/errors.hpp"

namespace ocilgwm {

void MemoryBuffer::reservoir_update(const Matrix& batch, const std::vector<int>& labels,
                                    int task, Rng& rng) {
  if (labels.size() != batch.rows())
    throw DimensionError("reservoir_update: label count does not match batch rows");
  for (std::size_t r = 0; r < batch.rows(); ++r) {
    MemorySlot s;
    s.sample.assign(batch.data() + r * batch.cols(), batch.data() + (r + 1) * batch.cols());
    s.label = labels[r];
    s.task_of_origin = task;
    const std::size_t k = observed_;
    if (k < capacity_) {
      slots_.push_back(std::move(s));
    } else {
      const std::size_t j = static_cast<std::size_t>(rng.below(k + 1));
      if (j < capacity_) slots_[j] = std::move(s);
    }
    ++observed_;
  }
}

LabeledBatch MemoryBuffer::random_retrieve(std::size_t batch_size, Rng& rng) const {
  LabeledBatch out;
  const std::size_t take = std::min(batch_size, slots_.size());
  if (take == 0) return out;
  std::vector<std::size_t> idx(slots_.size());
  std::iota(idx.begin(), idx.end(), 0);
  // partial Fisher-Yates: the first `take` entries are a uniform sample
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(idx.size() - i));
    std::swap(idx[i], idx[j]);
  }
  const std::size_t dim = slots_[0].sample.size();
  out.x = Matrix(take, dim);
  out.y.resize(take);
  for (std::size_t i = 0; i < take; ++i) {
    const MemorySlot& s = slots_[idx[i]];
    std::copy(s.sample.begin(), s.sample.end(), out.x.data() + i * dim);
    out.y[i] = s.label;
  }
  return out;
}

void write_buffer_snapshot(const MemoryBuffer& buf, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw FormatError("cannot open " + path + " for writing");
  f << "slot,label,task_of_origin\n";
  for (std::size_t i = 0; i < buf.occupied(); ++i) {
    const MemorySlot& s = buf.slot(i);
    f << i << ',' << s.label << ',' << s.task_of_origin << '\n';
  }
}

}  // namespace ocilgwm
