#include "ocilgwm/stream.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <set>

#include "ocilgwm/errors.hpp"

namespace ocilgwm {

void SyntheticSpec::validate() const {
  if (num_classes < 1) throw ParameterError("stream.num_classes must be >= 1");
  if (dim < 1) throw ParameterError("stream.dim must be >= 1");
  if (classes_per_task < 1 || num_classes % classes_per_task != 0)
    throw ParameterError("stream.classes_per_task must divide num_classes");
  if (!(noise_std > 0.0)) throw ParameterError("stream.noise_std must be > 0");
  if (!(mean_radius > 0.0)) throw ParameterError("stream.mean_radius must be > 0");
  if (train_per_class < 1) throw ParameterError("stream.train_per_class must be >= 1");
  if (test_per_class < 1) throw ParameterError("stream.test_per_class must be >= 1");
}

std::vector<int> TaskStream::seen_classes(std::size_t up_to_task) const {
  std::set<int> seen;
  for (std::size_t t = 0; t <= up_to_task && t < tasks.size(); ++t)
    seen.insert(tasks[t].class_set.begin(), tasks[t].class_set.end());
  return {seen.begin(), seen.end()};
}

std::size_t TaskStream::total_train_samples() const {
  std::size_t n = 0;
  for (const auto& t : tasks) n += t.train_x.rows();
  return n;
}

namespace {

struct PerClassData {
  Matrix train;
  Matrix test;
};

TaskStream assemble_stream(std::size_t num_classes, std::size_t dim,
                           std::size_t classes_per_task, std::vector<int> class_order,
                           const std::vector<PerClassData>& per_class) {
  TaskStream s;
  s.num_classes = num_classes;
  s.dim = dim;
  s.num_tasks = num_classes / classes_per_task;
  s.class_order = std::move(class_order);
  s.tasks.resize(s.num_tasks);
  std::size_t id_offset = 0;
  double sum = 0.0, sum_sq = 0.0;
  std::size_t count = 0;
  for (std::size_t t = 0; t < s.num_tasks; ++t) {
    TaskData& task = s.tasks[t];
    task.id_offset = id_offset;
    for (std::size_t k = 0; k < classes_per_task; ++k) {
      const int cls = s.class_order[t * classes_per_task + k];
      task.class_set.push_back(cls);
      const PerClassData& pc = per_class[static_cast<std::size_t>(cls)];
      task.train_x = vstack(task.train_x, pc.train);
      task.train_y.insert(task.train_y.end(), pc.train.rows(), cls);
      task.test_x = vstack(task.test_x, pc.test);
      task.test_y.insert(task.test_y.end(), pc.test.rows(), cls);
    }
    id_offset += task.train_x.rows();
    for (double v : task.train_x.values()) {
      sum += v;
      sum_sq += v * v;
      ++count;
    }
  }
  const double mean = sum / static_cast<double>(count);
  s.data_std = std::sqrt(std::max(0.0, sum_sq / static_cast<double>(count) - mean * mean));
  return s;
}

}  // namespace

TaskStream generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);

  // class means uniform on the radius-R sphere
  std::vector<std::vector<double>> means(spec.num_classes, std::vector<double>(spec.dim));
  for (auto& mu : means) {
    double norm_sq = 0.0;
    for (double& v : mu) {
      v = rng.normal();
      norm_sq += v * v;
    }
    const double scale = spec.mean_radius / std::sqrt(norm_sq);
    for (double& v : mu) v *= scale;
  }

  std::vector<int> order(spec.num_classes);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);

  std::vector<PerClassData> per_class(spec.num_classes);
  for (std::size_t c = 0; c < spec.num_classes; ++c) {
    auto draw = [&](std::size_t n) {
      Matrix m(n, spec.dim);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t j = 0; j < spec.dim; ++j)
          m(r, j) = means[c][j] + spec.noise_std * rng.normal();
      return m;
    };
    per_class[c].train = draw(spec.train_per_class);
    per_class[c].test = draw(spec.test_per_class);
  }

  return assemble_stream(spec.num_classes, spec.dim, spec.classes_per_task, std::move(order),
                         per_class);
}

std::vector<StreamBatch> OneEpochCursor::stream_batches(const TaskStream& stream,
                                                        std::size_t task,
                                                        std::size_t batch_size, Rng& rng) {
  if (task >= stream.num_tasks)
    throw ParameterError("stream_batches: task " + std::to_string(task) + " out of range");
  if (batch_size == 0) throw ParameterError("stream_batches: batch_size must be >= 1");
  if (consumed_.size() < stream.num_tasks) consumed_.resize(stream.num_tasks, false);
  if (consumed_[task])
    throw ContractError("stream_batches: task " + std::to_string(task) +
                        " was already streamed once (one-epoch constraint)");
  consumed_[task] = true;

  const TaskData& td = stream.tasks[task];
  std::vector<std::size_t> perm(td.train_x.rows());
  std::iota(perm.begin(), perm.end(), 0);
  rng.shuffle(perm);

  std::vector<StreamBatch> out;
  for (std::size_t start = 0; start < perm.size(); start += batch_size) {
    const std::size_t n = std::min(batch_size, perm.size() - start);
    StreamBatch b;
    b.x = Matrix(n, stream.dim);
    b.y.resize(n);
    b.ids.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t src = perm[start + i];
      std::copy(td.train_x.data() + src * stream.dim,
                td.train_x.data() + (src + 1) * stream.dim, b.x.data() + i * stream.dim);
      b.y[i] = td.train_y[src];
      b.ids[i] = td.id_offset + src;
    }
    out.push_back(std::move(b));
  }
  return out;
}

AugmentParams AugmentParams::weak(double data_std) {
  AugmentParams p;
  p.noise_std = 0.05 * data_std;
  p.dropout_p = 0.1;
  return p;
}

AugmentParams AugmentParams::strong(double data_std, std::size_t num_ops, double magnitude) {
  AugmentParams p;
  p.noise_std = magnitude * data_std;
  p.dropout_p = 0.2 * magnitude;
  p.scale_half_range = 0.5 * magnitude;
  p.sign_flip_p = 0.2 * magnitude;
  p.num_ops = num_ops;
  return p;
}

namespace {

enum OpId { kNoise = 0, kDropout = 1, kScale = 2, kSignFlip = 3 };

void apply_op(int op, const AugmentParams& p, double* row, std::size_t dim, Rng& rng) {
  switch (op) {
    case kNoise:
      for (std::size_t j = 0; j < dim; ++j) row[j] += p.noise_std * rng.normal();
      break;
    case kDropout:
      for (std::size_t j = 0; j < dim; ++j)
        if (rng.uniform() < p.dropout_p) row[j] = 0.0;
      break;
    case kScale: {
      const double s = rng.uniform(1.0 - p.scale_half_range, 1.0 + p.scale_half_range);
      for (std::size_t j = 0; j < dim; ++j) row[j] *= s;
      break;
    }
    case kSignFlip:
      for (std::size_t j = 0; j < dim; ++j)
        if (rng.uniform() < p.sign_flip_p) row[j] = -row[j];
      break;
  }
}

}  // namespace

Matrix augment(const AugmentParams& params, const Matrix& batch, Rng& rng) {
  Matrix out = batch;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    double* row = out.data() + r * out.cols();
    if (params.num_ops == 0) {
      apply_op(kNoise, params, row, out.cols(), rng);
      apply_op(kDropout, params, row, out.cols(), rng);
    } else {
      for (std::size_t k = 0; k < params.num_ops; ++k)
        apply_op(static_cast<int>(rng.below(4)), params, row, out.cols(), rng);
    }
  }
  return out;
}

namespace {

constexpr char kMagic[4] = {'O', 'C', 'I', 'L'};
constexpr std::uint8_t kVersion = 1;

[[noreturn]] void format_fail(const std::string& path, std::size_t offset,
                              const std::string& what) {
  throw FormatError(path + ": " + what + " (byte offset " + std::to_string(offset) + ")");
}

std::uint32_t read_u32(std::ifstream& f, const std::string& path, std::size_t& offset,
                       const char* field) {
  unsigned char b[4];
  if (!f.read(reinterpret_cast<char*>(b), 4))
    format_fail(path, offset, std::string("truncated while reading ") + field);
  offset += 4;
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

RawDataset load_binary_dataset(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError(path + ": cannot open file");
  std::size_t offset = 0;

  char magic[4];
  if (!f.read(magic, 4)) format_fail(path, offset, "truncated magic");
  if (std::memcmp(magic, kMagic, 4) != 0) format_fail(path, 0, "bad magic, expected \"OCIL\"");
  offset += 4;

  char version = 0;
  if (!f.read(&version, 1)) format_fail(path, offset, "truncated version byte");
  if (static_cast<std::uint8_t>(version) != kVersion)
    format_fail(path, offset, "unsupported version " + std::to_string(int(version)));
  offset += 1;

  const std::uint32_t n = read_u32(f, path, offset, "sample count");
  const std::uint32_t d = read_u32(f, path, offset, "dimension");
  const std::uint32_t c = read_u32(f, path, offset, "class count");
  if (d == 0 || c == 0) format_fail(path, offset, "dimension and class count must be positive");

  RawDataset ds;
  ds.num_classes = c;
  ds.features = Matrix(n, d);
  std::vector<float> row(d);
  for (std::uint32_t r = 0; r < n; ++r) {
    if (!f.read(reinterpret_cast<char*>(row.data()), 4 * static_cast<std::streamsize>(d)))
      format_fail(path, offset, "truncated feature row " + std::to_string(r));
    for (std::uint32_t j = 0; j < d; ++j) {
      if (!std::isfinite(row[j]))
        format_fail(path, offset + 4 * static_cast<std::size_t>(j),
                    "non-finite feature in record " + std::to_string(r));
      ds.features(r, j) = static_cast<double>(row[j]);
    }
    offset += 4 * static_cast<std::size_t>(d);
  }
  ds.labels.resize(n);
  for (std::uint32_t r = 0; r < n; ++r) {
    const std::uint32_t label = read_u32(f, path, offset, "label");
    if (label >= c)
      format_fail(path, offset - 4,
                  "label " + std::to_string(label) + " >= class count in record " +
                      std::to_string(r));
    ds.labels[r] = static_cast<int>(label);
  }
  return ds;
}

void write_binary_dataset(const std::string& path, const RawDataset& ds) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FormatError(path + ": cannot open file for writing");
  f.write(kMagic, 4);
  const char version = static_cast<char>(kVersion);
  f.write(&version, 1);
  auto write_u32 = [&](std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 24)};
    f.write(reinterpret_cast<char*>(b), 4);
  };
  write_u32(static_cast<std::uint32_t>(ds.features.rows()));
  write_u32(static_cast<std::uint32_t>(ds.features.cols()));
  write_u32(static_cast<std::uint32_t>(ds.num_classes));
  for (double v : ds.features.values()) {
    const float fv = static_cast<float>(v);
    f.write(reinterpret_cast<const char*>(&fv), 4);
  }
  for (int label : ds.labels) write_u32(static_cast<std::uint32_t>(label));
}

TaskStream build_stream_from_dataset(const RawDataset& ds, std::size_t classes_per_task,
                                     double train_fraction, std::uint64_t seed) {
  if (classes_per_task < 1 || ds.num_classes % classes_per_task != 0)
    throw ParameterError("build_stream_from_dataset: classes_per_task must divide class count");
  if (!(train_fraction > 0.0) || !(train_fraction < 1.0))
    throw ParameterError("build_stream_from_dataset: train_fraction must be in (0, 1)");

  Rng rng(seed);
  std::vector<int> order(ds.num_classes);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);

  std::vector<std::vector<std::size_t>> by_class(ds.num_classes);
  for (std::size_t r = 0; r < ds.labels.size(); ++r)
    by_class[static_cast<std::size_t>(ds.labels[r])].push_back(r);

  const std::size_t dim = ds.features.cols();
  std::vector<PerClassData> per_class(ds.num_classes);
  for (std::size_t c = 0; c < ds.num_classes; ++c) {
    auto& rows = by_class[c];
    if (rows.size() < 2)
      throw DataError("build_stream_from_dataset: class " + std::to_string(c) +
                      " has fewer than 2 samples");
    rng.shuffle(rows);
    const std::size_t n_train =
        std::max<std::size_t>(1, std::min(rows.size() - 1,
                                          static_cast<std::size_t>(std::llround(
                                              train_fraction * static_cast<double>(rows.size())))));
    auto gather = [&](std::size_t begin, std::size_t end) {
      Matrix m(end - begin, dim);
      for (std::size_t i = begin; i < end; ++i)
        std::copy(ds.features.data() + rows[i] * dim, ds.features.data() + (rows[i] + 1) * dim,
                  m.data() + (i - begin) * dim);
      return m;
    };
    per_class[c].train = gather(0, n_train);
    per_class[c].test = gather(n_train, rows.size());
  }

  return assemble_stream(ds.num_classes, dim, classes_per_task, std::move(order), per_class);
}

}  // namespace ocilgwm
