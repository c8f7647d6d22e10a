#include "ocilgwm/fusion.hpp"

#include <cmath>
#include <string>

#include "ocilgwm/errors.hpp"

namespace ocilgwm {

void FusionConfig::validate() const {
  if (num_students < 2) throw ParameterError("fusion.num_students must be >= 2");
  if (!(ema_alpha > 0.0) || ema_alpha > 1.0)
    throw ParameterError("fusion.ema_alpha must be in (0, 1]");
  if (fuse_ratio < 0.0 || fuse_ratio > 1.0)
    throw ParameterError("fusion.fuse_ratio must be in [0, 1]");
  if (!fuse_every_task && fuse_batch_interval == 0)
    throw ParameterError("fusion.fuse_batch_interval must be >= 1 in batch mode");
  if (weight_mode == WeightMode::fixed) {
    if (fixed_weights.size() != num_students)
      throw ParameterError("fusion.fixed_weights length must equal num_students");
    double sum = 0.0;
    for (double w : fixed_weights) {
      if (w < 0.0) throw ParameterError("fusion.fixed_weights entries must be >= 0");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw ParameterError("fusion.fixed_weights must sum to 1");
  } else {
    if (dirichlet_concentration.size() != num_students)
      throw ParameterError("fusion.dirichlet_concentration length must equal num_students");
    for (double xi : dirichlet_concentration)
      if (!(xi > 0.0))
        throw ParameterError("fusion.dirichlet_concentration entries must be > 0");
  }
}

const ParameterSet& GlobalWorkspace::params() const {
  if (!initialized_) throw ContractError("GlobalWorkspace: read before initialization");
  return params_;
}

void GlobalWorkspace::set(ParameterSet p) {
  params_ = std::move(p);
  initialized_ = true;
}

std::vector<double> sample_weights(const FusionConfig& cfg, Rng& rng) {
  if (cfg.weight_mode == WeightMode::fixed) return cfg.fixed_weights;
  std::vector<double> r(cfg.num_students);
  double sum = 0.0;
  for (std::size_t m = 0; m < r.size(); ++m) {
    r[m] = rng.gamma(cfg.dirichlet_concentration[m]);
    sum += r[m];
  }
  for (double& w : r) w /= sum;
  return r;
}

ParameterSet combine(const std::vector<const ParameterSet*>& students,
                     const std::vector<double>& r) {
  if (students.empty()) throw ParameterError("combine: no students");
  if (students.size() != r.size())
    throw DimensionError("combine: " + std::to_string(students.size()) + " students vs " +
                         std::to_string(r.size()) + " weights");
  for (const ParameterSet* s : students) require_compatible(*students[0], *s, "combine");
  ParameterSet out = students[0]->zeros_like();
  for (std::size_t t = 0; t < out.tensor_count(); ++t) {
    auto& dst = out.tensor(t).values();
    for (std::size_t m = 0; m < students.size(); ++m) {
      const auto& src = students[m]->tensor(t).values();
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += r[m] * src[i];
    }
  }
  return out;
}

void ema_update(GlobalWorkspace& gwm, const ParameterSet& combined, double alpha) {
  if (!gwm.initialized_) {
    gwm.set(combined);
    return;
  }
  require_compatible(gwm.params_, combined, "ema_update");
  for (std::size_t t = 0; t < gwm.params_.tensor_count(); ++t) {
    auto& dst = gwm.params_.tensor(t).values();
    const auto& src = combined.tensor(t).values();
    for (std::size_t i = 0; i < dst.size(); ++i)
      dst[i] = (1.0 - alpha) * dst[i] + alpha * src[i];
  }
}

ParameterSet fuse_back(const ParameterSet& student, const ParameterSet& gwm, double gamma) {
  require_compatible(student, gwm, "fuse_back");
  ParameterSet out = student;
  for (std::size_t t = 0; t < out.tensor_count(); ++t) {
    auto& dst = out.tensor(t).values();
    const auto& g = gwm.tensor(t).values();
    for (std::size_t i = 0; i < dst.size(); ++i)
      dst[i] = (1.0 - gamma) * dst[i] + gamma * g[i];
  }
  return out;
}

bool should_fuse(std::size_t batch_index, bool batches_in_task_done, const FusionConfig& cfg) {
  if (cfg.fuse_every_task) return batches_in_task_done;
  return (batch_index + 1) % cfg.fuse_batch_interval == 0;
}

double parameter_cosine(const ParameterSet& a, const ParameterSet& b) {
  require_compatible(a, b, "parameter_cosine");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t t = 0; t < a.tensor_count(); ++t) {
    const auto& va = a.tensor(t).values();
    const auto& vb = b.tensor(t).values();
    for (std::size_t i = 0; i < va.size(); ++i) {
      dot += va[i] * vb[i];
      na += va[i] * va[i];
      nb += vb[i] * vb[i];
    }
  }
  if (na == 0.0 || nb == 0.0)
    throw DataError("parameter_cosine: undefined for zero parameter vectors");
  const double cs = dot / std::sqrt(na * nb);
  return std::min(1.0, std::max(-1.0, cs));
}

}  // namespace ocilgwm
