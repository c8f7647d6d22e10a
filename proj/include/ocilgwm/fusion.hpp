#pragma once

#include <cstddef>
#include <vector>

#include "ocilgwm/network.hpp"
#include "ocilgwm/rng.hpp"

namespace ocilgwm {

enum class WeightMode { fixed, dirichlet };

struct FusionConfig {
  std::size_t num_students = 2;
  WeightMode weight_mode = WeightMode::fixed;
  std::vector<double> fixed_weights = {0.5, 0.5};
  std::vector<double> dirichlet_concentration = {1.0, 1.0};
  double ema_alpha = 0.01;           // EMA coefficient
  double fuse_ratio = 0.5;           // gamma; 0 disables the pull, 1 collapses students
  bool fuse_every_task = true;       // task-level interval by default
  std::size_t fuse_batch_interval = 0;  // used when fuse_every_task is false
  bool reset_optimizer_on_fuse = false;

  void validate() const;
};

// Parameter-space anchor built from the students. Never sees gradients: it is
// mutated only by combine/EMA (or an explicit set at run init).
class GlobalWorkspace {
 public:
  bool initialized() const { return initialized_; }
  const ParameterSet& params() const;
  void set(ParameterSet p);
  void reset() { initialized_ = false; }

  friend void ema_update(GlobalWorkspace& gwm, const ParameterSet& combined, double alpha);

 private:
  ParameterSet params_;
  bool initialized_ = false;
};

/// Fixed mode returns the configured weights verbatim; dirichlet mode samples
/// independent Gamma(xi_m, 1) variates and normalizes. Output is on the
/// probability simplex either way.
std::vector<double> sample_weights(const FusionConfig& cfg, Rng& rng);

/// Elementwise sum_m r_m * theta_m over every named tensor, classifier included.
ParameterSet combine(const std::vector<const ParameterSet*>& students,
                     const std::vector<double>& r);

/// theta_gwm <- (1-alpha)*theta_gwm + alpha*combined. The first call on an
/// uninitialized workspace copies the combination verbatim.
void ema_update(GlobalWorkspace& gwm, const ParameterSet& combined, double alpha);

/// theta <- (1-gamma)*theta + gamma*theta_gwm, elementwise.
ParameterSet fuse_back(const ParameterSet& student, const ParameterSet& gwm, double gamma);

/// Batch-interval mode fires when (batch_index+1) mod k == 0 (batch_index is
/// 0-based within the current task); task mode fires on the task's last batch.
bool should_fuse(std::size_t batch_index, bool batches_in_task_done, const FusionConfig& cfg);

/// Cosine of the fully flattened parameter vectors, in [-1, 1].
double parameter_cosine(const ParameterSet& a, const ParameterSet& b);

}  // namespace ocilgwm
