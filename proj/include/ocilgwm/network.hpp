#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ocilgwm/matrix.hpp"
#include "ocilgwm/rng.hpp"

namespace ocilgwm {

// Flat, named collection of every learnable array of one model. This is the
// unit of fusion, EMA and cosine diagnostics; two sets built from the same
// architecture always have identical names, order and shapes.
struct ParameterSet {
  std::vector<std::pair<std::string, Matrix>> entries;

  std::size_t tensor_count() const { return entries.size(); }
  std::size_t total_size() const;

  Matrix& tensor(std::size_t i) { return entries[i].second; }
  const Matrix& tensor(std::size_t i) const { return entries[i].second; }
  const std::string& name(std::size_t i) const { return entries[i].first; }

  bool shape_compatible(const ParameterSet& other) const;

  std::vector<double> flatten() const;
  /// Inverse of flatten; shapes and names are taken from this set.
  ParameterSet unflatten(const std::vector<double>& flat) const;

  ParameterSet zeros_like() const;
};

/// Throws DimensionError unless both sets have identical names/order/shapes.
void require_compatible(const ParameterSet& a, const ParameterSet& b, const char* op);

struct MlpArchitecture {
  std::size_t input_dim = 32;
  std::vector<std::size_t> hidden_dims = {64, 64};
  std::size_t feature_dim = 32;
  std::size_t num_classes_total = 20;

  /// Throws ParameterError on any dimension < 1.
  void validate() const;

  bool operator==(const MlpArchitecture&) const = default;
};

struct AdamWOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 1e-4;
};

struct AdamWState {
  std::size_t step = 0;
  ParameterSet m;
  ParameterSet v;
  AdamWOptions opts;

  static AdamWState for_params(const ParameterSet& params, AdamWOptions opts);
};

/// One decoupled-weight-decay Adam update, in place:
///   m <- b1*m + (1-b1)*g,  v <- b2*v + (1-b2)*g^2, bias-corrected,
///   theta <- theta - lr*( mhat/(sqrt(vhat)+eps) + wd*theta ).
/// The decay term multiplies theta directly and is never folded into g.
void adamw_step(ParameterSet& params, const ParameterSet& grads, AdamWState& state);

struct ForwardCache {
  std::uint64_t params_version = 0;
  Matrix input;
  std::vector<Matrix> preacts;  // z per extractor layer
  std::vector<Matrix> acts;     // post-ReLU activations; last entry is the linear features
  Matrix features;
  Matrix logits;
};

class StudentModel {
 public:
  StudentModel() = default;
  StudentModel(MlpArchitecture arch, ParameterSet params, AdamWOptions opts);

  const MlpArchitecture& arch() const { return arch_; }
  const ParameterSet& params() const { return params_; }
  AdamWState& optimizer() { return optimizer_; }
  const AdamWState& optimizer() const { return optimizer_; }
  std::uint64_t version() const { return version_; }

  /// Replaces the parameters (fuse-back); invalidates outstanding caches.
  void set_params(ParameterSet params);

  /// AdamW step on the owned parameters; invalidates outstanding caches.
  void apply_gradients(const ParameterSet& grads);

 private:
  MlpArchitecture arch_;
  ParameterSet params_;
  AdamWState optimizer_;
  std::uint64_t version_ = 0;
};

/// Builds a student with Kaiming-style fan-in uniform hidden weights, zero
/// biases and a small-uniform bias-free classifier. Bit-deterministic in seed.
StudentModel init_student(const MlpArchitecture& arch, std::uint64_t seed,
                          AdamWOptions opts = {});

/// Forward pass on explicit parameters (used for the GWM and for snapshots;
/// the returned cache cannot be fed to backward()).
ForwardCache mlp_forward(const MlpArchitecture& arch, const ParameterSet& params,
                         const Matrix& batch);

/// Forward pass of a student; the cache is tagged with the parameter version
/// so a stale cache is rejected by backward().
ForwardCache forward(const StudentModel& model, const Matrix& batch);

/// Exact gradient of the scalar loss whose d(loss)/d(logits) is logit_gradient,
/// for every parameter. ReLU backward masks on preactivation > 0.
ParameterSet backward(const StudentModel& model, const ForwardCache& cache,
                      const Matrix& logit_gradient);

/// Logits of classes outside seen_classes are replaced by -inf so that
/// softmax/CE/KL marginalize over the observed class set exactly.
Matrix masked_logits(const Matrix& logits, const std::vector<int>& seen_classes);

}  // namespace ocilgwm
