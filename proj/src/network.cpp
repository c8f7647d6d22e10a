#include "ocilgwm/network.hpp"

#include <cmath>
#include <limits>

#include "ocilgwm/errors.hpp"

namespace ocilgwm {

std::size_t ParameterSet::total_size() const {
  std::size_t n = 0;
  for (const auto& [name, t] : entries) n += t.size();
  return n;
}

bool ParameterSet::shape_compatible(const ParameterSet& other) const {
  if (entries.size() != other.entries.size()) return false;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].first != other.entries[i].first) return false;
    if (!entries[i].second.same_shape(other.entries[i].second)) return false;
  }
  return true;
}

std::vector<double> ParameterSet::flatten() const {
  std::vector<double> flat;
  flat.reserve(total_size());
  for (const auto& [name, t] : entries)
    flat.insert(flat.end(), t.values().begin(), t.values().end());
  return flat;
}

ParameterSet ParameterSet::unflatten(const std::vector<double>& flat) const {
  if (flat.size() != total_size())
    throw DimensionError("ParameterSet::unflatten: flat length " + std::to_string(flat.size()) +
                         " != " + std::to_string(total_size()));
  ParameterSet out = *this;
  std::size_t pos = 0;
  for (auto& [name, t] : out.entries) {
    std::copy(flat.begin() + pos, flat.begin() + pos + t.size(), t.values().begin());
    pos += t.size();
  }
  return out;
}

ParameterSet ParameterSet::zeros_like() const {
  ParameterSet out = *this;
  for (auto& [name, t] : out.entries) std::fill(t.values().begin(), t.values().end(), 0.0);
  return out;
}

void require_compatible(const ParameterSet& a, const ParameterSet& b, const char* op) {
  if (!a.shape_compatible(b))
    throw DimensionError(std::string(op) + ": parameter sets are not shape-compatible");
}

void MlpArchitecture::validate() const {
  if (input_dim < 1) throw ParameterError("arch.input_dim must be >= 1");
  for (std::size_t h : hidden_dims)
    if (h < 1) throw ParameterError("arch.hidden_dims entries must be >= 1");
  if (feature_dim < 1) throw ParameterError("arch.feature_dim must be >= 1");
  if (num_classes_total < 1) throw ParameterError("arch.num_classes_total must be >= 1");
}

AdamWState AdamWState::for_params(const ParameterSet& params, AdamWOptions opts) {
  AdamWState st;
  st.m = params.zeros_like();
  st.v = params.zeros_like();
  st.opts = opts;
  return st;
}

void adamw_step(ParameterSet& params, const ParameterSet& grads, AdamWState& state) {
  require_compatible(params, grads, "adamw_step");
  require_compatible(params, state.m, "adamw_step(moments)");
  state.step += 1;
  const auto& o = state.opts;
  const double bc1 = 1.0 - std::pow(o.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(o.beta2, static_cast<double>(state.step));
  for (std::size_t t = 0; t < params.tensor_count(); ++t) {
    auto& theta = params.tensor(t).values();
    const auto& g = grads.tensor(t).values();
    auto& m = state.m.tensor(t).values();
    auto& v = state.v.tensor(t).values();
    for (std::size_t i = 0; i < theta.size(); ++i) {
      m[i] = o.beta1 * m[i] + (1.0 - o.beta1) * g[i];
      v[i] = o.beta2 * v[i] + (1.0 - o.beta2) * g[i] * g[i];
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      theta[i] -= o.lr * (mhat / (std::sqrt(vhat) + o.eps) + o.weight_decay * theta[i]);
    }
  }
}

StudentModel::StudentModel(MlpArchitecture arch, ParameterSet params, AdamWOptions opts)
    : arch_(std::move(arch)), params_(std::move(params)) {
  optimizer_ = AdamWState::for_params(params_, opts);
}

void StudentModel::set_params(ParameterSet params) {
  require_compatible(params_, params, "StudentModel::set_params");
  params_ = std::move(params);
  ++version_;
}

void StudentModel::apply_gradients(const ParameterSet& grads) {
  adamw_step(params_, grads, optimizer_);
  ++version_;
}

namespace {

// Extractor layers are (input->h0, h0->h1, ..., h_last->feature_dim), each
// with weight and bias; the classifier has a weight only.
ParameterSet make_parameter_shapes(const MlpArchitecture& arch) {
  ParameterSet p;
  std::vector<std::size_t> dims;
  dims.push_back(arch.input_dim);
  dims.insert(dims.end(), arch.hidden_dims.begin(), arch.hidden_dims.end());
  dims.push_back(arch.feature_dim);
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const std::string prefix = "extractor." + std::to_string(l);
    p.entries.emplace_back(prefix + ".weight", Matrix(dims[l], dims[l + 1]));
    p.entries.emplace_back(prefix + ".bias", Matrix(1, dims[l + 1]));
  }
  p.entries.emplace_back("classifier.weight", Matrix(arch.feature_dim, arch.num_classes_total));
  return p;
}

}  // namespace

StudentModel init_student(const MlpArchitecture& arch, std::uint64_t seed, AdamWOptions opts) {
  arch.validate();
  ParameterSet p = make_parameter_shapes(arch);
  Rng rng(seed);
  for (auto& [name, t] : p.entries) {
    if (name == "classifier.weight") {
      for (double& v : t.values()) v = rng.uniform(-0.01, 0.01);
    } else if (name.ends_with(".weight")) {
      const double bound = std::sqrt(6.0 / static_cast<double>(t.rows()));
      for (double& v : t.values()) v = rng.uniform(-bound, bound);
    }
    // biases stay zero
  }
  return StudentModel(arch, std::move(p), opts);
}

ForwardCache mlp_forward(const MlpArchitecture& arch, const ParameterSet& params,
                         const Matrix& batch) {
  if (batch.cols() != arch.input_dim)
    throw DimensionError("forward: batch has " + std::to_string(batch.cols()) +
                         " columns, architecture expects " + std::to_string(arch.input_dim));
  const std::size_t n_layers = arch.hidden_dims.size() + 1;
  ForwardCache cache;
  cache.input = batch;
  cache.preacts.reserve(n_layers);
  cache.acts.reserve(n_layers);
  const Matrix* h = &cache.input;
  for (std::size_t l = 0; l < n_layers; ++l) {
    const Matrix& w = params.tensor(2 * l);
    const Matrix& b = params.tensor(2 * l + 1);
    Matrix z = matmul(*h, w);
    for (std::size_t r = 0; r < z.rows(); ++r)
      for (std::size_t c = 0; c < z.cols(); ++c) z(r, c) += b(0, c);
    cache.preacts.push_back(std::move(z));
    Matrix a = cache.preacts.back();
    if (l + 1 < n_layers) {  // the final feature projection stays linear
      for (double& v : a.values()) v = v > 0.0 ? v : 0.0;
    }
    cache.acts.push_back(std::move(a));
    h = &cache.acts.back();
  }
  cache.features = cache.acts.back();
  cache.logits = matmul(cache.features, params.tensor(params.tensor_count() - 1));
  return cache;
}

ForwardCache forward(const StudentModel& model, const Matrix& batch) {
  ForwardCache cache = mlp_forward(model.arch(), model.params(), batch);
  cache.params_version = model.version();
  return cache;
}

ParameterSet backward(const StudentModel& model, const ForwardCache& cache,
                      const Matrix& logit_gradient) {
  if (cache.params_version != model.version())
    throw ContractError("backward: cache is stale (parameters changed since forward)");
  if (!logit_gradient.same_shape(cache.logits))
    throw DimensionError("backward: logit_gradient shape does not match cached logits");

  const ParameterSet& params = model.params();
  ParameterSet grads = params.zeros_like();
  const std::size_t n_layers = cache.preacts.size();
  const std::size_t cls = params.tensor_count() - 1;

  // Classifier: logits = features * Wc (no bias).
  grads.tensor(cls) = matmul(transpose(cache.features), logit_gradient);

  // dz rolls backward: entering iteration l it holds the gradient of layer l's
  // output activation, after masking that of its preactivation.
  Matrix dz = matmul(logit_gradient, transpose(params.tensor(cls)));
  for (std::size_t l = n_layers; l-- > 0;) {
    if (l + 1 < n_layers) {  // ReLU layers; tie at exactly 0 gets gradient 0
      const Matrix& z = cache.preacts[l];
      for (std::size_t i = 0; i < dz.size(); ++i)
        if (!(z.values()[i] > 0.0)) dz.values()[i] = 0.0;
    }
    const Matrix& input = (l == 0) ? cache.input : cache.acts[l - 1];
    grads.tensor(2 * l) = matmul(transpose(input), dz);
    auto db = col_sums(dz);
    std::copy(db.begin(), db.end(), grads.tensor(2 * l + 1).values().begin());
    if (l > 0) dz = matmul(dz, transpose(params.tensor(2 * l)));
  }
  return grads;
}

Matrix masked_logits(const Matrix& logits, const std::vector<int>& seen_classes) {
  if (seen_classes.empty()) throw ParameterError("masked_logits: seen class set is empty");
  std::vector<bool> seen(logits.cols(), false);
  for (int c : seen_classes) {
    if (c < 0 || static_cast<std::size_t>(c) >= logits.cols())
      throw ParameterError("masked_logits: class " + std::to_string(c) + " out of range");
    seen[static_cast<std::size_t>(c)] = true;
  }
  Matrix out = logits;
  const double neg_inf = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < out.rows(); ++r)
    for (std::size_t c = 0; c < out.cols(); ++c)
      if (!seen[c]) out(r, c) = neg_inf;
  return out;
}

}  // namespace ocilgwm
