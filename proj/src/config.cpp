#include "ocilgwm/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "ocilgwm/errors.hpp"

namespace ocilgwm {

namespace {

using nlohmann::json;

// Typed field extraction with unknown-key detection, so config typos fail
// loudly instead of silently running with defaults.
class StrictObject {
 public:
  StrictObject(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ParameterError(where_ + " must be a JSON object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    known_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ParameterError(where_ + "." + key + " has the wrong type");
    }
  }

  bool has(const char* key) {
    known_.insert(key);
    return j_.contains(key);
  }

  const json& raw(const char* key) {
    known_.insert(key);
    return j_.at(key);
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!known_.count(it.key()))
        throw ParameterError("unknown config field " + where_ + "." + it.key());
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> known_;
};

}  // namespace

void RunConfig::validate() const {
  arch.validate();
  if (stream.type == "synthetic") {
    stream.synthetic.validate();
  } else if (stream.type == "binary") {
    if (stream.path.empty()) throw ParameterError("stream.path must be set for binary streams");
    if (stream.classes_per_task < 1)
      throw ParameterError("stream.classes_per_task must be >= 1");
    if (!(stream.train_fraction > 0.0) || !(stream.train_fraction < 1.0))
      throw ParameterError("stream.train_fraction must be in (0, 1)");
  } else {
    throw ParameterError("stream.type must be \"synthetic\" or \"binary\"");
  }
  if (augment.strong_num_ops < 1) throw ParameterError("augment.strong_num_ops must be >= 1");
  if (augment.strong_magnitude < 0.0 || augment.strong_magnitude > 30.0)
    throw ParameterError("augment.strong_magnitude must be in [0, 30]");
  if (buffer_capacity < 1) throw ParameterError("buffer_capacity must be >= 1");
  if (stream_batch_size < 1) throw ParameterError("stream_batch_size must be >= 1");
  if (memory_batch_size < 1) throw ParameterError("memory_batch_size must be >= 1");
  if (!(lr > 0.0)) throw ParameterError("lr must be > 0");
  if (weight_decay < 0.0) throw ParameterError("weight_decay must be >= 0");
  loss.validate();
  fusion.validate();
  if (fusion.num_students != 2)
    throw ParameterError("fusion.num_students must be 2 (the runtime trains two students)");
  if (out_dir.empty()) throw ParameterError("out_dir must not be empty");
}

RunConfig parse_run_config(const json& j) {
  RunConfig cfg;
  StrictObject top(j, "config");
  top.get("seed", cfg.seed);
  top.get("out_dir", cfg.out_dir);

  if (top.has("arch")) {
    StrictObject arch(top.raw("arch"), "arch");
    arch.get("input_dim", cfg.arch.input_dim);
    arch.get("hidden_dims", cfg.arch.hidden_dims);
    arch.get("feature_dim", cfg.arch.feature_dim);
    arch.get("num_classes_total", cfg.arch.num_classes_total);  // resolved; accepted on re-parse
    arch.finish();
  }

  if (top.has("stream")) {
    StrictObject stream(top.raw("stream"), "stream");
    stream.get("type", cfg.stream.type);
    stream.get("path", cfg.stream.path);
    stream.get("train_fraction", cfg.stream.train_fraction);
    stream.get("num_classes", cfg.stream.synthetic.num_classes);
    stream.get("dim", cfg.stream.synthetic.dim);
    std::size_t cpt = cfg.stream.synthetic.classes_per_task;
    stream.get("classes_per_task", cpt);
    cfg.stream.synthetic.classes_per_task = cpt;
    cfg.stream.classes_per_task = cpt;
    stream.get("mean_radius", cfg.stream.synthetic.mean_radius);
    stream.get("noise_std", cfg.stream.synthetic.noise_std);
    stream.get("train_per_class", cfg.stream.synthetic.train_per_class);
    stream.get("test_per_class", cfg.stream.synthetic.test_per_class);
    stream.finish();
  }

  if (top.has("augment")) {
    StrictObject augment(top.raw("augment"), "augment");
    augment.get("strong_num_ops", cfg.augment.strong_num_ops);
    augment.get("strong_magnitude", cfg.augment.strong_magnitude);
    augment.finish();
  }

  top.get("buffer_capacity", cfg.buffer_capacity);
  top.get("stream_batch_size", cfg.stream_batch_size);
  top.get("memory_batch_size", cfg.memory_batch_size);
  top.get("lr", cfg.lr);
  top.get("weight_decay", cfg.weight_decay);

  if (top.has("loss")) {
    StrictObject loss(top.raw("loss"), "loss");
    loss.get("tau", cfg.loss.tau);
    loss.get("lambda", cfg.loss.lambda);
    loss.get("enable_kd", cfg.loss.enable_kd);
    loss.get("enable_fuse", cfg.loss.enable_fuse);
    loss.get("enable_gwmkd", cfg.loss.enable_gwmkd);
    loss.get("kd_tau_squared", cfg.loss.kd_tau_squared);
    loss.get("mean_reduce", cfg.loss.mean_reduce);
    loss.get("baseline", cfg.loss.baseline);
    loss.finish();
  }

  if (top.has("fusion")) {
    StrictObject fusion(top.raw("fusion"), "fusion");
    fusion.get("num_students", cfg.fusion.num_students);
    if (fusion.has("weight_mode")) {
      const std::string mode = top.raw("fusion").at("weight_mode").get<std::string>();
      if (mode == "fixed")
        cfg.fusion.weight_mode = WeightMode::fixed;
      else if (mode == "dirichlet")
        cfg.fusion.weight_mode = WeightMode::dirichlet;
      else
        throw ParameterError("fusion.weight_mode must be \"fixed\" or \"dirichlet\"");
    }
    fusion.get("fixed_weights", cfg.fusion.fixed_weights);
    fusion.get("dirichlet_concentration", cfg.fusion.dirichlet_concentration);
    fusion.get("ema_alpha", cfg.fusion.ema_alpha);
    fusion.get("fuse_ratio", cfg.fusion.fuse_ratio);
    if (fusion.has("fuse_interval")) {
      const json& fi = top.raw("fusion").at("fuse_interval");
      if (fi.is_string() && fi.get<std::string>() == "task") {
        cfg.fusion.fuse_every_task = true;
        cfg.fusion.fuse_batch_interval = 0;
      } else if (fi.is_number_unsigned() || fi.is_number_integer()) {
        const long long k = fi.get<long long>();
        if (k < 1) throw ParameterError("fusion.fuse_interval must be \"task\" or a count >= 1");
        cfg.fusion.fuse_every_task = false;
        cfg.fusion.fuse_batch_interval = static_cast<std::size_t>(k);
      } else {
        throw ParameterError("fusion.fuse_interval must be \"task\" or a batch count");
      }
    }
    fusion.get("reset_optimizer_on_fuse", cfg.fusion.reset_optimizer_on_fuse);
    fusion.finish();
  }

  top.get("eval_interval_batches", cfg.eval_interval_batches);
  top.get("record_drift", cfg.record_drift);
  top.finish();

  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw FormatError("cannot open config file " + path);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw FormatError("malformed JSON in " + path + ": " + e.what());
  }
  return parse_run_config(j);
}

json run_config_to_json(const RunConfig& cfg) {
  json j;
  j["seed"] = cfg.seed;
  j["out_dir"] = cfg.out_dir;
  j["arch"] = {{"input_dim", cfg.arch.input_dim},
               {"hidden_dims", cfg.arch.hidden_dims},
               {"feature_dim", cfg.arch.feature_dim},
               {"num_classes_total", cfg.arch.num_classes_total}};
  json stream;
  stream["type"] = cfg.stream.type;
  if (cfg.stream.type == "binary") {
    stream["path"] = cfg.stream.path;
    stream["train_fraction"] = cfg.stream.train_fraction;
    stream["classes_per_task"] = cfg.stream.classes_per_task;
  } else {
    stream["num_classes"] = cfg.stream.synthetic.num_classes;
    stream["dim"] = cfg.stream.synthetic.dim;
    stream["classes_per_task"] = cfg.stream.synthetic.classes_per_task;
    stream["mean_radius"] = cfg.stream.synthetic.mean_radius;
    stream["noise_std"] = cfg.stream.synthetic.noise_std;
    stream["train_per_class"] = cfg.stream.synthetic.train_per_class;
    stream["test_per_class"] = cfg.stream.synthetic.test_per_class;
  }
  j["stream"] = stream;
  j["augment"] = {{"strong_num_ops", cfg.augment.strong_num_ops},
                  {"strong_magnitude", cfg.augment.strong_magnitude}};
  j["buffer_capacity"] = cfg.buffer_capacity;
  j["stream_batch_size"] = cfg.stream_batch_size;
  j["memory_batch_size"] = cfg.memory_batch_size;
  j["lr"] = cfg.lr;
  j["weight_decay"] = cfg.weight_decay;
  j["loss"] = {{"tau", cfg.loss.tau},
               {"lambda", cfg.loss.lambda},
               {"enable_kd", cfg.loss.enable_kd},
               {"enable_fuse", cfg.loss.enable_fuse},
               {"enable_gwmkd", cfg.loss.enable_gwmkd},
               {"kd_tau_squared", cfg.loss.kd_tau_squared},
               {"mean_reduce", cfg.loss.mean_reduce},
               {"baseline", cfg.loss.baseline}};
  json fusion;
  fusion["num_students"] = cfg.fusion.num_students;
  fusion["weight_mode"] = cfg.fusion.weight_mode == WeightMode::fixed ? "fixed" : "dirichlet";
  fusion["fixed_weights"] = cfg.fusion.fixed_weights;
  fusion["dirichlet_concentration"] = cfg.fusion.dirichlet_concentration;
  fusion["ema_alpha"] = cfg.fusion.ema_alpha;
  fusion["fuse_ratio"] = cfg.fusion.fuse_ratio;
  if (cfg.fusion.fuse_every_task)
    fusion["fuse_interval"] = "task";
  else
    fusion["fuse_interval"] = cfg.fusion.fuse_batch_interval;
  fusion["reset_optimizer_on_fuse"] = cfg.fusion.reset_optimizer_on_fuse;
  j["fusion"] = fusion;
  j["eval_interval_batches"] = cfg.eval_interval_batches;
  j["record_drift"] = cfg.record_drift;
  return j;
}

void apply_ablation(RunConfig& cfg, const std::string& ablate_list) {
  std::stringstream ss(ablate_list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty() || item == "none") continue;
    if (item == "kd")
      cfg.loss.enable_kd = false;
    else if (item == "fuse")
      cfg.loss.enable_fuse = false;
    else if (item == "gwmkd")
      cfg.loss.enable_gwmkd = false;
    else
      throw ParameterError("unknown ablation \"" + item + "\" (expected kd, fuse, gwmkd, none)");
  }
}

}  // namespace ocilgwm
