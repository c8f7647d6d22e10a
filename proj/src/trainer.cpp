#include "ocilgwm/trainer.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "ocilgwm/csv.hpp"
#include "ocilgwm/errors.hpp"

namespace ocilgwm {

namespace {

enum StreamId : std::uint64_t {
  kInit = 0,
  kData = 1,
  kAug1 = 2,
  kAug2 = 3,
  kDirichlet = 4,
  kReservoir = 5,
  kRetrieval = 6,
  kStreamGen = 7,
};

void add_grads(ParameterSet& dst, const ParameterSet& src) {
  for (std::size_t t = 0; t < dst.tensor_count(); ++t) dst.tensor(t) += src.tensor(t);
}

// Rethrows with the failing batch recorded, preserving the error category.
[[noreturn]] void rethrow_with_batch(std::size_t batch_global) {
  const std::string where = "batch " + std::to_string(batch_global) + ": ";
  try {
    throw;
  } catch (const DimensionError& e) {
    throw DimensionError(where + e.what());
  } catch (const ParameterError& e) {
    throw ParameterError(where + e.what());
  } catch (const DataError& e) {
    throw DataError(where + e.what());
  } catch (const ContractError& e) {
    throw ContractError(where + e.what());
  } catch (const FormatError& e) {
    throw FormatError(where + e.what());
  } catch (const std::exception& e) {
    throw std::runtime_error(where + e.what());
  }
}

}  // namespace

RngStreams RngStreams::from_seed(std::uint64_t seed) {
  return RngStreams{Rng(derive_stream_seed(seed, kInit)),
                    Rng(derive_stream_seed(seed, kData)),
                    Rng(derive_stream_seed(seed, kAug1)),
                    Rng(derive_stream_seed(seed, kAug2)),
                    Rng(derive_stream_seed(seed, kDirichlet)),
                    Rng(derive_stream_seed(seed, kReservoir)),
                    Rng(derive_stream_seed(seed, kRetrieval))};
}

std::uint64_t stream_generation_seed(std::uint64_t run_seed) {
  return derive_stream_seed(run_seed, kStreamGen);
}

std::uint64_t student_init_seed(std::uint64_t run_seed) {
  return derive_stream_seed(run_seed, kInit);
}

RunState init_run_state(const RunConfig& cfg_in) {
  cfg_in.validate();
  RunConfig cfg = cfg_in;

  TaskStream stream;
  if (cfg.stream.type == "synthetic") {
    SyntheticSpec spec = cfg.stream.synthetic;
    spec.seed = stream_generation_seed(cfg.seed);
    stream = generate_synthetic(spec);
  } else {
    stream = build_stream_from_dataset(load_binary_dataset(cfg.stream.path),
                                       cfg.stream.classes_per_task, cfg.stream.train_fraction,
                                       stream_generation_seed(cfg.seed));
  }
  if (stream.dim != cfg.arch.input_dim)
    throw ParameterError("arch.input_dim (" + std::to_string(cfg.arch.input_dim) +
                         ") must equal the stream dimension (" + std::to_string(stream.dim) + ")");
  cfg.arch.num_classes_total = stream.num_classes;

  AdamWOptions opts;
  opts.lr = cfg.lr;
  opts.weight_decay = cfg.weight_decay;

  RunState state;
  state.cfg = std::move(cfg);
  state.stream = std::move(stream);
  state.rngs = RngStreams::from_seed(state.cfg.seed);
  // Both students share one initialization draw.
  state.students.push_back(init_student(state.cfg.arch, student_init_seed(state.cfg.seed), opts));
  state.students.push_back(state.students[0]);
  // The workspace starts at the students' common init: the batch-0 combination
  // of identical students under any simplex weights.
  state.gwm.set(state.students[0].params());
  state.buffer = MemoryBuffer(state.cfg.buffer_capacity);
  state.weak_aug = AugmentParams::weak(state.stream.data_std);
  state.strong_aug = AugmentParams::strong(state.stream.data_std, state.cfg.augment.strong_num_ops,
                                           state.cfg.augment.strong_magnitude / 30.0);
  state.baseline_aug = AugmentParams::weak(state.stream.data_std);
  state.seen = state.stream.seen_classes(0);
  return state;
}

BatchDiagnostics train_batch(RunState& state, const StreamBatch& batch, bool last_in_task) {
  const RunConfig& cfg = state.cfg;
  const LossConfig& loss_cfg = cfg.loss;
  const bool views_needed = loss_cfg.enable_kd || loss_cfg.enable_gwmkd;

  BatchDiagnostics diag;
  diag.batch_global = state.batch_global;
  diag.task = state.task_index;
  diag.sample_ids = batch.ids;

  // Snapshots for the drift diagnostic (end of previous batch vs end of this one).
  std::vector<ParameterSet> prev_params;
  Matrix old_samples;
  if (cfg.record_drift) {
    prev_params = {state.students[0].params(), state.students[1].params()};
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < state.buffer.occupied(); ++i) {
      const MemorySlot& s = state.buffer.slot(i);
      if (s.task_of_origin < static_cast<int>(state.task_index)) rows.push_back(s.sample);
    }
    if (!rows.empty()) old_samples = Matrix::from_rows(rows);
  }

  // B <- B_i U B_M
  const LabeledBatch memory = state.buffer.random_retrieve(cfg.memory_batch_size, state.rngs.retrieval);
  const Matrix b = vstack(batch.x, memory.x);
  std::vector<int> labels = batch.y;
  labels.insert(labels.end(), memory.y.begin(), memory.y.end());

  // Augmented views. Student m's draws (its view, then its baseline copy of B)
  // all come from its own substream.
  Matrix view1, view2;
  if (views_needed) view1 = vstack(b, augment(state.weak_aug, b, state.rngs.aug1));
  const Matrix base1 = augment(state.baseline_aug, b, state.rngs.aug1);
  if (views_needed) view2 = vstack(b, augment(state.strong_aug, b, state.rngs.aug2));
  const Matrix base2 = augment(state.baseline_aug, b, state.rngs.aug2);

  std::vector<int> view_labels = labels;
  view_labels.insert(view_labels.end(), labels.begin(), labels.end());

  // Forward everything from pre-step parameters.
  ForwardCache view_cache[2];
  Matrix view_logits[2];
  Matrix gwm_logits[2];
  if (views_needed) {
    view_cache[0] = forward(state.students[0], view1);
    view_cache[1] = forward(state.students[1], view2);
    view_logits[0] = masked_logits(view_cache[0].logits, state.seen);
    view_logits[1] = masked_logits(view_cache[1].logits, state.seen);
    if (loss_cfg.enable_gwmkd) {
      // Workspace forward runs without gradients, on the state left by the
      // previous batch; it is masked to the same observed class set.
      gwm_logits[0] = masked_logits(
          mlp_forward(cfg.arch, state.gwm.params(), view1).logits, state.seen);
      gwm_logits[1] = masked_logits(
          mlp_forward(cfg.arch, state.gwm.params(), view2).logits, state.seen);
    }
  }
  ForwardCache base_cache[2] = {forward(state.students[0], base1),
                                forward(state.students[1], base2)};

  // Losses and gradients per student, all from pre-step parameters.
  ParameterSet grads[2];
  LossBreakdown breakdown[2];
  for (int m = 0; m < 2; ++m) {
    const CeResult base = er_baseline_loss(masked_logits(base_cache[m].logits, state.seen),
                                           labels, loss_cfg.mean_reduce);
    double ce = 0.0, kd = 0.0, gwmkd = 0.0;
    Matrix dview;
    if (views_needed) dview = Matrix(view_logits[m].rows(), view_logits[m].cols());
    if (loss_cfg.enable_kd) {
      const CeResult ce_res = ce_loss(view_logits[m], view_labels, loss_cfg.mean_reduce);
      ce = ce_res.loss;
      dview += ce_res.dlogits;
      const KdResult kd_res = kd_students(view_logits[m], view_logits[1 - m], loss_cfg.tau,
                                          loss_cfg.kd_tau_squared);
      kd = kd_res.loss;
      dview += kd_res.dstudent_logits;
    }
    if (loss_cfg.enable_gwmkd) {
      const KdResult g = kd_gwm(view_logits[m], gwm_logits[m], loss_cfg.tau,
                                loss_cfg.kd_tau_squared);
      gwmkd = g.loss;
      Matrix scaled = g.dstudent_logits;
      scaled *= loss_cfg.lambda;
      dview += scaled;
    }
    breakdown[m] = mcd_total(loss_cfg, base.loss, ce, kd, gwmkd);
    grads[m] = backward(state.students[m], base_cache[m], base.dlogits);
    if (views_needed) add_grads(grads[m], backward(state.students[m], view_cache[m], dview));
  }
  diag.student1 = breakdown[0];
  diag.student2 = breakdown[1];

  // Both optimizer steps after both losses (no ordering asymmetry between students).
  state.students[0].apply_gradients(grads[0]);
  state.students[1].apply_gradients(grads[1]);

  // Workspace: combine + EMA on the post-step students.
  const std::vector<double> r = sample_weights(cfg.fusion, state.rngs.dirichlet);
  const std::vector<const ParameterSet*> sp = {&state.students[0].params(),
                                               &state.students[1].params()};
  ema_update(state.gwm, combine(sp, r), cfg.fusion.ema_alpha);

  if (loss_cfg.enable_fuse && should_fuse(state.batch_in_task, last_in_task, cfg.fusion)) {
    for (auto& student : state.students) {
      student.set_params(fuse_back(student.params(), state.gwm.params(), cfg.fusion.fuse_ratio));
      if (cfg.fusion.reset_optimizer_on_fuse)
        student.optimizer() = AdamWState::for_params(student.params(), student.optimizer().opts);
    }
    diag.fused = true;
  }

  // Memory update sees the stream batch only, never the replayed samples.
  state.buffer.reservoir_update(batch.x, batch.y, static_cast<int>(state.task_index),
                                state.rngs.reservoir);

  diag.cos_s1_s2 = parameter_cosine(state.students[0].params(), state.students[1].params());
  diag.cos_s1_gwm = parameter_cosine(state.students[0].params(), state.gwm.params());
  diag.cos_s2_gwm = parameter_cosine(state.students[1].params(), state.gwm.params());
  if (cfg.record_drift && old_samples.rows() > 0) {
    const double d1 = feature_drift(cfg.arch, prev_params[0], state.students[0].params(), old_samples);
    const double d2 = feature_drift(cfg.arch, prev_params[1], state.students[1].params(), old_samples);
    diag.drift = 0.5 * (d1 + d2);
  }

  ++state.batch_in_task;
  ++state.batch_global;
  return diag;
}

namespace {

double mean_accuracy_over_seen(const RunState& state) {
  const auto row = evaluate_tasks(state.students[0], state.students[1], state.stream,
                                  state.task_index);
  double sum = 0.0;
  for (double a : row) sum += a;
  return sum / static_cast<double>(row.size());
}

}  // namespace

RunArtifacts train_run(const RunConfig& cfg_in, const BatchObserver& observer) {
  RunState state = init_run_state(cfg_in);
  const RunConfig& cfg = state.cfg;

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw FormatError("cannot create output directory " + cfg.out_dir + ": " + ec.message());
  {
    std::ofstream f(cfg.out_dir + "/config.json");
    if (!f) throw FormatError("cannot write " + cfg.out_dir + "/config.json");
    f << run_config_to_json(cfg).dump(2) << '\n';
  }

  std::vector<std::vector<std::string>> loss_rows;
  std::vector<std::vector<std::string>> cosine_rows;
  std::vector<std::vector<std::string>> drift_rows;
  std::vector<std::vector<std::string>> curve_rows;

  AccuracyMatrix acc(state.stream.num_tasks);
  for (std::size_t t = 0; t < state.stream.num_tasks; ++t) {
    state.task_index = t;
    state.batch_in_task = 0;
    state.seen = state.stream.seen_classes(t);
    const auto batches =
        state.cursor.stream_batches(state.stream, t, cfg.stream_batch_size, state.rngs.data);
    for (std::size_t i = 0; i < batches.size(); ++i) {
      BatchDiagnostics diag;
      try {
        diag = train_batch(state, batches[i], i + 1 == batches.size());
      } catch (...) {
        rethrow_with_batch(state.batch_global);
      }
      for (int m = 0; m < 2; ++m) {
        const LossBreakdown& b = m == 0 ? diag.student1 : diag.student2;
        loss_rows.push_back({std::to_string(diag.batch_global), std::to_string(diag.task),
                             std::to_string(m + 1), format_double(b.ce), format_double(b.kd),
                             format_double(b.gwmkd), format_double(b.baseline),
                             format_double(b.total)});
      }
      cosine_rows.push_back({std::to_string(diag.batch_global), format_double(diag.cos_s1_s2),
                             format_double(diag.cos_s1_gwm), format_double(diag.cos_s2_gwm),
                             diag.fused ? "1" : "0"});
      if (!std::isnan(diag.drift))
        drift_rows.push_back({std::to_string(diag.batch_global), format_double(diag.drift)});
      if (cfg.eval_interval_batches > 0 &&
          (diag.batch_global + 1) % cfg.eval_interval_batches == 0)
        curve_rows.push_back(
            {std::to_string(diag.batch_global), format_double(mean_accuracy_over_seen(state))});
      if (observer) observer(state, diag);
    }
    const auto row = evaluate_tasks(state.students[0], state.students[1], state.stream, t);
    for (std::size_t j = 0; j <= t; ++j) acc.set(t, j, row[j]);
  }

  RunArtifacts out;
  out.accuracy = acc;
  out.faa = faa(acc);
  out.frf = frf(acc);
  out.ala = ala(acc);
  out.out_dir = cfg.out_dir;

  std::vector<std::vector<std::string>> acc_rows;
  for (std::size_t l = 0; l < acc.num_tasks(); ++l)
    for (std::size_t j = 0; j <= l; ++j)
      acc_rows.push_back({std::to_string(l), std::to_string(j), format_double(acc.at(l, j))});
  write_csv(cfg.out_dir + "/accuracy_matrix.csv", {"l", "j", "a"}, acc_rows);
  write_csv(cfg.out_dir + "/summary.csv", {"seed", "faa", "frf", "ala"},
            {{std::to_string(cfg.seed), format_double(out.faa), format_double(out.frf),
              format_double(out.ala)}});
  write_csv(cfg.out_dir + "/losses.csv",
            {"batch", "task", "student", "ce", "kd", "gwmkd", "baseline", "total"}, loss_rows);
  write_csv(cfg.out_dir + "/cosine.csv", {"batch", "cos_s1_s2", "cos_s1_gwm", "cos_s2_gwm", "fused"},
            cosine_rows);
  write_csv(cfg.out_dir + "/drift.csv", {"batch", "drift"}, drift_rows);
  if (cfg.eval_interval_batches > 0)
    write_csv(cfg.out_dir + "/curve.csv", {"batch", "accuracy"}, curve_rows);
  write_buffer_snapshot(state.buffer, cfg.out_dir + "/buffer_final.csv");
  return out;
}

}  // namespace ocilgwm
