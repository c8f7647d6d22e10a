// Acceptance suite: every criterion prints one pass/fail line; the binary
// exits nonzero if any criterion fails. Budgeted for a laptop.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ocilgwm/csv.hpp"
#include "ocilgwm/losses.hpp"
#include "ocilgwm/metrics.hpp"
#include "ocilgwm/network.hpp"
#include "ocilgwm/replay.hpp"
#include "ocilgwm/trainer.hpp"

using namespace ocilgwm;

namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// shared helpers

RunConfig default_benchmark_config(const std::string& out_dir, std::uint64_t seed) {
  RunConfig cfg;  // default synthetic spec: C=20, d=32, 5 tasks, M_s=40
  cfg.seed = seed;
  cfg.out_dir = out_dir;
  return cfg;
}

double chi_square_p_value(double stat, double df) {
  // Wilson-Hilferty: (x/df)^(1/3) is approximately normal; ample for df ~ 1000.
  const double t = std::cbrt(stat / df);
  const double mu = 1.0 - 2.0 / (9.0 * df);
  const double sigma = std::sqrt(2.0 / (9.0 * df));
  const double z = (t - mu) / sigma;
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

double one_sided_sign_test_p(int wins, int n) {
  // P(X >= wins) under Binomial(n, 1/2)
  double p = 0.0;
  for (int k = wins; k <= n; ++k) {
    double c = 1.0;
    for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
    p += c;
  }
  return p / std::pow(2.0, n);
}

// ---------------------------------------------------------------------------
// criterion 1: gradient correctness on random instances

Outcome gradient_correctness() {
  const double rel_tol = 1e-4, abs_floor = 1e-6;
  double worst = 0.0;
  Rng meta(20240601);
  for (int inst = 0; inst < 20; ++inst) {
    MlpArchitecture arch;
    arch.input_dim = 2 + meta.below(4);
    arch.hidden_dims = {1 + meta.below(8), 1 + meta.below(8)};
    arch.feature_dim = 1 + meta.below(8);
    arch.num_classes_total = 2 + meta.below(3);  // <= 4
    const std::size_t batch = 1 + meta.below(4);

    // Fully random parameters, biases included: zero-bias nets can place a
    // ReLU preactivation exactly on the tie (a dead row feeding the next
    // layer), where the loss is not differentiable and FD is no oracle.
    auto randomize = [&](StudentModel m) {
      ParameterSet p = m.params();
      for (auto& [name, t] : p.entries)
        for (double& v : t.values()) v = meta.uniform(-1.0, 1.0);
      m.set_params(std::move(p));
      return m;
    };
    const std::uint64_t s = 1000 + inst;
    const StudentModel model = randomize(init_student(arch, s));
    const StudentModel peer = randomize(init_student(arch, s + 500));
    const StudentModel anchor = randomize(init_student(arch, s + 900));

    // Keep every ReLU preactivation of the checked model at least 1e-2 from
    // its kink; the FD probes (h = 1e-5) stay strictly on one side.
    auto relu_margin = [&](const Matrix& x) {
      const ForwardCache c = mlp_forward(arch, model.params(), x);
      double m = 1e300;
      for (std::size_t l = 0; l + 1 < c.preacts.size(); ++l)
        for (double z : c.preacts[l].values()) m = std::min(m, std::abs(z));
      return m;
    };
    Matrix x_view(batch, arch.input_dim), x_base(batch, arch.input_dim);
    for (int tries = 0; tries < 500; ++tries) {
      for (double& v : x_view.values()) v = meta.normal();
      for (double& v : x_base.values()) v = meta.normal();
      if (relu_margin(x_view) > 1e-2 && relu_margin(x_base) > 1e-2) break;
    }
    std::vector<int> labels(batch);
    for (auto& y : labels) y = static_cast<int>(meta.below(arch.num_classes_total));
    std::vector<int> seen(arch.num_classes_total);
    for (std::size_t c = 0; c < seen.size(); ++c) seen[c] = static_cast<int>(c);

    const double tau = 4.0, lambda = 0.3;
    const Matrix peer_logits = masked_logits(mlp_forward(arch, peer.params(), x_view).logits, seen);
    const Matrix anchor_logits =
        masked_logits(mlp_forward(arch, anchor.params(), x_view).logits, seen);

    enum Kind { kCe, kKd, kGwmKd, kComposed };
    for (Kind kind : {kCe, kKd, kGwmKd, kComposed}) {
      auto loss_at = [&](const ParameterSet& p) {
        const Matrix view = masked_logits(mlp_forward(arch, p, x_view).logits, seen);
        switch (kind) {
          case kCe: return ce_loss(view, labels).loss;
          case kKd: return kd_loss(view, peer_logits, tau).loss;
          case kGwmKd: return kd_loss(view, anchor_logits, tau).loss;
          case kComposed: {
            const Matrix base = masked_logits(mlp_forward(arch, p, x_base).logits, seen);
            return ce_loss(base, labels).loss + ce_loss(view, labels).loss +
                   kd_loss(view, peer_logits, tau).loss +
                   lambda * kd_loss(view, anchor_logits, tau).loss;
          }
        }
        return 0.0;
      };

      const ForwardCache cache = forward(model, x_view);
      const Matrix view = masked_logits(cache.logits, seen);
      ParameterSet analytic;
      switch (kind) {
        case kCe: analytic = backward(model, cache, ce_loss(view, labels).dlogits); break;
        case kKd:
          analytic = backward(model, cache, kd_loss(view, peer_logits, tau).dstudent_logits);
          break;
        case kGwmKd:
          analytic = backward(model, cache, kd_loss(view, anchor_logits, tau).dstudent_logits);
          break;
        case kComposed: {
          Matrix dview = ce_loss(view, labels).dlogits;
          dview += kd_loss(view, peer_logits, tau).dstudent_logits;
          Matrix dg = kd_loss(view, anchor_logits, tau).dstudent_logits;
          dg *= lambda;
          dview += dg;
          analytic = backward(model, cache, dview);
          const ForwardCache bcache = forward(model, x_base);
          const Matrix base = masked_logits(bcache.logits, seen);
          const ParameterSet extra = backward(model, bcache, ce_loss(base, labels).dlogits);
          for (std::size_t t = 0; t < analytic.tensor_count(); ++t)
            analytic.tensor(t) += extra.tensor(t);
          break;
        }
      }

      const auto flat = model.params().flatten();
      const auto flat_g = analytic.flatten();
      const double h = 1e-5;
      for (std::size_t i = 0; i < flat.size(); ++i) {
        auto fp = flat, fm = flat;
        fp[i] += h;
        fm[i] -= h;
        const double fd = (loss_at(model.params().unflatten(fp)) -
                           loss_at(model.params().unflatten(fm))) /
                          (2 * h);
        const double err = std::abs(fd - flat_g[i]);
        const double rel = err / std::max({std::abs(fd), std::abs(flat_g[i]), abs_floor});
        if (err > abs_floor && rel > rel_tol) {
          return {false, "instance " + std::to_string(inst) + " kind " + std::to_string(kind) +
                             " param " + std::to_string(i) + " rel err " + format_double(rel)};
        }
        worst = std::max(worst, std::min(rel, err));
      }
    }
  }
  return {true, "20 instances x 4 losses, worst deviation " + format_double(worst)};
}

// ---------------------------------------------------------------------------
// criterion 2: fusion algebra exactness

Outcome fusion_algebra() {
  Rng rng(77);
  auto random_set = [&](std::size_t n) {
    ParameterSet p;
    Matrix w(3, n);
    for (double& v : w.values()) v = rng.uniform(-4.0, 4.0);
    Matrix b(1, n);
    for (double& v : b.values()) v = rng.uniform(-4.0, 4.0);
    p.entries.emplace_back("w", std::move(w));
    p.entries.emplace_back("b", std::move(b));
    return p;
  };

  for (int it = 0; it < 100; ++it) {
    const std::size_t n = 2 + rng.below(10);
    const ParameterSet s1 = random_set(n);
    const ParameterSet s2 = random_set(n);
    const double r0 = rng.uniform();
    const auto c = combine({&s1, &s2}, {r0, 1.0 - r0});
    const auto f1 = s1.flatten(), f2 = s2.flatten(), fc = c.flatten();
    for (std::size_t i = 0; i < fc.size(); ++i)
      if (std::abs(fc[i] - (r0 * f1[i] + (1.0 - r0) * f2[i])) > 1e-12)
        return {false, "combine deviates from the closed form"};

    const double alpha = rng.uniform();
    GlobalWorkspace gwm;
    gwm.set(s1);
    ema_update(gwm, s2, alpha);
    const auto fg = gwm.params().flatten();
    for (std::size_t i = 0; i < fg.size(); ++i)
      if (std::abs(fg[i] - ((1.0 - alpha) * f1[i] + alpha * f2[i])) > 1e-12)
        return {false, "ema deviates from the closed form"};

    const double gamma = rng.uniform();
    const auto fused = fuse_back(s1, s2, gamma).flatten();
    for (std::size_t i = 0; i < fused.size(); ++i)
      if (std::abs(fused[i] - ((1.0 - gamma) * f1[i] + gamma * f2[i])) > 1e-12)
        return {false, "fuse_back deviates from the closed form"};

    const auto noop = fuse_back(s1, s2, 0.0).flatten();
    const auto collapse = fuse_back(s1, s2, 1.0).flatten();
    for (std::size_t i = 0; i < noop.size(); ++i) {
      if (noop[i] != f1[i]) return {false, "gamma=0 is not a bit-exact no-op"};
      if (collapse[i] != f2[i]) return {false, "gamma=1 is not a bit-exact collapse"};
    }
  }
  return {true, "100 random cases within 1e-12; endpoints bit-exact"};
}

// ---------------------------------------------------------------------------
// criterion 3: reservoir uniformity (chi-square)

Outcome reservoir_uniformity() {
  const std::size_t capacity = 32, stream_n = 1024;
  const int trials = 100000;
  Matrix batch(stream_n, 1);
  std::vector<int> labels(stream_n);
  for (std::size_t i = 0; i < stream_n; ++i) {
    batch(i, 0) = static_cast<double>(i);
    labels[i] = static_cast<int>(i);
  }
  std::vector<long> included(stream_n, 0);
  Rng rng(99);
  for (int t = 0; t < trials; ++t) {
    MemoryBuffer buf(capacity);
    buf.reservoir_update(batch, labels, 0, rng);
    for (std::size_t s = 0; s < buf.occupied(); ++s)
      included[static_cast<std::size_t>(buf.slot(s).label)] += 1;
  }
  const double expected = double(trials) * capacity / stream_n;
  double stat = 0.0;
  for (long c : included) {
    const double d = c - expected;
    stat += d * d / expected;
  }
  const double p = chi_square_p_value(stat, double(stream_n - 1));
  return {p > 0.001, "chi2=" + format_double(stat) + " df=1023 p=" + format_double(p)};
}

// ---------------------------------------------------------------------------
// criterion 4: metric oracles

Outcome metric_oracles() {
  auto faa_oracle = [](const AccuracyMatrix& m) {
    double s = 0;
    for (std::size_t j = 0; j < m.num_tasks(); ++j) s += m.at(m.num_tasks() - 1, j);
    return s / m.num_tasks();
  };
  auto frf_oracle = [](const AccuracyMatrix& m) {
    const std::size_t t = m.num_tasks();
    double s = 0;
    for (std::size_t j = 0; j < t; ++j) {
      double best = 0;
      bool any = false;
      for (std::size_t l = j; l < t; ++l) {
        if (m.at(l, j) == 0.0) continue;
        any = true;
        best = std::max(best, (m.at(l, j) - m.at(t - 1, j)) / m.at(l, j));
      }
      s += any ? best : 0.0;
    }
    return s / t;
  };
  auto ala_oracle = [](const AccuracyMatrix& m) {
    double s = 0;
    for (std::size_t j = 0; j < m.num_tasks(); ++j) s += m.at(j, j);
    return s / m.num_tasks();
  };

  Rng rng(4242);
  for (int it = 0; it < 1000; ++it) {
    const std::size_t t = 1 + rng.below(8);
    AccuracyMatrix m(t);
    for (std::size_t l = 0; l < t; ++l)
      for (std::size_t j = 0; j <= l; ++j)
        m.set(l, j, rng.below(20) == 0 ? 0.0 : rng.uniform());
    if (faa(m) != faa_oracle(m)) return {false, "faa mismatch"};
    if (frf(m) != frf_oracle(m)) return {false, "frf mismatch"};
    if (ala(m) != ala_oracle(m)) return {false, "ala mismatch"};
  }

  AccuracyMatrix w(2);
  w.set(0, 0, 0.8);
  w.set(1, 0, 0.4);
  w.set(1, 1, 0.6);
  if (std::abs(faa(w) - 0.5) > 1e-15) return {false, "worked FAA example"};
  if (std::abs(frf(w) - 0.25) > 1e-15) return {false, "worked FRF example"};
  if (std::abs(ala(w) - 0.7) > 1e-15) return {false, "worked ALA example"};
  return {true, "1000 random matrices exact; worked T=2 example reproduced"};
}

// ---------------------------------------------------------------------------
// criteria 5-7: desk-scale behavioural analogues (shared runs)

struct MethodStats {
  double faa = 0.0;
  double frf = 0.0;
  double min_cos = 1.0;
  double mean_drift = 0.0;
};

MethodStats run_variant(const std::string& out_dir, std::uint64_t seed, bool kd, bool fuse,
                        bool gwmkd, double gamma) {
  RunConfig cfg = default_benchmark_config(out_dir, seed);
  cfg.loss.enable_kd = kd;
  cfg.loss.enable_fuse = fuse;
  cfg.loss.enable_gwmkd = gwmkd;
  cfg.fusion.fuse_ratio = gamma;
  MethodStats stats;
  double drift_sum = 0.0;
  std::size_t drift_n = 0;
  const RunArtifacts art = train_run(cfg, [&](const RunState&, const BatchDiagnostics& d) {
    stats.min_cos = std::min(stats.min_cos, d.cos_s1_s2);
    if (!std::isnan(d.drift)) {
      drift_sum += d.drift;
      ++drift_n;
    }
  });
  stats.faa = art.faa;
  stats.frf = art.frf;
  stats.mean_drift = drift_n ? drift_sum / drift_n : 0.0;
  return stats;
}

struct BehaviouralRuns {
  std::vector<MethodStats> er, kd_only, full, gamma0;
};

BehaviouralRuns run_behavioural_grid(const std::string& root) {
  BehaviouralRuns runs;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const std::string base = root + "/seed_" + std::to_string(seed);
    runs.er.push_back(run_variant(base + "/er", seed, false, false, false, 0.5));
    runs.kd_only.push_back(run_variant(base + "/kd", seed, true, false, false, 0.5));
    runs.full.push_back(run_variant(base + "/full", seed, true, true, true, 0.5));
    runs.gamma0.push_back(run_variant(base + "/gamma0", seed, true, true, true, 0.0));
  }
  return runs;
}

Outcome ablation_ordering(const BehaviouralRuns& runs) {
  int wins = 0;
  double er_mean = 0.0, full_mean = 0.0, kd_frf = 0.0, full_frf = 0.0;
  for (std::size_t s = 0; s < 5; ++s) {
    if (runs.full[s].faa > runs.er[s].faa) ++wins;
    er_mean += runs.er[s].faa / 5;
    full_mean += runs.full[s].faa / 5;
    kd_frf += runs.kd_only[s].frf / 5;
    full_frf += runs.full[s].frf / 5;
  }
  const double p = one_sided_sign_test_p(wins, 5);
  const bool pass = full_mean > er_mean && p < 0.05 && full_frf < kd_frf;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "FAA er=%.4f full=%.4f wins=%d/5 p=%.4f; FRF kd=%.4f full=%.4f", er_mean,
                full_mean, wins, p, kd_frf, full_frf);
  return {pass, buf};
}

Outcome cosine_divergence_control(const BehaviouralRuns& runs) {
  int higher = 0;
  std::string detail;
  for (std::size_t s = 0; s < 5; ++s) {
    if (runs.full[s].min_cos > runs.gamma0[s].min_cos) ++higher;
    detail += (s ? " " : "") + format_double(runs.full[s].min_cos - runs.gamma0[s].min_cos);
  }
  return {higher >= 4, "min-cosine gain per seed: " + detail};
}

Outcome feature_drift_reduction(const BehaviouralRuns& runs) {
  int lower = 0;
  std::string detail;
  for (std::size_t s = 0; s < 5; ++s) {
    if (runs.full[s].mean_drift <= runs.kd_only[s].mean_drift) ++lower;
    detail += (s ? " " : "") + format_double(runs.kd_only[s].mean_drift - runs.full[s].mean_drift);
  }
  return {lower >= 4, "drift reduction per seed: " + detail};
}

// ---------------------------------------------------------------------------
// criterion 8: end-to-end determinism through the CLI

Outcome cli_determinism(const std::string& root) {
  RunConfig cfg = default_benchmark_config(root + "/det_a", 7);
  cfg.stream.synthetic.train_per_class = 40;  // small but a full 5-task run
  cfg.stream.synthetic.test_per_class = 20;
  const std::string config_path = root + "/det_config.json";
  {
    std::ofstream f(config_path);
    f << run_config_to_json(cfg).dump(2) << "\n";
  }
  const std::string cli = OCILGWM_CLI_PATH;
  const auto invoke = [&](const std::string& out_dir) {
    const std::string cmd = cli + " run --config " + config_path + " --out " + out_dir + " > " +
                            out_dir + "_stdout.txt 2>&1";
    return std::system(cmd.c_str());
  };
  fs::create_directories(root);
  if (invoke(root + "/det_a") != 0) return {false, "first run failed"};
  if (invoke(root + "/det_b") != 0) return {false, "second run failed"};
  const bool same_summary = slurp(root + "/det_a/summary.csv") == slurp(root + "/det_b/summary.csv");
  const bool same_matrix =
      slurp(root + "/det_a/accuracy_matrix.csv") == slurp(root + "/det_b/accuracy_matrix.csv");
  return {same_summary && same_matrix && !slurp(root + "/det_a/summary.csv").empty(),
          same_summary ? "summary.csv and accuracy_matrix.csv byte-identical"
                       : "summary files differ"};
}

// ---------------------------------------------------------------------------
// criterion 9: plain-ER reference equivalence

Outcome er_reference_equivalence(const std::string& root) {
  RunConfig cfg;
  cfg.seed = 11;
  cfg.out_dir = root + "/er_ref";
  cfg.arch.input_dim = 16;
  cfg.arch.hidden_dims = {24};
  cfg.arch.feature_dim = 12;
  cfg.stream.synthetic.num_classes = 12;
  cfg.stream.synthetic.dim = 16;
  cfg.stream.synthetic.classes_per_task = 4;  // 3 tasks
  cfg.stream.classes_per_task = 4;
  cfg.stream.synthetic.train_per_class = 50;
  cfg.stream.synthetic.test_per_class = 20;
  cfg.buffer_capacity = 30;
  cfg.loss.enable_kd = false;
  cfg.loss.enable_fuse = false;
  cfg.loss.enable_gwmkd = false;

  // Independent plain-ER loop sharing the rng substream layout. Per batch:
  // retrieve, merge, per-student baseline augmentation, masked CE, AdamW,
  // reservoir update with the stream batch.
  SyntheticSpec spec = cfg.stream.synthetic;
  spec.seed = stream_generation_seed(cfg.seed);
  const TaskStream stream = generate_synthetic(spec);
  MlpArchitecture arch = cfg.arch;
  arch.num_classes_total = stream.num_classes;
  AdamWOptions opts;
  opts.lr = cfg.lr;
  opts.weight_decay = cfg.weight_decay;

  RngStreams rngs = RngStreams::from_seed(cfg.seed);
  StudentModel ref1 = init_student(arch, student_init_seed(cfg.seed), opts);
  StudentModel ref2 = ref1;
  MemoryBuffer buffer(cfg.buffer_capacity);
  OneEpochCursor cursor;
  const AugmentParams base_aug = AugmentParams::weak(stream.data_std);

  std::vector<std::vector<double>> trajectory;  // flattened params after each batch
  for (std::size_t t = 0; t < stream.num_tasks; ++t) {
    const auto seen = stream.seen_classes(t);
    for (const auto& batch :
         cursor.stream_batches(stream, t, cfg.stream_batch_size, rngs.data)) {
      const LabeledBatch mem = buffer.random_retrieve(cfg.memory_batch_size, rngs.retrieval);
      const Matrix b = vstack(batch.x, mem.x);
      std::vector<int> labels = batch.y;
      labels.insert(labels.end(), mem.y.begin(), mem.y.end());
      const Matrix base1 = augment(base_aug, b, rngs.aug1);
      const Matrix base2 = augment(base_aug, b, rngs.aug2);

      StudentModel* students[2] = {&ref1, &ref2};
      const Matrix* views[2] = {&base1, &base2};
      ParameterSet grads[2];
      for (int m = 0; m < 2; ++m) {
        const ForwardCache cache = forward(*students[m], *views[m]);
        const CeResult ce = ce_loss(masked_logits(cache.logits, seen), labels);
        grads[m] = backward(*students[m], cache, ce.dlogits);
      }
      ref1.apply_gradients(grads[0]);
      ref2.apply_gradients(grads[1]);
      buffer.reservoir_update(batch.x, batch.y, static_cast<int>(t), rngs.reservoir);

      auto flat = ref1.params().flatten();
      const auto flat2 = ref2.params().flatten();
      flat.insert(flat.end(), flat2.begin(), flat2.end());
      trajectory.push_back(std::move(flat));
    }
  }

  // Drive the real trainer with all method flags disabled and compare batch by batch.
  std::size_t batch_idx = 0;
  bool identical = true;
  std::size_t first_bad = 0;
  train_run(cfg, [&](const RunState& state, const BatchDiagnostics&) {
    if (!identical || batch_idx >= trajectory.size()) return;
    auto flat = state.students[0].params().flatten();
    const auto flat2 = state.students[1].params().flatten();
    flat.insert(flat.end(), flat2.begin(), flat2.end());
    if (flat != trajectory[batch_idx]) {
      identical = false;
      first_bad = batch_idx;
    }
    ++batch_idx;
  });
  if (batch_idx != trajectory.size())
    return {false, "batch count mismatch: trainer " + std::to_string(batch_idx) + " vs reference " +
                       std::to_string(trajectory.size())};
  if (!identical)
    return {false, "trajectories diverge at batch " + std::to_string(first_bad)};
  return {true, std::to_string(trajectory.size()) + " batches bit-identical across 3 tasks"};
}

}  // namespace

int main() {
  const std::string root = (fs::temp_directory_path() / "ocilgwm_acceptance").string();
  std::error_code ec;
  fs::remove_all(root, ec);
  fs::create_directories(root);

  int failures = 0;
  const auto report = [&](int id, const std::string& name, const Outcome& o) {
    std::printf("%s criterion %d: %s (%s)\n", o.passed ? "PASS" : "FAIL", id, name.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.passed) ++failures;
  };

  const auto t0 = std::chrono::steady_clock::now();
  report(1, "gradient correctness vs central finite differences", gradient_correctness());
  report(2, "fusion algebra exactness", fusion_algebra());
  report(3, "reservoir uniformity (chi-square)", reservoir_uniformity());
  report(4, "metric oracles (FAA/FRF/ALA)", metric_oracles());

  const BehaviouralRuns runs = run_behavioural_grid(root);
  report(5, "ablation ordering on the default stream", ablation_ordering(runs));
  report(6, "cosine-divergence control (gamma 0.5 vs 0)", cosine_divergence_control(runs));
  report(7, "feature-drift reduction (full vs KD-only)", feature_drift_reduction(runs));

  report(8, "end-to-end determinism through the CLI", cli_determinism(root));
  report(9, "plain-ER reference equivalence", er_reference_equivalence(root));

  const auto dt = std::chrono::duration_cast<std::chrono::seconds>(
      std::chrono::steady_clock::now() - t0);
  std::printf("%d/9 criteria passed in %llds\n", 9 - failures,
              static_cast<long long>(dt.count()));
  fs::remove_all(root, ec);
  return failures == 0 ? 0 : 1;
}
