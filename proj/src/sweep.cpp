#include "ocilgwm/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <thread>

#include "ocilgwm/csv.hpp"
#include "ocilgwm/errors.hpp"
#include "ocilgwm/trainer.hpp"

namespace ocilgwm {

namespace {

double parse_double_token(const std::string& parameter, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ParameterError("sweep value \"" + value + "\" for " + parameter + " is not a number");
  }
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  return out;
}

}  // namespace

RunConfig apply_sweep_value(RunConfig base, const std::string& parameter,
                            const std::string& value) {
  if (parameter == "lambda") {
    base.loss.lambda = parse_double_token(parameter, value);
  } else if (parameter == "gamma") {
    base.fusion.fuse_ratio = parse_double_token(parameter, value);
  } else if (parameter == "alpha") {
    base.fusion.ema_alpha = parse_double_token(parameter, value);
  } else if (parameter == "memory_size") {
    const double v = parse_double_token(parameter, value);
    if (v < 1.0 || v != std::floor(v))
      throw ParameterError("sweep value for memory_size must be a positive integer");
    base.buffer_capacity = static_cast<std::size_t>(v);
  } else if (parameter == "delta") {
    if (value == "task") {
      base.fusion.fuse_every_task = true;
      base.fusion.fuse_batch_interval = 0;
    } else {
      const double v = parse_double_token(parameter, value);
      if (v < 1.0 || v != std::floor(v))
        throw ParameterError("sweep value for delta must be \"task\" or a positive batch count");
      base.fusion.fuse_every_task = false;
      base.fusion.fuse_batch_interval = static_cast<std::size_t>(v);
    }
  } else {
    throw ParameterError("unknown sweep parameter \"" + parameter +
                         "\" (expected lambda, gamma, delta, alpha, memory_size)");
  }
  return base;
}

SweepResult run_sweep(const SweepSpec& spec) {
  if (spec.values.empty()) throw ParameterError("sweep: no values given");
  if (spec.seeds.empty()) throw ParameterError("sweep: no seeds given");

  // Validate the whole grid up front so a bad value fails before any run starts.
  for (const auto& v : spec.values) apply_sweep_value(spec.base, spec.parameter, v).validate();

  SweepResult result;
  result.cells.resize(spec.values.size() * spec.seeds.size());
  for (std::size_t vi = 0; vi < spec.values.size(); ++vi) {
    for (std::size_t si = 0; si < spec.seeds.size(); ++si) {
      SweepCell& cell = result.cells[vi * spec.seeds.size() + si];
      cell.value = spec.values[vi];
      cell.seed = spec.seeds[si];
      cell.run_dir = spec.out_dir + "/" + sanitize(spec.parameter) + "_" + sanitize(cell.value) +
                     "/seed_" + std::to_string(cell.seed);
    }
  }

  std::size_t workers = spec.workers;
  if (workers == 0) {
    if (const char* env = std::getenv("OCILGWM_WORKERS")) {
      const long v = std::atol(env);
      if (v >= 1) workers = static_cast<std::size_t>(v);
    }
  }
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, result.cells.size());

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::string first_error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= result.cells.size() || failed.load()) return;
      SweepCell& cell = result.cells[i];
      try {
        RunConfig cfg = apply_sweep_value(spec.base, spec.parameter, cell.value);
        cfg.seed = cell.seed;
        cfg.out_dir = cell.run_dir;
        const RunArtifacts art = train_run(cfg);
        cell.faa = art.faa;
        cell.frf = art.frf;
        cell.ala = art.ala;
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!failed.exchange(true)) first_error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failed.load()) throw std::runtime_error("sweep cell failed: " + first_error);

  std::filesystem::create_directories(spec.out_dir);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t vi = 0; vi < spec.values.size(); ++vi) {
    for (std::size_t si = 0; si < spec.seeds.size(); ++si) {
      const SweepCell& c = result.cells[vi * spec.seeds.size() + si];
      rows.push_back({spec.parameter, c.value, std::to_string(c.seed), format_double(c.faa),
                      format_double(c.frf), format_double(c.ala), "", "", ""});
    }
    // mean/std aggregate over this value's seeds
    const std::size_t n = spec.seeds.size();
    double mean[3] = {0, 0, 0}, var[3] = {0, 0, 0};
    for (std::size_t si = 0; si < n; ++si) {
      const SweepCell& c = result.cells[vi * n + si];
      mean[0] += c.faa;
      mean[1] += c.frf;
      mean[2] += c.ala;
    }
    for (double& m : mean) m /= static_cast<double>(n);
    if (n > 1) {
      for (std::size_t si = 0; si < n; ++si) {
        const SweepCell& c = result.cells[vi * n + si];
        const double d[3] = {c.faa - mean[0], c.frf - mean[1], c.ala - mean[2]};
        for (int k = 0; k < 3; ++k) var[k] += d[k] * d[k];
      }
      for (double& v : var) v /= static_cast<double>(n - 1);
    }
    rows.push_back({spec.parameter, spec.values[vi], "mean", format_double(mean[0]),
                    format_double(mean[1]), format_double(mean[2]),
                    format_double(std::sqrt(var[0])), format_double(std::sqrt(var[1])),
                    format_double(std::sqrt(var[2]))});
  }
  result.csv_path = spec.out_dir + "/sweep.csv";
  write_csv(result.csv_path,
            {"param", "value", "seed", "faa", "frf", "ala", "faa_std", "frf_std", "ala_std"},
            rows);
  return result;
}

}  // namespace ocilgwm
