// ocilgwm command-line harness: single runs, multi-seed sweeps, SVG plots.

#include <cstdio>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ocilgwm/config.hpp"
#include "ocilgwm/csv.hpp"
#include "ocilgwm/errors.hpp"
#include "ocilgwm/svg_plot.hpp"
#include "ocilgwm/sweep.hpp"
#include "ocilgwm/trainer.hpp"

namespace {

constexpr int kUsageError = 2;

std::vector<std::string> split_csv_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_run(const std::string& config_path, const std::string& seed_override,
            const std::string& out_override, const std::string& ablate) {
  ocilgwm::RunConfig cfg = ocilgwm::load_run_config(config_path);
  if (!seed_override.empty()) cfg.seed = std::stoull(seed_override);
  if (!out_override.empty()) cfg.out_dir = out_override;
  ocilgwm::apply_ablation(cfg, ablate);
  cfg.validate();
  const ocilgwm::RunArtifacts art = ocilgwm::train_run(cfg);
  std::cout << "FAA=" << ocilgwm::format_double(art.faa)
            << " FRF=" << ocilgwm::format_double(art.frf)
            << " ALA=" << ocilgwm::format_double(art.ala) << "\n";
  std::cout << "run directory: " << art.out_dir << "\n";
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::string& values, const std::string& seeds,
              const std::string& out_override, std::size_t workers) {
  ocilgwm::SweepSpec spec;
  spec.base = ocilgwm::load_run_config(config_path);
  spec.parameter = param;
  spec.values = split_csv_list(values);
  for (const std::string& s : split_csv_list(seeds)) spec.seeds.push_back(std::stoull(s));
  spec.out_dir = out_override.empty() ? spec.base.out_dir + "_sweep" : out_override;
  spec.workers = workers;
  const ocilgwm::SweepResult result = ocilgwm::run_sweep(spec);
  std::cout << "sweep results: " << result.csv_path << "\n";
  for (std::size_t vi = 0; vi < spec.values.size(); ++vi) {
    double faa = 0.0, frf = 0.0, ala = 0.0;
    for (std::size_t si = 0; si < spec.seeds.size(); ++si) {
      const auto& c = result.cells[vi * spec.seeds.size() + si];
      faa += c.faa;
      frf += c.frf;
      ala += c.ala;
    }
    const double n = static_cast<double>(spec.seeds.size());
    std::printf("%s=%s mean FAA=%.4f FRF=%.4f ALA=%.4f over %zu seeds\n", param.c_str(),
                spec.values[vi].c_str(), faa / n, frf / n, ala / n, spec.seeds.size());
  }
  return 0;
}

int cmd_plot(const std::string& input, const std::string& kind, const std::string& out) {
  const ocilgwm::PlotKind k = ocilgwm::parse_plot_kind(kind);
  ocilgwm::write_plot_svg(out, ocilgwm::build_plot(k, input));
  std::cout << "wrote " << out << "\n";
  return 0;
}

}  // namespace

int run_main(int argc, char** argv) {
  CLI::App app{"Online class-incremental learning with a fused global workspace"};
  app.require_subcommand(1);

  std::string config_path, seed_override, out_override, ablate = "none";
  auto* run = app.add_subcommand("run", "Run a single experiment from a JSON config");
  run->add_option("--config", config_path, "JSON config path")->required();
  run->add_option("--seed", seed_override, "Override the config seed");
  run->add_option("--out", out_override, "Override the output directory");
  run->add_option("--ablate", ablate, "Disable modules: comma list of kd,fuse,gwmkd (or none)");

  std::string sweep_config, sweep_param, sweep_values, sweep_seeds, sweep_out;
  std::size_t sweep_workers = 0;
  auto* sweep = app.add_subcommand("sweep", "Run a parameter grid over seeds");
  sweep->add_option("--config", sweep_config, "Base JSON config path")->required();
  sweep->add_option("--param", sweep_param, "lambda|gamma|delta|alpha|memory_size")->required();
  sweep->add_option("--values", sweep_values, "Comma-separated values")->required();
  sweep->add_option("--seeds", sweep_seeds, "Comma-separated seeds")->required();
  sweep->add_option("--out", sweep_out, "Sweep output directory");
  sweep->add_option("--workers", sweep_workers,
                    "Worker pool width (default: OCILGWM_WORKERS or hardware)");

  std::string plot_in, plot_kind, plot_out;
  auto* plot = app.add_subcommand("plot", "Render a deterministic SVG chart");
  plot->add_option("--in", plot_in, "Run directory or CSV file")->required();
  plot->add_option("--kind", plot_kind, "accuracy|sweep|drift|cosine")->required();
  plot->add_option("--out", plot_out, "Output SVG path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, seed_override, out_override, ablate);
    if (sweep->parsed())
      return cmd_sweep(sweep_config, sweep_param, sweep_values, sweep_seeds, sweep_out,
                       sweep_workers);
    if (plot->parsed()) return cmd_plot(plot_in, plot_kind, plot_out);
  } catch (const ocilgwm::ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const ocilgwm::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const ocilgwm::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kUsageError;
}

int main(int argc, char** argv) {
  try {
    return run_main(argc, argv);
  } catch (...) {
    std::fputs("error: unexpected failure\n", stderr);
    return 1;
  }
}
