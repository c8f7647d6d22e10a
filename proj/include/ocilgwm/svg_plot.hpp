#pragma once

#include <string>
#include <vector>

namespace ocilgwm {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  std::vector<double> marker_x;           // vertical dashed markers (fuse events)
  std::vector<std::string> x_tick_labels;  // categorical x axis when non-empty
  int width = 860;
  int height = 520;
};

/// Deterministic static SVG line chart: same spec, same bytes.
std::string render_svg(const PlotSpec& spec);

enum class PlotKind { accuracy, sweep, drift, cosine };

PlotKind parse_plot_kind(const std::string& name);

/// Builds a chart from a run directory or a CSV file:
///   accuracy -> accuracy_matrix.csv   (per-task curves + running mean)
///   sweep    -> sweep.csv             (aggregate FAA/FRF/ALA vs value)
///   drift    -> drift.csv             (feature drift vs batch)
///   cosine   -> cosine.csv            (pairwise cosines vs batch, fuse markers)
/// Missing columns raise FormatError listing the expected schema.
PlotSpec build_plot(PlotKind kind, const std::string& input_path);

void write_plot_svg(const std::string& path, const PlotSpec& spec);

}  // namespace ocilgwm
