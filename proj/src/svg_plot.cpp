#include "ocilgwm/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>

#include "ocilgwm/csv.hpp"
#include "ocilgwm/errors.hpp"

namespace ocilgwm {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

// short tick label, trimmed of trailing zeros
std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

double parse_num(const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw FormatError("plot: cannot parse numeric value \"" + s + "\"");
  }
}

std::string resolve_csv(const std::string& input_path, const char* filename) {
  namespace fs = std::filesystem;
  if (fs::is_directory(input_path)) return input_path + "/" + filename;
  return input_path;
}

}  // namespace

std::string render_svg(const PlotSpec& spec) {
  const double w = spec.width;
  const double h = spec.height;
  const double ml = 70, mr = 20, mt = 40, mb = 55;  // margins
  const double pw = w - ml - mr;
  const double ph = h - mt - mb;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : spec.series) {
    for (double v : s.x) {
      xmin = std::min(xmin, v);
      xmax = std::max(xmax, v);
    }
    for (double v : s.y) {
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  }
  for (double v : spec.marker_x) {
    xmin = std::min(xmin, v);
    xmax = std::max(xmax, v);
  }
  if (!std::isfinite(xmin)) {
    xmin = 0;
    xmax = 1;
  }
  if (!std::isfinite(ymin)) {
    ymin = 0;
    ymax = 1;
  }
  if (xmax - xmin < 1e-12) {
    xmin -= 1;
    xmax += 1;
  }
  if (ymax - ymin < 1e-12) {
    ymin -= 1;
    ymax += 1;
  }
  auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return mt + ph - (y - ymin) / (ymax - ymin) * ph; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(spec.width) +
         "\" height=\"" + std::to_string(spec.height) + "\" viewBox=\"0 0 " +
         std::to_string(spec.width) + " " + std::to_string(spec.height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt2(w / 2) + "\" y=\"22\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">" + escape_xml(spec.title) + "</text>\n";

  // axes
  svg += "<line x1=\"" + fmt2(ml) + "\" y1=\"" + fmt2(mt) + "\" x2=\"" + fmt2(ml) + "\" y2=\"" +
         fmt2(mt + ph) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + fmt2(ml) + "\" y1=\"" + fmt2(mt + ph) + "\" x2=\"" + fmt2(ml + pw) +
         "\" y2=\"" + fmt2(mt + ph) + "\" stroke=\"black\"/>\n";

  const int n_ticks = 5;
  for (int i = 0; i <= n_ticks; ++i) {
    const double fy = ymin + (ymax - ymin) * i / n_ticks;
    const double py = sy(fy);
    svg += "<line x1=\"" + fmt2(ml - 4) + "\" y1=\"" + fmt2(py) + "\" x2=\"" + fmt2(ml) +
           "\" y2=\"" + fmt2(py) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt2(ml - 8) + "\" y=\"" + fmt2(py + 4) + "\" text-anchor=\"end\" "
           "font-family=\"sans-serif\" font-size=\"11\">" + fmt_tick(fy) + "</text>\n";
  }
  if (!spec.x_tick_labels.empty()) {
    for (std::size_t i = 0; i < spec.x_tick_labels.size(); ++i) {
      const double px = sx(static_cast<double>(i));
      svg += "<line x1=\"" + fmt2(px) + "\" y1=\"" + fmt2(mt + ph) + "\" x2=\"" + fmt2(px) +
             "\" y2=\"" + fmt2(mt + ph + 4) + "\" stroke=\"black\"/>\n";
      svg += "<text x=\"" + fmt2(px) + "\" y=\"" + fmt2(mt + ph + 18) +
             "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
             escape_xml(spec.x_tick_labels[i]) + "</text>\n";
    }
  } else {
    for (int i = 0; i <= n_ticks; ++i) {
      const double fx = xmin + (xmax - xmin) * i / n_ticks;
      const double px = sx(fx);
      svg += "<line x1=\"" + fmt2(px) + "\" y1=\"" + fmt2(mt + ph) + "\" x2=\"" + fmt2(px) +
             "\" y2=\"" + fmt2(mt + ph + 4) + "\" stroke=\"black\"/>\n";
      svg += "<text x=\"" + fmt2(px) + "\" y=\"" + fmt2(mt + ph + 18) +
             "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
             fmt_tick(fx) + "</text>\n";
    }
  }
  svg += "<text x=\"" + fmt2(ml + pw / 2) + "\" y=\"" + fmt2(h - 14) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
         escape_xml(spec.x_label) + "</text>\n";
  svg += "<text x=\"18\" y=\"" + fmt2(mt + ph / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 " +
         fmt2(mt + ph / 2) + ")\">" + escape_xml(spec.y_label) + "</text>\n";

  for (double mx : spec.marker_x) {
    const double px = sx(mx);
    svg += "<line x1=\"" + fmt2(px) + "\" y1=\"" + fmt2(mt) + "\" x2=\"" + fmt2(px) + "\" y2=\"" +
           fmt2(mt + ph) + "\" stroke=\"#999999\" stroke-dasharray=\"4,3\" class=\"fuse-marker\"/>\n";
  }

  for (std::size_t s = 0; s < spec.series.size(); ++s) {
    const PlotSeries& ser = spec.series[s];
    const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
    if (ser.x.size() == 1) {
      svg += "<circle cx=\"" + fmt2(sx(ser.x[0])) + "\" cy=\"" + fmt2(sy(ser.y[0])) +
             "\" r=\"3\" fill=\"" + color + "\"/>\n";
    } else if (!ser.x.empty()) {
      std::string points;
      for (std::size_t i = 0; i < ser.x.size(); ++i) {
        if (i) points += " ";
        points += fmt2(sx(ser.x[i])) + "," + fmt2(sy(ser.y[i]));
      }
      svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
             "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
    }
    // legend
    const double ly = mt + 14 + 16 * static_cast<double>(s);
    svg += "<line x1=\"" + fmt2(ml + pw - 150) + "\" y1=\"" + fmt2(ly - 4) + "\" x2=\"" +
           fmt2(ml + pw - 130) + "\" y2=\"" + fmt2(ly - 4) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fmt2(ml + pw - 124) + "\" y=\"" + fmt2(ly) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + escape_xml(ser.label) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

PlotKind parse_plot_kind(const std::string& name) {
  if (name == "accuracy") return PlotKind::accuracy;
  if (name == "sweep") return PlotKind::sweep;
  if (name == "drift") return PlotKind::drift;
  if (name == "cosine") return PlotKind::cosine;
  throw ParameterError("unknown plot kind \"" + name +
                       "\" (expected accuracy, sweep, drift, cosine)");
}

PlotSpec build_plot(PlotKind kind, const std::string& input_path) {
  PlotSpec spec;
  switch (kind) {
    case PlotKind::accuracy: {
      const CsvTable t = read_csv(resolve_csv(input_path, "accuracy_matrix.csv"));
      const std::size_t cl = t.column("l"), cj = t.column("j"), ca = t.column("a");
      std::map<int, PlotSeries> per_task;
      std::map<int, std::pair<double, int>> mean_by_l;
      for (const auto& row : t.rows) {
        const int l = static_cast<int>(parse_num(row[cl]));
        const int j = static_cast<int>(parse_num(row[cj]));
        const double a = parse_num(row[ca]);
        auto& s = per_task[j];
        s.label = "task " + std::to_string(j);
        s.x.push_back(l);
        s.y.push_back(a);
        mean_by_l[l].first += a;
        mean_by_l[l].second += 1;
      }
      for (auto& [j, s] : per_task) spec.series.push_back(std::move(s));
      PlotSeries mean;
      mean.label = "mean seen";
      for (const auto& [l, acc] : mean_by_l) {
        mean.x.push_back(l);
        mean.y.push_back(acc.first / acc.second);
      }
      spec.series.push_back(std::move(mean));
      spec.title = "Accuracy after each task";
      spec.x_label = "trained through task";
      spec.y_label = "accuracy";
      break;
    }
    case PlotKind::sweep: {
      const CsvTable t = read_csv(resolve_csv(input_path, "sweep.csv"));
      const std::size_t cv = t.column("value"), cs = t.column("seed");
      const std::size_t cfaa = t.column("faa"), cfrf = t.column("frf"), cala = t.column("ala");
      std::string param = "value";
      if (!t.rows.empty()) param = t.rows[0][t.column("param")];
      PlotSeries faa_s{"FAA (mean)", {}, {}}, frf_s{"FRF (mean)", {}, {}},
          ala_s{"ALA (mean)", {}, {}};
      bool categorical = false;
      std::vector<std::string> labels;
      for (const auto& row : t.rows) {
        if (row[cs] != "mean") continue;  // aggregate rows carry the means
        double x;
        try {
          x = parse_num(row[cv]);
        } catch (const FormatError&) {
          categorical = true;
          x = static_cast<double>(labels.size());
        }
        if (categorical) x = static_cast<double>(labels.size());
        labels.push_back(row[cv]);
        faa_s.x.push_back(x);
        faa_s.y.push_back(parse_num(row[cfaa]));
        frf_s.x.push_back(x);
        frf_s.y.push_back(parse_num(row[cfrf]));
        ala_s.x.push_back(x);
        ala_s.y.push_back(parse_num(row[cala]));
      }
      if (categorical) {
        // redo x as category indices so "task" and numbers share an axis
        for (std::size_t i = 0; i < faa_s.x.size(); ++i)
          faa_s.x[i] = frf_s.x[i] = ala_s.x[i] = static_cast<double>(i);
        spec.x_tick_labels = labels;
      }
      spec.series = {std::move(faa_s), std::move(frf_s), std::move(ala_s)};
      spec.title = "Sweep over " + param;
      spec.x_label = param;
      spec.y_label = "metric";
      break;
    }
    case PlotKind::drift: {
      const CsvTable t = read_csv(resolve_csv(input_path, "drift.csv"));
      const std::size_t cb = t.column("batch"), cd = t.column("drift");
      PlotSeries s{"feature drift", {}, {}};
      for (const auto& row : t.rows) {
        s.x.push_back(parse_num(row[cb]));
        s.y.push_back(parse_num(row[cd]));
      }
      spec.series = {std::move(s)};
      spec.title = "Feature drift on buffered old-class samples";
      spec.x_label = "batch";
      spec.y_label = "mean ||f_i - f_{i-1}||_2";
      break;
    }
    case PlotKind::cosine: {
      const CsvTable t = read_csv(resolve_csv(input_path, "cosine.csv"));
      const std::size_t cb = t.column("batch");
      const std::size_t c12 = t.column("cos_s1_s2"), c1g = t.column("cos_s1_gwm"),
                        c2g = t.column("cos_s2_gwm");
      PlotSeries s12{"cos(s1,s2)", {}, {}}, s1g{"cos(s1,gwm)", {}, {}}, s2g{"cos(s2,gwm)", {}, {}};
      bool have_fused = true;
      std::size_t cf = 0;
      try {
        cf = t.column("fused");
      } catch (const FormatError&) {
        have_fused = false;
      }
      for (const auto& row : t.rows) {
        const double b = parse_num(row[cb]);
        s12.x.push_back(b);
        s12.y.push_back(parse_num(row[c12]));
        s1g.x.push_back(b);
        s1g.y.push_back(parse_num(row[c1g]));
        s2g.x.push_back(b);
        s2g.y.push_back(parse_num(row[c2g]));
        if (have_fused && row[cf] == "1") spec.marker_x.push_back(b);
      }
      spec.series = {std::move(s12), std::move(s1g), std::move(s2g)};
      spec.title = "Parameter cosine similarity";
      spec.x_label = "batch";
      spec.y_label = "cosine";
      break;
    }
  }
  return spec;
}

void write_plot_svg(const std::string& path, const PlotSpec& spec) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open " + path + " for writing");
  f << render_svg(spec);
}

}  // namespace ocilgwm
