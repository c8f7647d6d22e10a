// Python bindings for the core operations: experiment runs, tempered
// softmax/distillation losses, fusion algebra, metrics and dataset IO.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <json.hpp>

#include "ocilgwm/config.hpp"
#include "ocilgwm/fusion.hpp"
#include "ocilgwm/losses.hpp"
#include "ocilgwm/metrics.hpp"
#include "ocilgwm/network.hpp"
#include "ocilgwm/stream.hpp"
#include "ocilgwm/sweep.hpp"
#include "ocilgwm/trainer.hpp"

namespace py = pybind11;
using namespace ocilgwm;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const DoubleArray& arr) {
  const auto buf = arr.request();
  if (buf.ndim != 2) throw ParameterError("expected a 2-d array");
  Matrix m(static_cast<std::size_t>(buf.shape[0]), static_cast<std::size_t>(buf.shape[1]));
  const double* src = static_cast<const double*>(buf.ptr);
  std::copy(src, src + m.size(), m.data());
  return m;
}

py::array_t<double> to_array(const Matrix& m) {
  py::array_t<double> out({m.rows(), m.cols()});
  std::copy(m.values().begin(), m.values().end(), out.mutable_data());
  return out;
}

ParameterSet to_parameter_set(const py::dict& d) {
  ParameterSet p;
  for (const auto& item : d)
    p.entries.emplace_back(item.first.cast<std::string>(),
                           to_matrix(item.second.cast<DoubleArray>()));
  return p;
}

py::dict to_dict(const ParameterSet& p) {
  py::dict d;
  for (const auto& [name, tensor] : p.entries) d[py::str(name)] = to_array(tensor);
  return d;
}

AccuracyMatrix to_accuracy_matrix(const DoubleArray& arr) {
  const auto buf = arr.request();
  if (buf.ndim != 2 || buf.shape[0] != buf.shape[1])
    throw ParameterError("accuracy matrix must be square");
  const std::size_t t = static_cast<std::size_t>(buf.shape[0]);
  const double* src = static_cast<const double*>(buf.ptr);
  AccuracyMatrix m(t);
  for (std::size_t l = 0; l < t; ++l)
    for (std::size_t j = 0; j <= l; ++j) {
      const double v = src[l * t + j];
      if (!std::isnan(v)) m.set(l, j, v);
    }
  return m;
}

py::dict run_from_json_string(const std::string& config_json) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(config_json);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed config JSON: ") + e.what());
  }
  const RunConfig cfg = parse_run_config(j);
  const RunArtifacts art = train_run(cfg);
  py::dict out;
  out["faa"] = art.faa;
  out["frf"] = art.frf;
  out["ala"] = art.ala;
  out["out_dir"] = art.out_dir;
  const std::size_t t = art.accuracy.num_tasks();
  py::array_t<double> acc({t, t});
  double* dst = acc.mutable_data();
  for (std::size_t l = 0; l < t; ++l)
    for (std::size_t j = 0; j < t; ++j)
      dst[l * t + j] = j <= l ? art.accuracy.at(l, j) : std::numeric_limits<double>::quiet_NaN();
  out["accuracy_matrix"] = acc;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Online class-incremental learning with dual students and a fused global workspace";

  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<ContractError>(m, "ContractError", PyExc_RuntimeError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);

  m.def("run_experiment", &run_from_json_string, py::arg("config_json"),
        "Run one experiment from a JSON config string; returns metrics and the run directory");

  m.def(
      "softmax",
      [](const DoubleArray& logits, double tau) { return to_array(softmax_temp(to_matrix(logits), tau)); },
      py::arg("logits"), py::arg("tau") = 1.0, "Row-wise tempered softmax");
  m.def(
      "log_softmax",
      [](const DoubleArray& logits, double tau) {
        return to_array(log_softmax_temp(to_matrix(logits), tau));
      },
      py::arg("logits"), py::arg("tau") = 1.0);
  m.def(
      "masked_logits",
      [](const DoubleArray& logits, const std::vector<int>& seen) {
        return to_array(masked_logits(to_matrix(logits), seen));
      },
      py::arg("logits"), py::arg("seen_classes"));

  m.def(
      "cross_entropy",
      [](const DoubleArray& logits, const std::vector<int>& labels, bool mean_reduce) {
        const CeResult r = ce_loss(to_matrix(logits), labels, mean_reduce);
        return py::make_tuple(r.loss, to_array(r.dlogits));
      },
      py::arg("logits"), py::arg("labels"), py::arg("mean_reduce") = false,
      "Summed CE over the batch; returns (loss, dlogits)");
  m.def(
      "kl_div",
      [](const DoubleArray& p, const DoubleArray& q) { return kl_div(to_matrix(p), to_matrix(q)); },
      py::arg("p"), py::arg("q"));
  m.def(
      "tempered_kd",
      [](const DoubleArray& student, const DoubleArray& teacher, double tau, bool tau_squared) {
        const KdResult r = kd_loss(to_matrix(student), to_matrix(teacher), tau, tau_squared);
        return py::make_tuple(r.loss, to_array(r.dstudent_logits));
      },
      py::arg("student_logits"), py::arg("teacher_logits"), py::arg("tau") = 4.0,
      py::arg("tau_squared") = false,
      "Stop-gradient tempered KL; returns (loss, dstudent_logits)");

  m.def(
      "combine",
      [](const std::vector<py::dict>& students, const std::vector<double>& weights) {
        std::vector<ParameterSet> sets;
        sets.reserve(students.size());
        for (const auto& d : students) sets.push_back(to_parameter_set(d));
        std::vector<const ParameterSet*> ptrs;
        for (const auto& s : sets) ptrs.push_back(&s);
        return to_dict(combine(ptrs, weights));
      },
      py::arg("students"), py::arg("weights"),
      "Weighted parameter combination over named tensors");
  m.def(
      "fuse_back",
      [](const py::dict& student, const py::dict& gwm, double gamma) {
        return to_dict(fuse_back(to_parameter_set(student), to_parameter_set(gwm), gamma));
      },
      py::arg("student"), py::arg("gwm"), py::arg("gamma"));
  m.def(
      "parameter_cosine",
      [](const py::dict& a, const py::dict& b) {
        return parameter_cosine(to_parameter_set(a), to_parameter_set(b));
      },
      py::arg("a"), py::arg("b"));

  m.def(
      "faa", [](const DoubleArray& acc) { return faa(to_accuracy_matrix(acc)); }, py::arg("acc"),
      "Final average accuracy of a lower-triangular accuracy matrix");
  m.def(
      "frf", [](const DoubleArray& acc) { return frf(to_accuracy_matrix(acc)); }, py::arg("acc"));
  m.def(
      "ala", [](const DoubleArray& acc) { return ala(to_accuracy_matrix(acc)); }, py::arg("acc"));

  m.def(
      "write_dataset",
      [](const std::string& path, const DoubleArray& features, const std::vector<int>& labels,
         std::size_t num_classes) {
        RawDataset ds;
        ds.features = to_matrix(features);
        ds.labels = labels;
        ds.num_classes = num_classes;
        if (ds.labels.size() != ds.features.rows())
          throw ParameterError("label count must match feature rows");
        for (int y : ds.labels)
          if (y < 0 || static_cast<std::size_t>(y) >= num_classes)
            throw DataError("label out of range for the declared class count");
        write_binary_dataset(path, ds);
      },
      py::arg("path"), py::arg("features"), py::arg("labels"), py::arg("num_classes"),
      "Write a dataset in the binary stream format");
  m.def(
      "load_dataset",
      [](const std::string& path) {
        const RawDataset ds = load_binary_dataset(path);
        return py::make_tuple(to_array(ds.features), ds.labels, ds.num_classes);
      },
      py::arg("path"), "Load a binary dataset; returns (features, labels, num_classes)");

  m.attr("__version__") = "0.1.0";
}
