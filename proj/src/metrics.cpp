#include "ocilgwm/metrics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ocilgwm/errors.hpp"

namespace ocilgwm {

AccuracyMatrix::AccuracyMatrix(std::size_t num_tasks)
    : t_(num_tasks), a_(num_tasks * num_tasks, std::numeric_limits<double>::quiet_NaN()) {}

void AccuracyMatrix::set(std::size_t l, std::size_t j, double value) {
  if (l >= t_ || j > l)
    throw ContractError("AccuracyMatrix::set: (" + std::to_string(l) + "," + std::to_string(j) +
                        ") is outside the lower triangle");
  if (!(value >= 0.0 && value <= 1.0))
    throw DataError("AccuracyMatrix::set: accuracy must be in [0, 1]");
  a_[l * t_ + j] = value;
}

double AccuracyMatrix::at(std::size_t l, std::size_t j) const {
  if (l >= t_ || j > l)
    throw ContractError("AccuracyMatrix::at: index outside the lower triangle");
  return a_[l * t_ + j];
}

bool AccuracyMatrix::has(std::size_t l, std::size_t j) const {
  return l < t_ && j <= l && !std::isnan(a_[l * t_ + j]);
}

std::vector<double> evaluate_tasks(const StudentModel& student1, const StudentModel& student2,
                                   const TaskStream& stream, std::size_t up_to_task) {
  if (up_to_task >= stream.num_tasks)
    throw ParameterError("evaluate_tasks: task index out of range");
  const std::vector<int> seen = stream.seen_classes(up_to_task);
  std::vector<double> row(up_to_task + 1, 0.0);
  for (std::size_t j = 0; j <= up_to_task; ++j) {
    const TaskData& td = stream.tasks[j];
    const Matrix p1 = softmax_temp(masked_logits(forward(student1, td.test_x).logits, seen), 1.0);
    const Matrix p2 = softmax_temp(masked_logits(forward(student2, td.test_x).logits, seen), 1.0);
    Matrix avg = p1;
    avg += p2;
    avg *= 0.5;
    const auto pred = argmax_rows(avg);
    std::size_t correct = 0;
    for (std::size_t r = 0; r < pred.size(); ++r)
      if (static_cast<int>(pred[r]) == td.test_y[r]) ++correct;
    row[j] = static_cast<double>(correct) / static_cast<double>(pred.size());
  }
  return row;
}

double faa(const AccuracyMatrix& m) {
  const std::size_t t = m.num_tasks();
  if (t == 0) throw ContractError("faa: empty accuracy matrix");
  double sum = 0.0;
  for (std::size_t j = 0; j < t; ++j) {
    if (!m.has(t - 1, j)) throw ContractError("faa: last row is incomplete");
    sum += m.at(t - 1, j);
  }
  return sum / static_cast<double>(t);
}

double frf(const AccuracyMatrix& m) {
  const std::size_t t = m.num_tasks();
  if (t == 0) throw ContractError("frf: empty accuracy matrix");
  double sum = 0.0;
  for (std::size_t j = 0; j < t; ++j) {
    if (!m.has(t - 1, j)) throw ContractError("frf: last row is incomplete");
    const double final_acc = m.at(t - 1, j);
    double f = 0.0;
    bool any = false;
    for (std::size_t l = j; l < t; ++l) {
      if (!m.has(l, j)) throw ContractError("frf: lower triangle is incomplete");
      const double ref = m.at(l, j);
      if (ref == 0.0) continue;  // ratio undefined; skip this checkpoint
      any = true;
      f = std::max(f, (ref - final_acc) / ref);
    }
    sum += any ? f : 0.0;
  }
  return sum / static_cast<double>(t);
}

double ala(const AccuracyMatrix& m) {
  const std::size_t t = m.num_tasks();
  if (t == 0) throw ContractError("ala: empty accuracy matrix");
  double sum = 0.0;
  for (std::size_t j = 0; j < t; ++j) {
    if (!m.has(j, j)) throw ContractError("ala: diagonal is incomplete");
    sum += m.at(j, j);
  }
  return sum / static_cast<double>(t);
}

double feature_drift(const MlpArchitecture& arch, const ParameterSet& prev_params,
                     const ParameterSet& curr_params, const Matrix& old_samples) {
  if (old_samples.rows() == 0) throw ParameterError("feature_drift: empty sample set");
  require_compatible(prev_params, curr_params, "feature_drift");
  const Matrix f_prev = mlp_forward(arch, prev_params, old_samples).features;
  const Matrix f_curr = mlp_forward(arch, curr_params, old_samples).features;
  double total = 0.0;
  for (std::size_t r = 0; r < old_samples.rows(); ++r) {
    double sq = 0.0;
    for (std::size_t c = 0; c < f_prev.cols(); ++c) {
      const double d = f_curr(r, c) - f_prev(r, c);
      sq += d * d;
    }
    total += std::sqrt(sq);
  }
  return total / static_cast<double>(old_samples.rows());
}

}  // namespace ocilgwm
