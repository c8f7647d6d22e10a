#pragma once

#include <cstddef>
#include <vector>

#include "ocilgwm/network.hpp"
#include "ocilgwm/stream.hpp"

namespace ocilgwm {

// Lower-triangular T x T accuracy record: at(l, j) is the accuracy on task j's
// test set after training through task l (0-based). Unset entries are NaN.
class AccuracyMatrix {
 public:
  AccuracyMatrix() = default;
  explicit AccuracyMatrix(std::size_t num_tasks);

  std::size_t num_tasks() const { return t_; }
  void set(std::size_t l, std::size_t j, double value);
  double at(std::size_t l, std::size_t j) const;
  bool has(std::size_t l, std::size_t j) const;

 private:
  std::size_t t_ = 0;
  std::vector<double> a_;
};

/// Accuracy on each task j <= up_to_task: every test sample is classified by
/// the argmax over the observed classes of the mean of the two students'
/// softmax probabilities (temperature 1 at inference).
std::vector<double> evaluate_tasks(const StudentModel& student1, const StudentModel& student2,
                                   const TaskStream& stream, std::size_t up_to_task);

/// Final average accuracy: mean of the last row. Requires the full last row.
double faa(const AccuracyMatrix& m);

/// Final relative forgetting: mean over tasks j of
///   max_{l in {j..T-1}} (a[l][j] - a[T-1][j]) / a[l][j],
/// skipping checkpoints with a[l][j] == 0 (0 if every checkpoint is 0).
/// Requires the full lower triangle.
double frf(const AccuracyMatrix& m);

/// Average learning accuracy: mean of the diagonal.
double ala(const AccuracyMatrix& m);

/// Mean over old samples of ||f(x; curr) - f(x; prev)||_2 on the feature
/// extractor. Throws ParameterError on an empty sample set.
double feature_drift(const MlpArchitecture& arch, const ParameterSet& prev_params,
                     const ParameterSet& curr_params, const Matrix& old_samples);

}  // namespace ocilgwm
