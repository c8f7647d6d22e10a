#pragma once

#include <cstddef>
#include <vector>

namespace ocilgwm {

// Dense row-major matrix of doubles. The batch dimension is always rows, so a
// mini-batch forward pass is a single matmul.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::vector<double>& values() { return data_; }
  const std::vector<double>& values() const { return data_; }

  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  bool all_finite() const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(double s, Matrix a);

/// Standard matrix product; throws DimensionError on a.cols != b.rows.
Matrix matmul(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& a);

/// Elementwise product.
Matrix hadamard(const Matrix& a, const Matrix& b);

/// Sum over rows, one value per column (shape 1 x cols as vector).
std::vector<double> col_sums(const Matrix& a);

/// Index of the largest entry in each row (first on ties).
std::vector<std::size_t> argmax_rows(const Matrix& a);

/// Stacks b below a (column counts must match).
Matrix vstack(const Matrix& a, const Matrix& b);

/// Copy of rows [begin, begin+count).
Matrix take_rows(const Matrix& a, std::size_t begin, std::size_t count);

/// Row-wise tempered softmax p_c = exp(z_c/tau) / sum_j exp(z_j/tau),
/// computed with max-subtraction. -inf entries (masked logits) map to 0.
Matrix softmax_temp(const Matrix& logits, double tau);

/// Row-wise log of the tempered softmax, computed in log space (never as
/// log(softmax)). -inf entries stay -inf.
Matrix log_softmax_temp(const Matrix& logits, double tau);

}  // namespace ocilgwm
