#include "ocilgwm/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ocilgwm/errors.hpp"

namespace ocilgwm {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (!a.same_shape(b)) {
    throw DimensionError(std::string(op) + ": shape mismatch (" + std::to_string(a.rows()) +
                         "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                         "x" + std::to_string(b.cols()) + ")");
  }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw DimensionError("Matrix: data length " + std::to_string(data_.size()) +
                         " does not match " + std::to_string(rows_) + "x" + std::to_string(cols_));
  }
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return Matrix();
  Matrix out(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != out.cols()) throw DimensionError("Matrix::from_rows: ragged rows");
    for (std::size_t c = 0; c < out.cols(); ++c) out(r, c) = rows[r][c];
  }
  return out;
}

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Matrix& Matrix::operator+=(const Matrix& other) {
  require_same_shape(*this, other, "Matrix::operator+=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  require_same_shape(*this, other, "Matrix::operator-=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) {
  a += b;
  return a;
}

Matrix operator-(Matrix a, const Matrix& b) {
  a -= b;
  return a;
}

Matrix operator*(double s, Matrix a) {
  a *= s;
  return a;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: inner dimensions differ (" + std::to_string(a.cols()) +
                         " vs " + std::to_string(b.rows()) + ")");
  }
  Matrix out(a.rows(), b.cols());
  // ikj order keeps the inner loop contiguous in both b and out.
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const double* brow = b.data() + k * b.cols();
      double* orow = out.data() + i * out.cols();
      for (std::size_t j = 0; j < b.cols(); ++j) orow[j] += aik * brow[j];
    }
  }
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix out(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(c, r) = a(r, c);
  return out;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "hadamard");
  Matrix out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] *= b.values()[i];
  return out;
}

std::vector<double> col_sums(const Matrix& a) {
  std::vector<double> out(a.cols(), 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out[c] += a(r, c);
  return out;
}

std::vector<std::size_t> argmax_rows(const Matrix& a) {
  std::vector<std::size_t> out(a.rows(), 0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    double best = a(r, 0);
    for (std::size_t c = 1; c < a.cols(); ++c) {
      if (a(r, c) > best) {
        best = a(r, c);
        out[r] = c;
      }
    }
  }
  return out;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (a.cols() != b.cols()) throw DimensionError("vstack: column counts differ");
  Matrix out(a.rows() + b.rows(), a.cols());
  std::copy(a.values().begin(), a.values().end(), out.values().begin());
  std::copy(b.values().begin(), b.values().end(), out.values().begin() + a.size());
  return out;
}

Matrix take_rows(const Matrix& a, std::size_t begin, std::size_t count) {
  if (begin + count > a.rows()) throw DimensionError("take_rows: range out of bounds");
  Matrix out(count, a.cols());
  std::copy(a.values().begin() + begin * a.cols(),
            a.values().begin() + (begin + count) * a.cols(), out.values().begin());
  return out;
}

Matrix softmax_temp(const Matrix& logits, double tau) {
  if (!(tau > 0.0)) throw ParameterError("softmax_temp: tau must be positive");
  Matrix out(logits.rows(), logits.cols());
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    double maxv = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < logits.cols(); ++c) maxv = std::max(maxv, logits(r, c) / tau);
    double sum = 0.0;
    for (std::size_t c = 0; c < logits.cols(); ++c) {
      const double e = std::exp(logits(r, c) / tau - maxv);
      out(r, c) = e;
      sum += e;
    }
    for (std::size_t c = 0; c < logits.cols(); ++c) out(r, c) /= sum;
  }
  return out;
}

Matrix log_softmax_temp(const Matrix& logits, double tau) {
  if (!(tau > 0.0)) throw ParameterError("log_softmax_temp: tau must be positive");
  Matrix out(logits.rows(), logits.cols());
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    double maxv = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < logits.cols(); ++c) maxv = std::max(maxv, logits(r, c) / tau);
    double sum = 0.0;
    for (std::size_t c = 0; c < logits.cols(); ++c) sum += std::exp(logits(r, c) / tau - maxv);
    const double log_sum = std::log(sum);
    for (std::size_t c = 0; c < logits.cols(); ++c) out(r, c) = logits(r, c) / tau - maxv - log_sum;
  }
  return out;
}

}  // namespace ocilgwm
