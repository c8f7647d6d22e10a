#include "ocilgwm/losses.hpp"

#include <cmath>
#include <limits>

#include "ocilgwm/errors.hpp"

namespace ocilgwm {

void LossConfig::validate() const {
  if (!(tau > 0.0)) throw ParameterError("loss.tau must be > 0");
  if (lambda < 0.0) throw ParameterError("loss.lambda must be >= 0");
  if (baseline != "er") throw ParameterError("loss.baseline must be \"er\"");
}

CeResult ce_loss(const Matrix& logits, const std::vector<int>& labels, bool mean_reduce) {
  if (labels.size() != logits.rows())
    throw DimensionError("ce_loss: " + std::to_string(labels.size()) + " labels for " +
                         std::to_string(logits.rows()) + " rows");
  const Matrix log_p = log_softmax_temp(logits, 1.0);
  CeResult out;
  out.dlogits = softmax_temp(logits, 1.0);
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    const int y = labels[r];
    if (y < 0 || static_cast<std::size_t>(y) >= logits.cols())
      throw DataError("ce_loss: label " + std::to_string(y) + " out of range at row " +
                      std::to_string(r));
    if (std::isinf(logits(r, static_cast<std::size_t>(y))))
      throw DataError("ce_loss: label " + std::to_string(y) +
                      " is outside the observed class set at row " + std::to_string(r));
    out.loss -= log_p(r, static_cast<std::size_t>(y));
    out.dlogits(r, static_cast<std::size_t>(y)) -= 1.0;
  }
  if (mean_reduce && logits.rows() > 0) {
    const double inv = 1.0 / static_cast<double>(logits.rows());
    out.loss *= inv;
    out.dlogits *= inv;
  }
  return out;
}

namespace {

void require_simplex(const Matrix& m, const char* arg) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const double v = m(r, c);
      if (v < -1e-9 || !(v == v))
        throw DataError(std::string("kl_div: ") + arg + " row " + std::to_string(r) +
                        " has a negative or NaN entry");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw DataError(std::string("kl_div: ") + arg + " row " + std::to_string(r) +
                      " is not on the simplex (sum " + std::to_string(sum) + ")");
  }
}

}  // namespace

double kl_div(const Matrix& p, const Matrix& q) {
  if (!p.same_shape(q)) throw DimensionError("kl_div: shape mismatch");
  require_simplex(p, "p");
  require_simplex(q, "q");
  double loss = 0.0;
  for (std::size_t r = 0; r < p.rows(); ++r) {
    for (std::size_t c = 0; c < p.cols(); ++c) {
      const double pc = p(r, c);
      if (pc <= 0.0) continue;  // 0*ln0 := 0
      loss += pc * (std::log(pc) - std::log(q(r, c)));
    }
  }
  return loss;
}

KdResult kd_loss(const Matrix& student_logits, const Matrix& teacher_logits, double tau,
                 bool tau_squared) {
  if (!student_logits.same_shape(teacher_logits))
    throw DimensionError("kd_loss: student and teacher logit shapes differ");
  if (!(tau > 0.0)) throw ParameterError("kd_loss: tau must be > 0");

  const Matrix log_p = log_softmax_temp(student_logits, tau);
  const Matrix log_q = log_softmax_temp(teacher_logits, tau);
  const double scale = tau_squared ? tau * tau : 1.0;

  KdResult out;
  out.dstudent_logits = Matrix(student_logits.rows(), student_logits.cols());
  for (std::size_t r = 0; r < log_p.rows(); ++r) {
    // row KL first, then dz_k = (p_k / tau) * ((ln p_k - ln q_k) - KL_row)
    double row_kl = 0.0;
    for (std::size_t c = 0; c < log_p.cols(); ++c) {
      const double pc = std::exp(log_p(r, c));
      if (pc <= 0.0) continue;
      row_kl += pc * (log_p(r, c) - log_q(r, c));
    }
    out.loss += scale * row_kl;
    for (std::size_t c = 0; c < log_p.cols(); ++c) {
      const double pc = std::exp(log_p(r, c));
      if (pc <= 0.0) continue;  // masked or underflowed: no gradient
      out.dstudent_logits(r, c) =
          scale * pc / tau * ((log_p(r, c) - log_q(r, c)) - row_kl);
    }
  }
  return out;
}

KdResult kd_students(const Matrix& own_view_logits, const Matrix& peer_view_logits, double tau,
                     bool tau_squared) {
  if (own_view_logits.rows() != peer_view_logits.rows())
    throw ContractError("kd_students: view row counts differ (" +
                        std::to_string(own_view_logits.rows()) + " vs " +
                        std::to_string(peer_view_logits.rows()) + ")");
  return kd_loss(own_view_logits, peer_view_logits, tau, tau_squared);
}

KdResult kd_gwm(const Matrix& student_view_logits, const Matrix& gwm_view_logits, double tau,
                bool tau_squared) {
  if (student_view_logits.rows() != gwm_view_logits.rows())
    throw ContractError("kd_gwm: view row counts differ");
  return kd_loss(student_view_logits, gwm_view_logits, tau, tau_squared);
}

LossBreakdown mcd_total(const LossConfig& cfg, double baseline, double ce, double kd,
                        double gwmkd) {
  LossBreakdown b;
  b.baseline = baseline;
  b.ce = cfg.enable_kd ? ce : 0.0;
  b.kd = cfg.enable_kd ? kd : 0.0;
  b.gwmkd = cfg.enable_gwmkd ? gwmkd : 0.0;
  b.total = b.baseline + b.ce + b.kd + cfg.lambda * b.gwmkd;
  return b;
}

CeResult er_baseline_loss(const Matrix& logits, const std::vector<int>& labels,
                          bool mean_reduce) {
  return ce_loss(logits, labels, mean_reduce);
}

}  // namespace ocilgwm
