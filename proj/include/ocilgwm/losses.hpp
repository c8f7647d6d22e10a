#pragma once

#include <string>
#include <vector>

#include "ocilgwm/matrix.hpp"

namespace ocilgwm {

struct LossConfig {
  double tau = 4.0;      // shared distillation temperature
  double lambda = 0.5;   // weight of the workspace distillation term
  bool enable_kd = true;
  bool enable_fuse = true;
  bool enable_gwmkd = true;
  bool kd_tau_squared = false;  // classical tau^2 gradient rescaling, off by default
  bool mean_reduce = false;     // CE mean instead of summed reduction
  std::string baseline = "er";

  void validate() const;
};

// Per-student loss components for one batch.
// total == baseline + ce + kd + lambda*gwmkd, disabled terms exactly 0.
struct LossBreakdown {
  double ce = 0.0;
  double kd = 0.0;
  double gwmkd = 0.0;
  double baseline = 0.0;
  double total = 0.0;
};

struct CeResult {
  double loss = 0.0;
  Matrix dlogits;
};

/// Summed negative log softmax at the true class (mean_reduce divides by the
/// row count); dlogits = softmax - onehot per row. Logits are expected to be
/// masked to the observed class set; a label whose logit is masked (or out of
/// range) raises DataError.
CeResult ce_loss(const Matrix& logits, const std::vector<int>& labels, bool mean_reduce = false);

/// Sum over rows of sum_c p_c (ln p_c - ln q_c) with 0*ln0 := 0. Rows must lie
/// on the probability simplex within 1e-9 (DataError otherwise).
double kl_div(const Matrix& p, const Matrix& q);

struct KdResult {
  double loss = 0.0;
  Matrix dstudent_logits;
};

/// Row-aligned tempered KL D(p_student || p_teacher) summed over rows, with
/// p = softmax(z/tau). The teacher side is a constant (stop-gradient): the
/// returned gradient is w.r.t. the student logits only. tau_squared applies
/// the classical tau^2 rescaling to both loss and gradient.
KdResult kd_loss(const Matrix& student_logits, const Matrix& teacher_logits, double tau,
                 bool tau_squared = false);

/// Student-to-student distillation for one student: rows are its combined view
/// [B; h_m(B)] against the peer's [B; h_peer(B)]. Row counts must match
/// (ContractError otherwise).
KdResult kd_students(const Matrix& own_view_logits, const Matrix& peer_view_logits, double tau,
                     bool tau_squared = false);

/// Workspace-to-student distillation over the student's combined view; the
/// workspace logits are constants, so no gradient ever reaches its parameters.
KdResult kd_gwm(const Matrix& student_view_logits, const Matrix& gwm_view_logits, double tau,
                bool tau_squared = false);

/// Composes the overall per-student objective; each ablation flag zeroes its
/// term. The dual-view CE term belongs to the collaborative arm and is gated
/// by enable_kd, so with every flag off the total is the baseline loss alone.
LossBreakdown mcd_total(const LossConfig& cfg, double baseline, double ce, double kd,
                        double gwmkd);

/// Replay-baseline loss: plain CE over the baseline-augmented combined batch,
/// logits masked to the observed class set.
CeResult er_baseline_loss(const Matrix& logits, const std::vector<int>& labels,
                          bool mean_reduce = false);

}  // namespace ocilgwm
