#pragma once

#include <cstdint>
#include <vector>

#include "symtuck/streaming_solver.hpp"
#include "symtuck/types.hpp"

namespace symtuck {

// Area under the ROC curve via the Mann-Whitney rank statistic; tied scores
// receive averaged ranks. Throws DegenerateLabelsError when all labels are
// one class.
double roc_auc(const std::vector<double>& scores, const std::vector<int>& labels);

struct AnomalyDemoConfig {
  Index dim = 30;
  Index factor_rank = 3;
  Index rank = 3;
  double snr_inv = 1.0;
  Index samples = 15000;
  double outlier_fraction = 0.02;
  double outlier_scale = 5.0;
  Index batch = 50;
  int iters1 = 100;
  int iters2 = 300;
  double c1 = 0.35;
  double c2 = 0.5;
  std::uint64_t seed = 0;
};

struct AnomalyDemoResult {
  double auc_tucker = 0.0;  // two-phase decomposition of the whitened skewness
  double auc_hoevd = 0.0;   // streaming HOEVD of the whitened skewness
  double auc_pca = 0.0;     // eigenvectors of the raw covariance
  std::vector<double> scores_tucker;
  std::vector<double> scores_pca;
  std::vector<int> labels;
};

// Synthetic anomaly-scoring pipeline: a symmetric heavy-tailed factor
// background plus a small fraction of one-sided spike outliers in a
// direction outside the factor span (outlier_scale noise-sigmas strong).
// Each arm whitens, extracts a rank-r subspace (order-3 moment stream or
// covariance), whitens the projected coordinates, and scores samples by
// their l2 norm.
AnomalyDemoResult run_anomaly_demo(const AnomalyDemoConfig& cfg);

}  // namespace symtuck
