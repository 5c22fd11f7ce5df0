#include "symtuck/anomaly.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "symtuck/manifold.hpp"
#include "symtuck/moments.hpp"

namespace symtuck {

double roc_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size() || scores.empty())
    throw ShapeError("scores and labels must be equal-length and nonempty");
  const std::size_t n = scores.size();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  std::vector<double> rank(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
    i = j + 1;
  }

  std::size_t positives = 0;
  double rank_sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (labels[k] != 0) {
      ++positives;
      rank_sum += rank[k];
    }
  }
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0)
    throw DegenerateLabelsError("ROC-AUC needs both classes present");

  const double u = rank_sum - 0.5 * static_cast<double>(positives) *
                                  (static_cast<double>(positives) + 1.0);
  return u / (static_cast<double>(positives) * static_cast<double>(negatives));
}

namespace {

std::vector<double> column_norms(const Matrix& m) {
  std::vector<double> out(static_cast<std::size_t>(m.cols()));
  for (Index j = 0; j < m.cols(); ++j) out[static_cast<std::size_t>(j)] = m.col(j).norm();
  return out;
}

// l2 scores of the doubly-whitened projected coordinates.
std::vector<double> score_subspace(const Matrix& data, const StiefelBasis& q) {
  Matrix projected = q.matrix().transpose() * data;  // r x p
  Matrix rewhitened = whiten(projected);
  return column_norms(rewhitened);
}

}  // namespace

AnomalyDemoResult run_anomaly_demo(const AnomalyDemoConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  Matrix loadings(cfg.dim, cfg.factor_rank);
  for (Index j = 0; j < cfg.factor_rank; ++j)
    for (Index ii = 0; ii < cfg.dim; ++ii) loadings(ii, j) = normal(rng);
  const double sigma =
      cfg.snr_inv * loadings.operatorNorm() / std::sqrt(static_cast<double>(cfg.dim));

  // Anomalies are one-sided spikes along a direction outside the factor
  // span: invisible to the covariance (their variance share is noise-sized)
  // but the dominant source of third moments, since the background factors
  // are symmetric heavy-tailed here.
  Vector spike_dir = [&] {
    Vector u(cfg.dim);
    for (Index k = 0; k < cfg.dim; ++k) u[k] = normal(rng);
    StiefelBasis qb = qr_retract(loadings);
    u -= qb.matrix() * (qb.matrix().transpose() * u);
    return Vector(u / u.norm());
  }();

  NigParams nig{2.0, 0.0};  // symmetric background factors
  Matrix data(cfg.dim, cfg.samples);
  std::vector<int> labels(static_cast<std::size_t>(cfg.samples), 0);
  Vector f(cfg.factor_rank);
  for (Index s = 0; s < cfg.samples; ++s) {
    const bool outlier = uniform(rng) < cfg.outlier_fraction;
    labels[static_cast<std::size_t>(s)] = outlier ? 1 : 0;
    for (Index k = 0; k < cfg.factor_rank; ++k) f[k] = draw_nig(rng, nig);
    data.col(s) = loadings * f;
    if (outlier) data.col(s) += cfg.outlier_scale * std::abs(normal(rng)) * sigma * spike_dir;
    for (Index k = 0; k < cfg.dim; ++k) data(k, s) += sigma * normal(rng);
  }

  AnomalyDemoResult result;
  result.labels = labels;

  Matrix whitened = whiten(data);

  // Skewness arms: order-3 decomposition of the whitened stream.
  {
    PoolStream stream(whitened, cfg.batch);
    TwoPhaseConfig solver{cfg.iters1, cfg.iters2, cfg.batch, cfg.batch,
                          cfg.c1,     cfg.c2,     cfg.rank,  cfg.seed};
    auto [q, trace] = scalable_pgd(stream, solver, 3);
    result.scores_tucker = score_subspace(whitened, q);
    result.auc_tucker = roc_auc(result.scores_tucker, labels);
  }
  {
    PoolStream stream(whitened, cfg.batch);
    ShoevdConfig solver{cfg.iters1, cfg.batch, cfg.c1, cfg.rank, cfg.seed};
    auto [q, trace] = s_hoevd(stream, solver, 3);
    result.auc_hoevd = roc_auc(score_subspace(whitened, q), labels);
  }

  // Covariance arm. Whitening maps the sample covariance to the identity, so
  // the principal directions are read off the raw centered data instead.
  {
    Vector mean = data.rowwise().mean();
    Matrix centered = data.colwise() - mean;
    Matrix cov = (centered * centered.transpose()) / static_cast<double>(cfg.samples);
    Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
    Matrix q(cfg.dim, cfg.rank);
    for (Index j = 0; j < cfg.rank; ++j) q.col(j) = es.eigenvectors().col(cfg.dim - 1 - j);
    result.scores_pca = score_subspace(centered, qr_retract(q));
    result.auc_pca = roc_auc(result.scores_pca, labels);
  }

  return result;
}

}  // namespace symtuck
