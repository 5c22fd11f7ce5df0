#include "symtuck/moments.hpp"

#include <cmath>

namespace symtuck {

SymTensor build_moment(const Matrix& samples, int order) {
  const Index n = samples.rows();
  const Index p = samples.cols();
  if (p < 1) throw ShapeError("moment needs at least one sample");
  const Index count = dense_entry_count(order, n);

  Vector acc = Vector::Zero(count);
  for (Index i = 0; i < p; ++i) acc += sym_outer(samples.col(i), order).entries();
  acc /= static_cast<double>(p);
  return SymTensor::unchecked(order, n, std::move(acc));
}

double NigParams::tail_gamma() const {
  if (!(alpha > std::abs(beta))) throw std::invalid_argument("NIG needs alpha > |beta|");
  return std::sqrt(alpha * alpha - beta * beta);
}

double NigParams::delta() const {
  const double g = tail_gamma();
  return g * g * g / (alpha * alpha);
}

double NigParams::mu() const { return -delta() * beta / tail_gamma(); }

double draw_inverse_gaussian(std::mt19937_64& rng, double mean, double shape) {
  // Michael-Schucany-Haas transformation with a uniform acceptance flip.
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double nu = normal(rng);
  const double y = nu * nu;
  const double x = mean + mean * mean * y / (2.0 * shape) -
                   mean / (2.0 * shape) * std::sqrt(4.0 * mean * shape * y + mean * mean * y * y);
  const double u = uniform(rng);
  if (u <= mean / (mean + x)) return x;
  return mean * mean / x;
}

double draw_nig(std::mt19937_64& rng, const NigParams& params) {
  const double g = params.tail_gamma();
  const double delta = params.delta();
  const double z = draw_inverse_gaussian(rng, delta / g, delta * delta);
  std::normal_distribution<double> normal(0.0, 1.0);
  return params.mu() + params.beta * z + std::sqrt(z) * normal(rng);
}

namespace {

void require_full_column_rank(const Matrix& b) {
  Eigen::ColPivHouseholderQR<Matrix> qr(b);
  if (qr.rank() < b.cols()) throw ShapeError("factor loading matrix must have full column rank");
}

}  // namespace

Matrix sample_factor_model(const FactorModel& model, Index count, std::mt19937_64& rng) {
  if (count < 1) throw ShapeError("sample count must be positive");
  require_full_column_rank(model.loadings);
  const Index n = model.dim();
  const Index r = model.factor_rank();

  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix out(n, count);
  Vector f(r);
  for (Index i = 0; i < count; ++i) {
    for (Index k = 0; k < r; ++k) f[k] = draw_nig(rng, model.nig);
    out.col(i) = model.loadings * f;
    if (model.sigma > 0)
      for (Index k = 0; k < n; ++k) out(k, i) += model.sigma * normal(rng);
  }
  return out;
}

Matrix sample_factor_model(const FactorModel& model, Index count) {
  std::mt19937_64 rng(model.seed);
  return sample_factor_model(model, count, rng);
}

double snr_inverse(const FactorModel& model) {
  const double spectral = model.loadings.operatorNorm();
  if (spectral <= 0) throw ShapeError("zero loading matrix");
  return model.sigma * std::sqrt(static_cast<double>(model.dim())) / spectral;
}

Matrix whiten(const Matrix& samples, double ridge_scale) {
  const Index n = samples.rows();
  const Index p = samples.cols();
  if (p < 1) throw ShapeError("whitening needs samples");

  Vector mean = samples.rowwise().mean();
  Matrix centered = samples.colwise() - mean;
  Matrix cov = (centered * centered.transpose()) / static_cast<double>(p);

  Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
  if (es.info() != Eigen::Success) throw NumericalError("covariance eigendecomposition failed");
  const Vector& evals = es.eigenvalues();
  const double ridge = ridge_scale * cov.trace() / static_cast<double>(n);
  const double floor = 1e-12 * std::max(evals.maxCoeff(), 0.0);

  Vector inv_sqrt(n);
  for (Index k = 0; k < n; ++k) {
    const double lifted = evals[k] + ridge;
    if (lifted <= floor)
      throw SingularCovarianceError("sample covariance is singular and the ridge is disabled");
    inv_sqrt[k] = 1.0 / std::sqrt(lifted);
  }
  Matrix transform = es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose();
  return transform * centered;
}

}  // namespace symtuck
