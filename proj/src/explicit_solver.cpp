#include "symtuck/explicit_solver.hpp"

#include <chrono>
#include <cmath>

namespace symtuck {

namespace {

double defect(const Matrix& q) {
  return (q.transpose() * q - Matrix::Identity(q.cols(), q.cols())).norm();
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

StiefelBasis::StiefelBasis(Matrix q) : q_(std::move(q)) {
  if (q_.rows() < q_.cols()) throw ShapeError("Stiefel basis needs rows >= cols");
  const double d = defect(q_);
  if (d > 1e-6) throw ShapeError("matrix is too far from orthonormal for a Stiefel basis");
  if (d > 1e-10) q_ = qr_retract(q_).matrix();
}

StiefelBasis qr_retract(const Matrix& m) {
  if (m.rows() < m.cols() || m.cols() < 1) throw ShapeError("retraction needs a tall matrix");
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ() * Matrix::Identity(m.rows(), m.cols());
  const auto& packed = qr.matrixQR();
  const double tol = 1e-13 * std::max(1.0, m.norm());
  for (Index j = 0; j < m.cols(); ++j) {
    const double rjj = packed(j, j);
    if (std::abs(rjj) <= tol) throw RetractionError("rank-deficient update in QR retraction");
    if (rjj < 0) q.col(j) = -q.col(j);
  }
  return StiefelBasis(std::move(q), StiefelBasis::Trusted{});
}

double objective_explicit(const SymTensor& x, const StiefelBasis& q) {
  if (q.rows() != x.dim()) throw ShapeError("basis rows must equal tensor dimension");
  return tucker_product(x, q.matrix()).entries().squaredNorm();
}

Matrix euclidean_gradient_explicit(const SymTensor& x, const StiefelBasis& q) {
  if (q.rows() != x.dim()) throw ShapeError("basis rows must equal tensor dimension");
  const int d = x.order();
  std::vector<const Matrix*> factors(static_cast<std::size_t>(d), &q.matrix());
  factors[0] = nullptr;
  DenseTensor a = mode_products(x, factors);          // n x r^{d-1} unfolded
  Matrix core = q.matrix().transpose() * a.unfolded();  // mat of X.(Q,...,Q)
  return 2.0 * d * (a.unfolded() * core.transpose());
}

std::pair<StiefelBasis, SolverTrace> pgd_explicit(const SymTensor& x, const StiefelBasis& q0,
                                                  const PgdOptions& opts) {
  if (q0.rows() != x.dim()) throw ShapeError("basis rows must equal tensor dimension");
  if (opts.max_iters < 1) throw std::invalid_argument("iteration count must be positive");

  const int d = x.order();
  const double norm2 = x.entries().squaredNorm();
  const double default_step =
      opts.fixed_step ? *opts.fixed_step : opts.step_c / (2.0 * d * std::max(norm2, 1e-300));

  const auto t0 = Clock::now();
  SolverTrace trace;
  StiefelBasis q = q0;
  std::vector<const Matrix*> factors(static_cast<std::size_t>(d), nullptr);

  // One mode-products sweep per iterate: unfolded X.(I,Q,..,Q) yields the
  // core (via Q' A), objective, and gradient together.
  auto evaluate = [&](const StiefelBasis& qc, double& f, Matrix& grad, double& rel_grad) {
    for (int k = 1; k < d; ++k) factors[static_cast<std::size_t>(k)] = &qc.matrix();
    DenseTensor a = mode_products(x, factors);
    Matrix core = qc.matrix().transpose() * a.unfolded();
    f = core.squaredNorm();
    if (!std::isfinite(f)) throw NumericalError("objective diverged");
    grad.noalias() = 2.0 * d * (a.unfolded() * core.transpose());
    Matrix projected = grad - qc.matrix() * (qc.matrix().transpose() * grad);
    rel_grad = f > 0 ? projected.norm() / f : projected.norm();
  };

  double f = 0.0, rel_grad = 0.0;
  Matrix grad;
  evaluate(q, f, grad, rel_grad);
  if (rel_grad < opts.tol) return {q, std::move(trace)};

  for (int t = 1; t <= opts.max_iters; ++t) {
    double gamma = default_step;
    if (!opts.step_schedule.empty())
      gamma = opts.step_schedule[static_cast<std::size_t>(
          std::min<std::size_t>(static_cast<std::size_t>(t) - 1, opts.step_schedule.size() - 1))];
    if (gamma <= 0) throw std::invalid_argument("step sizes must be positive");

    q = qr_retract(q.matrix() + gamma * grad);
    evaluate(q, f, grad, rel_grad);

    TraceRecord rec;
    rec.iter = t;
    rec.phase = 0;
    rec.objective = f;
    rec.rel_grad = rel_grad;
    rec.step = gamma;
    rec.elapsed_s = seconds_since(t0);
    trace.records.push_back(rec);
    if (rel_grad < opts.tol) break;
  }
  return {q, std::move(trace)};
}

StiefelBasis hoevd_explicit(const SymTensor& x, Index rank) {
  if (rank < 1 || rank > x.dim()) throw ShapeError("rank must lie in [1, dim]");
  Matrix flat = matricize(x);
  Matrix gram = flat * flat.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  Matrix q(x.dim(), rank);
  for (Index j = 0; j < rank; ++j) q.col(j) = es.eigenvectors().col(x.dim() - 1 - j);
  return qr_retract(q);
}

}  // namespace symtuck
