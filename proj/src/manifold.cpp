#include "symtuck/manifold.hpp"

#include <cmath>
#include <random>

#include "symtuck/streaming_solver.hpp"

namespace symtuck {

namespace {

double sym_defect(const Matrix& m) { return (m - m.transpose()).norm(); }

Matrix ad(const Matrix& p, const Matrix& s) { return p * s - s * p; }

// v(P)[dP] = d(d-1) <X.(I, dP, P,...,P), X.(I, I, P,...,P)>_{-1} P.
Matrix v_apply(const SymTensor& x, const Matrix& p, const Matrix& dp) {
  const int d = x.order();
  std::vector<const Matrix*> fa(static_cast<std::size_t>(d), &p);
  fa[0] = nullptr;
  fa[1] = &dp;
  std::vector<const Matrix*> fb(static_cast<std::size_t>(d), &p);
  fb[0] = nullptr;
  fb[1] = nullptr;
  DenseTensor a = mode_products(x, fa);
  DenseTensor b = mode_products(x, fb);
  return static_cast<double>(d) * (d - 1) * (a.unfolded() * b.unfolded().transpose()) * p;
}

}  // namespace

GrassmannPoint::GrassmannPoint(Matrix p) : p_(std::move(p)) {
  if (p_.rows() != p_.cols()) throw ShapeError("projector must be square");
  const double scale = std::max(1.0, p_.norm());
  if (sym_defect(p_) > 1e-9 * scale) throw ShapeError("projector must be symmetric");
  if ((p_ * p_ - p_).norm() > 1e-9 * scale) throw ShapeError("projector must be idempotent");
  const double tr = p_.trace();
  rank_ = static_cast<Index>(std::llround(tr));
  if (std::abs(tr - static_cast<double>(rank_)) > 1e-9 || rank_ < 1 || rank_ > p_.rows())
    throw ShapeError("projector trace must be an integer rank in [1, n]");
}

GrassmannPoint projector(const StiefelBasis& q) {
  Matrix p = q.matrix() * q.matrix().transpose();
  return GrassmannPoint(std::move(p), q.cols(), GrassmannPoint::Trusted{});
}

TangentVector::TangentVector(const GrassmannPoint& base, Matrix dp) : dp_(std::move(dp)) {
  if (dp_.rows() != base.n() || dp_.cols() != base.n())
    throw ShapeError("tangent vector size must match the base point");
  const double scale = std::max(1.0, dp_.norm());
  if (sym_defect(dp_) > 1e-9 * scale) throw ShapeError("tangent vector must be symmetric");
  const Matrix& p = base.matrix();
  if ((p * dp_ + dp_ * p - dp_).norm() > 1e-9 * scale)
    throw ShapeError("matrix is not tangent at the base point");
  if (std::abs(dp_.trace()) > 1e-9 * scale) throw ShapeError("tangent vector must be traceless");
}

TangentVector tangent_project(const GrassmannPoint& p, const Matrix& s) {
  if (s.rows() != p.n() || s.cols() != p.n()) throw ShapeError("input size must match the point");
  if (sym_defect(s) > 1e-9 * std::max(1.0, s.norm()))
    throw ShapeError("tangent projection needs a symmetric input");
  Matrix t = symmetrize_matrix(ad(p.matrix(), ad(p.matrix(), s)));
  return TangentVector(std::move(t), TangentVector::Trusted{});
}

Matrix w_matrix(const SymTensor& x, const GrassmannPoint& p) {
  if (p.n() != x.dim()) throw ShapeError("projector size must equal tensor dimension");
  const int d = x.order();
  std::vector<const Matrix*> factors(static_cast<std::size_t>(d), &p.matrix());
  factors[0] = nullptr;
  DenseTensor a = mode_products(x, factors);
  Matrix w = static_cast<double>(d) * (a.unfolded() * a.unfolded().transpose());
  return 0.5 * (w + w.transpose());
}

TangentVector riemannian_gradient_grassmann(const SymTensor& x, const GrassmannPoint& p) {
  const Matrix w = w_matrix(x, p);
  const Matrix& pm = p.matrix();
  Matrix g = symmetrize_matrix(2.0 * (Matrix::Identity(p.n(), p.n()) - pm) * w * pm);
  return TangentVector(std::move(g), TangentVector::Trusted{});
}

Matrix riemannian_gradient_from_basis(const SymTensor& x, const StiefelBasis& q) {
  Matrix grad = euclidean_gradient_explicit(x, q);
  Matrix g = (Matrix::Identity(q.rows(), q.rows()) - q.matrix() * q.matrix().transpose()) * grad *
             q.matrix().transpose();
  return 0.5 * (g + g.transpose());
}

double relative_gradient(const SymTensor& x, const StiefelBasis& q) {
  const double f = objective_explicit(x, q);
  if (f <= 0.0) throw UndefinedMetricError("relative gradient is undefined at zero objective");
  Matrix grad = euclidean_gradient_explicit(x, q);
  Matrix projected = grad - q.matrix() * (q.matrix().transpose() * grad);
  return projected.norm() / f;
}

double relative_gradient(const Matrix& batch, const StiefelBasis& q, int order) {
  const double f = batch_objective(batch, q, order);
  if (f <= 0.0) throw UndefinedMetricError("relative gradient is undefined at zero objective");
  Matrix grad = implicit_gradient(batch, q, order);
  Matrix projected = grad - q.matrix() * (q.matrix().transpose() * grad);
  return projected.norm() / f;
}

TangentVector hessian_apply(const SymTensor& x, const GrassmannPoint& p, const TangentVector& dp) {
  if (p.n() != x.dim()) throw ShapeError("projector size must equal tensor dimension");
  const Matrix& pm = p.matrix();
  const Matrix& d = dp.matrix();
  const Matrix w = w_matrix(x, p);
  const Matrix v = v_apply(x, pm, d);
  Matrix raw = (Matrix::Identity(p.n(), p.n()) - pm) * v + w * d * pm - d * w * pm;
  Matrix h = raw + raw.transpose();  // 2 sym(.)
  return TangentVector(std::move(h), TangentVector::Trusted{});
}

CriticalityReport certify_criticality(const SymTensor& x, const GrassmannPoint& p, double tol,
                                      std::uint64_t seed) {
  CriticalityReport report;
  report.tol = tol;
  const double scale = 1.0 + x.entries().squaredNorm();

  TangentVector grad = riemannian_gradient_grassmann(x, p);
  report.grad_norm = grad.matrix().norm();
  report.first_order = report.grad_norm <= tol * scale;

  // Largest Rayleigh quotient of the Hessian on the tangent space. A plain
  // power iteration locates the dominant eigenvalue; a second, spectrally
  // shifted run then converges to the top of the spectrum even when the
  // dominant eigenvalue is the most negative one.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Index n = p.n();

  auto random_tangent = [&]() {
    Matrix start(n, n);
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i <= j; ++i) start(i, j) = start(j, i) = normal(rng);
    return tangent_project(p, start).matrix();
  };

  auto hess = [&](const Matrix& t) {
    return hessian_apply(x, p, tangent_project(p, t)).matrix();
  };

  auto power = [&](double shift) {
    Matrix vec = random_tangent();
    if (vec.norm() < 1e-300) return 0.0;  // tangent space collapsed (n = r)
    vec /= vec.norm();
    double rayleigh = 0.0, prev = std::nan("");
    for (int it = 0; it < 200; ++it) {
      Matrix h = hess(vec);
      rayleigh = (h.array() * vec.array()).sum();
      if (it > 3 && std::abs(rayleigh - prev) <= 1e-8 * (1.0 + std::abs(rayleigh))) break;
      prev = rayleigh;
      Matrix next = tangent_project(p, h + shift * vec).matrix();
      const double nn = next.norm();
      if (nn < 1e-300) break;
      vec = next / nn;
    }
    return rayleigh;
  };

  const double dominant = power(0.0);
  const double shift = 1.05 * std::abs(dominant) + 1e-12 * scale;
  report.max_rayleigh = std::max(dominant, power(shift));
  return report;
}

double subspace_error(const StiefelBasis& q1, const StiefelBasis& q2) {
  if (q1.rows() != q2.rows() || q1.cols() != q2.cols())
    throw ShapeError("subspace error needs bases of equal shape");
  Matrix d = q1.matrix() * q1.matrix().transpose() - q2.matrix() * q2.matrix().transpose();
  return d.norm();
}

}  // namespace symtuck
