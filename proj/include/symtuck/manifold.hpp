#pragma once

#include <cstdint>

#include "symtuck/explicit_solver.hpp"
#include "symtuck/sym_tensor.hpp"

namespace symtuck {

// Rank-r orthogonal projector: symmetric, idempotent, trace r.
class GrassmannPoint {
 public:
  explicit GrassmannPoint(Matrix p);

  const Matrix& matrix() const { return p_; }
  Index n() const { return p_.rows(); }
  Index rank() const { return rank_; }

 private:
  struct Trusted {};
  GrassmannPoint(Matrix p, Index rank, Trusted) : p_(std::move(p)), rank_(rank) {}
  friend GrassmannPoint projector(const StiefelBasis& q);

  Matrix p_;
  Index rank_;
};

// Element of the tangent space at P: symmetric, traceless, and satisfying
// P dP + dP P = dP.
class TangentVector {
 public:
  TangentVector(const GrassmannPoint& base, Matrix dp);

  const Matrix& matrix() const { return dp_; }

 private:
  struct Trusted {};
  explicit TangentVector(Matrix dp, Trusted) : dp_(std::move(dp)) {}
  friend TangentVector tangent_project(const GrassmannPoint& p, const Matrix& s);
  friend TangentVector riemannian_gradient_grassmann(const SymTensor& x, const GrassmannPoint& p);
  friend TangentVector hessian_apply(const SymTensor& x, const GrassmannPoint& p,
                                     const TangentVector& dp);

  Matrix dp_;
};

GrassmannPoint projector(const StiefelBasis& q);

// pi_P(S) = ad_P(ad_P(S)) with ad_P(S) = PS - SP; the orthogonal projection
// of a symmetric matrix onto the tangent space at P.
TangentVector tangent_project(const GrassmannPoint& p, const Matrix& s);

// w(P) = d <X.(I,P,...,P), X.(I,P,...,P)>_{-1}, symmetric PSD.
Matrix w_matrix(const SymTensor& x, const GrassmannPoint& p);

// grad f(P) = sym(2 (I - P) w(P) P).
TangentVector riemannian_gradient_grassmann(const SymTensor& x, const GrassmannPoint& p);

// The same gradient through the basis route: sym((I - QQ') grad F(Q) Q').
Matrix riemannian_gradient_from_basis(const SymTensor& x, const StiefelBasis& q);

// ||(I - QQ') grad F(Q)|| / F(Q); throws UndefinedMetricError when F(Q) = 0.
double relative_gradient(const SymTensor& x, const StiefelBasis& q);

// Implicit variant over a sample batch.
double relative_gradient(const Matrix& batch, const StiefelBasis& q, int order);

// Hess f(P)[dP] = 2 sym((I-P) v(P)[dP] + w(P) dP P - dP w(P) P).
TangentVector hessian_apply(const SymTensor& x, const GrassmannPoint& p, const TangentVector& dp);

struct CriticalityReport {
  bool first_order = false;
  double grad_norm = 0.0;
  double max_rayleigh = 0.0;  // largest Rayleigh quotient of the Hessian
  double tol = 0.0;
};

// First-order test ||grad f|| <= tol (1 + ||X||^2); the largest Hessian
// Rayleigh quotient over the tangent space is estimated by shifted power
// iteration, so max_rayleigh <= tol (1 + ||X||^2) certifies second order.
CriticalityReport certify_criticality(const SymTensor& x, const GrassmannPoint& p, double tol,
                                      std::uint64_t seed = 0);

// Frobenius norm of Q1 Q1' - Q2 Q2'; rotation invariant.
double subspace_error(const StiefelBasis& q1, const StiefelBasis& q2);

}  // namespace symtuck
