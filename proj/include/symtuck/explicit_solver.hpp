#pragma once

#include <optional>
#include <vector>

#include "symtuck/sym_tensor.hpp"
#include "symtuck/types.hpp"

namespace symtuck {

// n x r matrix with orthonormal columns. Construction re-orthonormalizes
// inputs with defect up to 1e-6 and rejects anything worse; afterwards
// ||Q'Q - I||_F <= 1e-10 holds.
class StiefelBasis {
 public:
  explicit StiefelBasis(Matrix q);

  const Matrix& matrix() const { return q_; }
  Index rows() const { return q_.rows(); }
  Index cols() const { return q_.cols(); }

 private:
  struct Trusted {};
  StiefelBasis(Matrix q, Trusted) : q_(std::move(q)) {}
  friend StiefelBasis qr_retract(const Matrix& m);

  Matrix q_;
};

// Orthonormal factor of the thin QR decomposition, sign-fixed so that all
// diagonal entries of R are positive. Throws RetractionError when the input
// is (numerically) rank deficient.
StiefelBasis qr_retract(const Matrix& m);

struct TraceRecord {
  int iter = 0;
  int phase = 0;  // 0 explicit, 1 streaming HOEVD, 2 streaming PGD
  std::optional<double> objective;
  std::optional<double> rel_grad;
  std::optional<double> subspace_error;
  double step = 0.0;
  double elapsed_s = 0.0;
};

struct SolverTrace {
  std::vector<TraceRecord> records;
};

struct PgdOptions {
  int max_iters = 1000;
  double step_c = 0.5;                     // gamma = step_c / (2 d ||X||^2)
  std::optional<double> fixed_step;        // overrides the formula
  std::vector<double> step_schedule;       // per-iteration gammas, overrides both
  double tol = 1e-10;                      // stop when relative gradient drops below
};

double objective_explicit(const SymTensor& x, const StiefelBasis& q);

// 2d <X.(I,Q,...,Q), X.(Q,...,Q)>_{-1}, an n x r matrix.
Matrix euclidean_gradient_explicit(const SymTensor& x, const StiefelBasis& q);

// Gradient ascent with QR retraction on the explicit tensor.
std::pair<StiefelBasis, SolverTrace> pgd_explicit(const SymTensor& x, const StiefelBasis& q0,
                                                  const PgdOptions& opts);

// Leading r eigenvectors of mat(X) mat(X)', eigenvalues non-increasing.
StiefelBasis hoevd_explicit(const SymTensor& x, Index rank);

}  // namespace symtuck
