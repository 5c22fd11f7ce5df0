#pragma once

#include <cstdint>
#include <utility>

#include "symtuck/explicit_solver.hpp"
#include "symtuck/stream.hpp"
#include "symtuck/sym_tensor.hpp"

namespace symtuck {

// Column-wise AdaGrad accumulator: gamma_j tracks the root sum of squared
// column norms of all gradients seen so far.
struct AdaGradState {
  Vector gamma;
  double c = 1.0;

  static AdaGradState init(Index rank, double c, double gamma0 = 1e-5);
};

struct TwoPhaseConfig {
  int iters1 = 0;   // T1, HOEVD phase
  int iters2 = 0;   // T2, total iterations over both phases
  Index batch1 = 0;
  Index batch2 = 0;
  double c1 = 1.0;
  double c2 = 1.0;
  Index rank = 0;
  std::uint64_t seed = 0;
};

// (2d/b^2) X (X'QQ'X)^[d-1] X'Q: the stochastic gradient of the streamed
// Tucker cost, computed without forming any tensor.
Matrix implicit_gradient(const Matrix& batch, const StiefelBasis& q, int order);

// (2/b^2) X (X'X)^[d-1] X'Q = 2 mat(M) mat(M)' Q for the batch moment M.
Matrix hoevd_implicit_gradient(const Matrix& batch, const StiefelBasis& q, int order);

// (1/p^2) * grand sum of (X'QQ'X)^[d], evaluated in row blocks so the p x p
// Gram matrix is never materialized.
double batch_objective(const Matrix& samples, const StiefelBasis& q, int order);

// gamma_j <- sqrt(gamma_j^2 + ||G_j||^2); Q <- qr(Q + c * G ./ gamma).
std::pair<AdaGradState, StiefelBasis> adagrad_step(const AdaGradState& state, const Matrix& grad,
                                                   const StiefelBasis& q);

struct StreamTraceOptions {
  const Matrix* eval_pool = nullptr;        // held-out samples for the objective
  const StiefelBasis* reference = nullptr;  // ground-truth basis for subspace error
  int eval_every = 0;                       // 0 = final iterate only
};

struct ShoevdConfig {
  int iters = 0;
  Index batch = 0;
  double c = 1.0;
  Index rank = 0;
  std::uint64_t seed = 0;
};

// Streaming HOEVD: Gaussian init, per-batch implicit HOEVD gradients with
// column-wise AdaGrad.
std::pair<StiefelBasis, SolverTrace> s_hoevd(SampleStream& stream, const ShoevdConfig& cfg,
                                             int order,
                                             const StreamTraceOptions& trace_opts = {});

// Two-phase streaming solver: HOEVD initialization on the first T1 batches,
// then implicit PGD on the remaining T2 - T1.
std::pair<StiefelBasis, SolverTrace> scalable_pgd(SampleStream& stream, const TwoPhaseConfig& cfg,
                                                  int order,
                                                  const StreamTraceOptions& trace_opts = {});

// Core tensor from fresh data: (1/p_c) sum_i (Q' x_i)^{otimes d}.
SymTensor estimate_core(const StiefelBasis& q, const Matrix& fresh, int order);

}  // namespace symtuck
