#include "symtuck/streaming_solver.hpp"

#include <chrono>
#include <cmath>
#include <random>

namespace symtuck {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void check_shapes(const Matrix& batch, const StiefelBasis& q, int order) {
  if (batch.rows() != q.rows()) throw ShapeError("batch and basis dimensions disagree");
  if (order < 2) throw OrderError("order must be at least 2");
}

// Entrywise k-th power; the small exponents of typical moment orders are
// unrolled to products instead of scalar pow calls.
Matrix entry_power(const Matrix& m, int k) {
  switch (k) {
    case 1:
      return m;
    case 2:
      return m.cwiseProduct(m);
    case 3:
      return m.cwiseProduct(m).cwiseProduct(m);
    default:
      return m.array().pow(k).matrix();
  }
}

struct StreamRecorder {
  const StreamTraceOptions& opts;
  SolverTrace& trace;
  Clock::time_point t0;
  int order;
  double elapsed_offset = 0.0;

  void record(int iter, int phase, const StiefelBasis& q, double step, bool final_iter) {
    const bool sampled =
        final_iter || (opts.eval_every > 0 && iter % opts.eval_every == 0);
    TraceRecord rec;
    rec.iter = iter;
    rec.phase = phase;
    rec.step = step;
    if (sampled && opts.eval_pool != nullptr) {
      const double f = batch_objective(*opts.eval_pool, q, order);
      rec.objective = f;
      if (f > 0) {
        Matrix g = implicit_gradient(*opts.eval_pool, q, order);
        rec.rel_grad = (g - q.matrix() * (q.matrix().transpose() * g)).norm() / f;
      }
    }
    if (sampled && opts.reference != nullptr) {
      const Matrix d = q.matrix() * q.matrix().transpose() -
                       opts.reference->matrix() * opts.reference->matrix().transpose();
      rec.subspace_error = d.norm();
    }
    rec.elapsed_s = elapsed_offset + seconds_since(t0);
    trace.records.push_back(rec);
  }
};

StiefelBasis gaussian_init(Index n, Index rank, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix q0(n, rank);
  for (Index j = 0; j < rank; ++j)
    for (Index i = 0; i < n; ++i) q0(i, j) = normal(rng);
  return qr_retract(q0);
}

}  // namespace

AdaGradState AdaGradState::init(Index rank, double c, double gamma0) {
  if (rank < 1) throw ShapeError("rank must be positive");
  if (c <= 0 || gamma0 <= 0) throw std::invalid_argument("step constants must be positive");
  AdaGradState state;
  state.gamma = Vector::Constant(rank, gamma0);
  state.c = c;
  return state;
}

Matrix implicit_gradient(const Matrix& batch, const StiefelBasis& q, int order) {
  check_shapes(batch, q, order);
  const double b = static_cast<double>(batch.cols());
  Matrix s = batch.transpose() * q.matrix();            // b x r
  Matrix k = s * s.transpose();                         // b x b
  Matrix kp = entry_power(k, order - 1);
  return (2.0 * order / (b * b)) * (batch * (kp * s));
}

Matrix hoevd_implicit_gradient(const Matrix& batch, const StiefelBasis& q, int order) {
  check_shapes(batch, q, order);
  const double b = static_cast<double>(batch.cols());
  Matrix k = batch.transpose() * batch;                 // b x b
  Matrix kp = entry_power(k, order - 1);
  return (2.0 / (b * b)) * (batch * (kp * (batch.transpose() * q.matrix())));
}

double batch_objective(const Matrix& samples, const StiefelBasis& q, int order) {
  check_shapes(samples, q, order);
  const Index p = samples.cols();
  Matrix s = samples.transpose() * q.matrix();          // p x r
  const Index block = 256;
  double sum = 0.0;
  for (Index i0 = 0; i0 < p; i0 += block) {
    const Index m = std::min(block, p - i0);
    Matrix rows = s.middleRows(i0, m) * s.transpose();  // m x p
    sum += entry_power(rows, order).sum();
  }
  const double dp = static_cast<double>(p);
  return sum / (dp * dp);
}

std::pair<AdaGradState, StiefelBasis> adagrad_step(const AdaGradState& state, const Matrix& grad,
                                                   const StiefelBasis& q) {
  if (grad.rows() != q.rows() || grad.cols() != q.cols())
    throw ShapeError("gradient and basis shapes disagree");
  if (state.gamma.size() != q.cols()) throw ShapeError("AdaGrad state rank mismatch");

  Vector colsq = grad.colwise().squaredNorm();
  if (colsq.sum() == 0.0) return {state, q};  // exact fixed point

  AdaGradState next;
  next.c = state.c;
  next.gamma = (state.gamma.array().square() + colsq.array()).sqrt();
  Matrix scaled = grad.array().rowwise() / next.gamma.transpose().array();
  StiefelBasis qn = qr_retract(q.matrix() + state.c * scaled);
  return {std::move(next), std::move(qn)};
}

std::pair<StiefelBasis, SolverTrace> s_hoevd(SampleStream& stream, const ShoevdConfig& cfg,
                                             int order, const StreamTraceOptions& trace_opts) {
  if (cfg.iters < 1) throw std::invalid_argument("iteration count must be positive");
  if (cfg.rank < 1 || cfg.rank > stream.dim()) throw ShapeError("rank must lie in [1, dim]");

  SolverTrace trace;
  StreamRecorder recorder{trace_opts, trace, Clock::now(), order};

  StiefelBasis q = gaussian_init(stream.dim(), cfg.rank, cfg.seed);
  AdaGradState state = AdaGradState::init(cfg.rank, cfg.c);
  for (int t = 1; t <= cfg.iters; ++t) {
    SampleBatch batch = stream.next(cfg.batch);
    Matrix g = hoevd_implicit_gradient(batch.data, q, order);
    std::tie(state, q) = adagrad_step(state, g, q);
    recorder.record(t, 1, q, state.c, t == cfg.iters);
  }
  return {std::move(q), std::move(trace)};
}

std::pair<StiefelBasis, SolverTrace> scalable_pgd(SampleStream& stream, const TwoPhaseConfig& cfg,
                                                  int order, const StreamTraceOptions& trace_opts) {
  if (cfg.iters1 < 1 || cfg.iters2 < cfg.iters1)
    throw std::invalid_argument("need 1 <= T1 <= T2");
  if (cfg.rank < 1 || cfg.rank > stream.dim()) throw ShapeError("rank must lie in [1, dim]");

  ShoevdConfig phase1{cfg.iters1, cfg.batch1, cfg.c1, cfg.rank, cfg.seed};
  auto [q, trace] = s_hoevd(stream, phase1, order, trace_opts);

  StreamRecorder recorder{trace_opts, trace, Clock::now(), order,
                          trace.records.empty() ? 0.0 : trace.records.back().elapsed_s};
  AdaGradState state = AdaGradState::init(cfg.rank, cfg.c2);
  for (int t = cfg.iters1 + 1; t <= cfg.iters2; ++t) {
    SampleBatch batch = stream.next(cfg.batch2);
    Matrix g = implicit_gradient(batch.data, q, order);
    std::tie(state, q) = adagrad_step(state, g, q);
    recorder.record(t, 2, q, state.c, t == cfg.iters2);
  }
  return {std::move(q), std::move(trace)};
}

SymTensor estimate_core(const StiefelBasis& q, const Matrix& fresh, int order) {
  if (fresh.rows() != q.rows()) throw ShapeError("fresh samples and basis dimensions disagree");
  Matrix projected = q.matrix().transpose() * fresh;  // r x p_c
  return build_moment(projected, order);
}

}  // namespace symtuck
