#pragma once

#include <cstdint>
#include <random>

#include "symtuck/sym_tensor.hpp"
#include "symtuck/types.hpp"

namespace symtuck {

// (1/p) sum_i x_i^{otimes d} from samples stored as columns of an n x p
// matrix. Refuses to materialize more than the dense entry budget.
SymTensor build_moment(const Matrix& samples, int order);

// Normal-inverse Gaussian law as a normal variance-mean mixture with an
// inverse-Gaussian subordinator, standardized to zero mean / unit variance.
// alpha controls tails, beta skew (|beta| < alpha).
struct NigParams {
  double alpha = 2.0;
  double beta = 1.0;

  double tail_gamma() const;  // sqrt(alpha^2 - beta^2)
  double delta() const;       // scale fixing unit variance
  double mu() const;          // location fixing zero mean
};

double draw_inverse_gaussian(std::mt19937_64& rng, double mean, double shape);
double draw_nig(std::mt19937_64& rng, const NigParams& params);

// Linear factor model x = B f + eps with f coordinatewise NIG and
// eps ~ N(0, sigma^2 I).
struct FactorModel {
  Matrix loadings;  // B, n x r_true, full column rank
  double sigma = 0.0;
  NigParams nig;
  std::uint64_t seed = 0;

  Index dim() const { return loadings.rows(); }
  Index factor_rank() const { return loadings.cols(); }
};

// Draws `count` observations as columns; a fresh generator is seeded from
// the model, so equal seeds give identical batches.
Matrix sample_factor_model(const FactorModel& model, Index count);

// Continues an existing generator stream (used by generator-backed streams).
Matrix sample_factor_model(const FactorModel& model, Index count, std::mt19937_64& rng);

// sigma sqrt(n) / ||B||_2.
double snr_inverse(const FactorModel& model);

// Centers rows and maps the sample covariance to the identity. The ridge
// lambda = ridge_scale * trace(cov)/n guards near-singular covariances;
// pass ridge_scale = 0 to disable, in which case singular input throws.
Matrix whiten(const Matrix& samples, double ridge_scale = 1e-10);

}  // namespace symtuck
