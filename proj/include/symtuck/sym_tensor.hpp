#pragma once

#include <vector>

#include "symtuck/types.hpp"

namespace symtuck {

// Largest dense tensor the explicit path will materialize (entry count).
inline constexpr std::int64_t kExplicitEntryBudget = 100'000'000;

// Dense real tensor in a fixed linear layout, first index fastest.
// Holds the non-symmetric intermediates of mode-wise products.
class DenseTensor {
 public:
  DenseTensor(std::vector<Index> dims, Vector data);

  int order() const { return static_cast<int>(dims_.size()); }
  Index dim(int mode) const { return dims_[static_cast<std::size_t>(mode)]; }
  const std::vector<Index>& dims() const { return dims_; }
  const Vector& data() const { return data_; }
  Index size() const { return data_.size(); }

  // First mode as rows, remaining modes flattened as columns.
  Eigen::Map<const Matrix> unfolded() const;

 private:
  std::vector<Index> dims_;
  Vector data_;
};

// Order-d dimension-n symmetric tensor stored as a full dense array of
// n^d entries, first index fastest. Entries are invariant under index
// permutation; construction enforces or certifies this.
class SymTensor {
 public:
  SymTensor(int order, Index dim);  // zero tensor

  // Symmetrizes by averaging over all d! index permutations when d <= 4;
  // for d > 4 the input must already be symmetric (relative tol 1e-10).
  static SymTensor from_entries(int order, Index dim, Vector entries);

  // Adopts entries verbatim. For builders whose output is symmetric by
  // construction (outer powers, Tucker products, moment sums).
  static SymTensor unchecked(int order, Index dim, Vector entries);

  int order() const { return order_; }
  Index dim() const { return dim_; }
  const Vector& entries() const { return entries_; }
  Index size() const { return entries_.size(); }

  double at(const std::vector<Index>& index) const;
  Index linear_index(const std::vector<Index>& index) const;

  DenseTensor as_dense() const;

 private:
  SymTensor(int order, Index dim, Vector entries);

  int order_;
  Index dim_;
  Vector entries_;
};

// n^d with overflow/budget guard.
Index dense_entry_count(int order, Index dim);

// Exhaustive permutation-invariance check when n^d <= 1e6, otherwise 1000
// sampled index/permutation pairs (fixed sampling seed).
bool permutation_invariant(const SymTensor& x, double rtol = 1e-10);

SymTensor sym_outer(const Vector& x, int order);

// X . (Y, ..., Y) with Y an n x m matrix; output order d, dimension m.
SymTensor tucker_product(const SymTensor& x, const Matrix& y);

// Mode-wise products with per-mode factors; nullptr means identity.
// Factor k must have dim(k) rows; output mode k has factors[k]->cols()
// columns. Mode order is preserved.
DenseTensor mode_products(const SymTensor& x, const std::vector<const Matrix*>& factors);

// n x n^{d-1} unfolding; column of (i_1,...,i_d) is sum_{l>=2} i_l n^{l-2}
// (0-based), row is i_1.
Matrix matricize(const SymTensor& x);

double inner(const SymTensor& a, const SymTensor& b);
double norm(const SymTensor& a);

// <A, B>_{-1}: contraction over all modes but the first. Trailing dims of
// the operands must agree; result is m1 x m1'.
Matrix inner_all_but_first(const DenseTensor& a, const DenseTensor& b);

Matrix elementwise_pow(const Matrix& m, int k);

Matrix symmetrize_matrix(const Matrix& m);

}  // namespace symtuck
