#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "symtuck/explicit_solver.hpp"
#include "symtuck/sym_tensor.hpp"

namespace symtuck::testing {

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Vector random_vector(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

inline Matrix random_matrix(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

inline SymTensor random_sym_tensor(std::mt19937_64& rng, int order, Index dim) {
  return SymTensor::from_entries(order, dim, random_vector(rng, dense_entry_count(order, dim)));
}

inline StiefelBasis random_stiefel(std::mt19937_64& rng, Index n, Index r) {
  return qr_retract(random_matrix(rng, n, r));
}

// Odometer over multi-indices in [0, dim)^order, first position fastest.
inline bool advance_index(std::vector<Index>& idx, Index dim) {
  for (auto& digit : idx) {
    if (++digit < dim) return true;
    digit = 0;
  }
  return false;
}

// Entrywise Tucker product by nested summation, independent of the
// library's contraction path.
inline Vector oracle_tucker_entries(const SymTensor& x, const Matrix& y) {
  const int d = x.order();
  const Index n = x.dim();
  const Index m = y.cols();
  Index out_size = 1;
  for (int k = 0; k < d; ++k) out_size *= m;

  Vector out = Vector::Zero(out_size);
  std::vector<Index> oidx(static_cast<std::size_t>(d), 0);
  Index flat_out = 0;
  do {
    std::vector<Index> jidx(static_cast<std::size_t>(d), 0);
    double acc = 0.0;
    do {
      double term = x.at(jidx);
      for (int k = 0; k < d; ++k)
        term *= y(jidx[static_cast<std::size_t>(k)], oidx[static_cast<std::size_t>(k)]);
      acc += term;
    } while (advance_index(jidx, n));
    out[flat_out++] = acc;
  } while (advance_index(oidx, m));
  return out;
}

inline double oracle_inner(const SymTensor& a, const SymTensor& b) {
  double acc = 0.0;
  for (Index i = 0; i < a.size(); ++i) acc += a.entries()[i] * b.entries()[i];
  return acc;
}

// <A, B>_{-1} by plain loops over a pair of order-3 tensors given as flat
// arrays with dims (m, t1, t2) and (mp, t1, t2), first index fastest.
inline Matrix oracle_inner_all_but_first3(const Vector& a, Index m, const Vector& b, Index mp,
                                          Index t1, Index t2) {
  Matrix z = Matrix::Zero(m, mp);
  for (Index i = 0; i < m; ++i)
    for (Index ip = 0; ip < mp; ++ip) {
      double acc = 0.0;
      for (Index j1 = 0; j1 < t1; ++j1)
        for (Index j2 = 0; j2 < t2; ++j2)
          acc += a[i + m * (j1 + t1 * j2)] * b[ip + mp * (j1 + t1 * j2)];
      z(i, ip) = acc;
    }
  return z;
}

inline double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace symtuck::testing
