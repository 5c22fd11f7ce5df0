#include "symtuck/sym_tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace symtuck {

namespace {

void decode_index(Index linear, Index dim, int order, std::vector<Index>& digits) {
  digits.resize(static_cast<std::size_t>(order));
  for (int k = 0; k < order; ++k) {
    digits[static_cast<std::size_t>(k)] = linear % dim;
    linear /= dim;
  }
}

Index encode_index(const std::vector<Index>& digits, Index dim) {
  Index linear = 0;
  for (std::size_t k = digits.size(); k-- > 0;) linear = linear * dim + digits[k];
  return linear;
}

}  // namespace

Index dense_entry_count(int order, Index dim) {
  if (order < 2) throw OrderError("tensor order must be at least 2");
  if (dim < 1) throw ShapeError("tensor dimension must be at least 1");
  std::int64_t count = 1;
  for (int k = 0; k < order; ++k) {
    count *= static_cast<std::int64_t>(dim);
    if (count > kExplicitEntryBudget)
      throw BudgetError("explicit tensor would exceed the dense entry budget");
  }
  return static_cast<Index>(count);
}

DenseTensor::DenseTensor(std::vector<Index> dims, Vector data)
    : dims_(std::move(dims)), data_(std::move(data)) {
  Index expected = 1;
  for (Index d : dims_) {
    if (d < 1) throw ShapeError("tensor modes must be positive");
    expected *= d;
  }
  if (expected != data_.size()) throw ShapeError("tensor data does not match its shape");
}

Eigen::Map<const Matrix> DenseTensor::unfolded() const {
  const Index rows = dims_.front();
  return {data_.data(), rows, data_.size() / rows};
}

SymTensor::SymTensor(int order, Index dim, Vector entries)
    : order_(order), dim_(dim), entries_(std::move(entries)) {}

SymTensor::SymTensor(int order, Index dim)
    : SymTensor(order, dim, Vector::Zero(dense_entry_count(order, dim))) {}

SymTensor SymTensor::unchecked(int order, Index dim, Vector entries) {
  if (dense_entry_count(order, dim) != entries.size())
    throw ShapeError("entry array does not match order/dimension");
  return SymTensor(order, dim, std::move(entries));
}

SymTensor SymTensor::from_entries(int order, Index dim, Vector entries) {
  const Index count = dense_entry_count(order, dim);
  if (count != entries.size()) throw ShapeError("entry array does not match order/dimension");

  if (order <= 4) {
    std::vector<int> perm(static_cast<std::size_t>(order));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<int>> perms;
    do {
      perms.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));

    Vector out(count);
    std::vector<Index> digits, permuted(static_cast<std::size_t>(order));
    for (Index i = 0; i < count; ++i) {
      decode_index(i, dim, order, digits);
      double acc = 0.0;
      for (const auto& p : perms) {
        for (int k = 0; k < order; ++k)
          permuted[static_cast<std::size_t>(k)] = digits[static_cast<std::size_t>(p[static_cast<std::size_t>(k)])];
        acc += entries[encode_index(permuted, dim)];
      }
      out[i] = acc / static_cast<double>(perms.size());
    }
    return SymTensor(order, dim, std::move(out));
  }

  SymTensor candidate(order, dim, std::move(entries));
  if (!permutation_invariant(candidate, 1e-10))
    throw ShapeError("asymmetric entries rejected for order > 4");
  return candidate;
}

double SymTensor::at(const std::vector<Index>& index) const {
  return entries_[linear_index(index)];
}

Index SymTensor::linear_index(const std::vector<Index>& index) const {
  if (static_cast<int>(index.size()) != order_) throw ShapeError("index arity mismatch");
  for (Index i : index)
    if (i < 0 || i >= dim_) throw ShapeError("index out of range");
  return encode_index(index, dim_);
}

DenseTensor SymTensor::as_dense() const {
  return DenseTensor(std::vector<Index>(static_cast<std::size_t>(order_), dim_), entries_);
}

bool permutation_invariant(const SymTensor& x, double rtol) {
  const Index count = x.size();
  const double scale = std::max(1.0, x.entries().cwiseAbs().maxCoeff());
  const double tol = rtol * scale;
  std::vector<Index> digits, sorted;

  if (count <= 1'000'000) {
    for (Index i = 0; i < count; ++i) {
      decode_index(i, x.dim(), x.order(), digits);
      sorted = digits;
      std::sort(sorted.begin(), sorted.end());
      if (std::abs(x.entries()[i] - x.entries()[encode_index(sorted, x.dim())]) > tol)
        return false;
    }
    return true;
  }

  std::mt19937_64 rng(0xC0FFEEULL);
  std::uniform_int_distribution<Index> pick(0, x.dim() - 1);
  std::vector<Index> permuted(static_cast<std::size_t>(x.order()));
  for (int trial = 0; trial < 1000; ++trial) {
    digits.resize(static_cast<std::size_t>(x.order()));
    for (auto& d : digits) d = pick(rng);
    permuted = digits;
    std::shuffle(permuted.begin(), permuted.end(), rng);
    const double a = x.entries()[encode_index(digits, x.dim())];
    const double b = x.entries()[encode_index(permuted, x.dim())];
    if (std::abs(a - b) > tol) return false;
  }
  return true;
}

SymTensor sym_outer(const Vector& x, int order) {
  if (order < 2) throw OrderError("outer power needs order >= 2");
  const Index n = x.size();
  if (n < 1) throw ShapeError("outer power of an empty vector");
  dense_entry_count(order, n);

  Vector data = x;
  for (int k = 2; k <= order; ++k) {
    Matrix step = data * x.transpose();  // n^{k-1} x n
    data = Eigen::Map<const Vector>(step.data(), step.size());
  }
  return SymTensor::unchecked(order, n, std::move(data));
}

DenseTensor mode_products(const SymTensor& x, const std::vector<const Matrix*>& factors) {
  if (static_cast<int>(factors.size()) != x.order())
    throw ShapeError("one factor (or nullptr) required per mode");

  std::vector<Index> dims(static_cast<std::size_t>(x.order()), x.dim());
  Vector data = x.entries();
  for (const Matrix* f : factors) {
    const Index s0 = dims.front();
    const Index rest = data.size() / s0;
    Eigen::Map<const Matrix> t(data.data(), s0, rest);
    Matrix cycled;  // rest x m: trailing mode becomes the contracted one
    Index m;
    if (f != nullptr) {
      if (f->rows() != s0) throw ShapeError("factor row count does not match mode size");
      m = f->cols();
      cycled.noalias() = t.transpose() * (*f);
    } else {
      m = s0;
      cycled = t.transpose();
    }
    data = Eigen::Map<const Vector>(cycled.data(), cycled.size());
    dims.erase(dims.begin());
    dims.push_back(m);
  }
  return DenseTensor(std::move(dims), std::move(data));
}

SymTensor tucker_product(const SymTensor& x, const Matrix& y) {
  if (y.rows() != x.dim()) throw ShapeError("Tucker factor row count must equal tensor dimension");
  std::vector<const Matrix*> factors(static_cast<std::size_t>(x.order()), &y);
  DenseTensor out = mode_products(x, factors);
  return SymTensor::unchecked(x.order(), y.cols(), out.data());
}

Matrix matricize(const SymTensor& x) {
  return Eigen::Map<const Matrix>(x.entries().data(), x.dim(), x.size() / x.dim());
}

double inner(const SymTensor& a, const SymTensor& b) {
  if (a.order() != b.order() || a.dim() != b.dim())
    throw ShapeError("inner product needs matching order and dimension");
  return a.entries().dot(b.entries());
}

double norm(const SymTensor& a) { return a.entries().norm(); }

Matrix inner_all_but_first(const DenseTensor& a, const DenseTensor& b) {
  if (a.order() != b.order()) throw ShapeError("operands must have equal order");
  for (int k = 1; k < a.order(); ++k)
    if (a.dim(k) != b.dim(k)) throw ShapeError("trailing dimensions must agree");
  return a.unfolded() * b.unfolded().transpose();
}

Matrix elementwise_pow(const Matrix& m, int k) {
  if (k < 0) throw std::invalid_argument("elementwise power must be nonnegative");
  return m.array().pow(k).matrix();
}

Matrix symmetrize_matrix(const Matrix& m) {
  if (m.rows() != m.cols()) throw ShapeError("symmetrization needs a square matrix");
  return 0.5 * (m + m.transpose());
}

}  // namespace symtuck
