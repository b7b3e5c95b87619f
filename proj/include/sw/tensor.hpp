#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sw/flops.hpp"
#include "sw/rng.hpp"

namespace sw {

using Shape = std::vector<int64_t>;

inline int64_t shape_numel(const Shape& shape) {
  int64_t n = 1;
  for (int64_t e : shape) {
    if (e <= 0) throw std::invalid_argument("tensor extents must be positive");
    n *= e;
  }
  return n;
}

inline std::string shape_str(const Shape& shape) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < shape.size(); ++i) os << (i ? "," : "") << shape[i];
  os << ")";
  return os.str();
}

/// Dense row-major array of float or double. The value type fixes the run's
/// storage precision; all dot-product style accumulations happen in double
/// regardless, so both precisions share one reduction order.
template <class T>
class Tensor {
  static_assert(std::is_floating_point_v<T>);

 public:
  Tensor() = default;
  explicit Tensor(Shape shape) : shape_(std::move(shape)), data_(shape_numel(shape_), T(0)) {}
  Tensor(Shape shape, std::vector<T> data) : shape_(std::move(shape)), data_(std::move(data)) {
    if (shape_numel(shape_) != static_cast<int64_t>(data_.size()))
      throw std::invalid_argument("tensor data length does not match shape");
  }

  static Tensor zeros(Shape shape) { return Tensor(std::move(shape)); }

  static Tensor full(Shape shape, T value) {
    Tensor t(std::move(shape));
    std::fill(t.data_.begin(), t.data_.end(), value);
    return t;
  }

  static Tensor from_rows(std::initializer_list<std::initializer_list<T>> rows) {
    int64_t m = static_cast<int64_t>(rows.size());
    int64_t n = static_cast<int64_t>(rows.begin()->size());
    Tensor t({m, n});
    int64_t i = 0;
    for (const auto& row : rows) {
      if (static_cast<int64_t>(row.size()) != n) throw std::invalid_argument("ragged rows");
      for (T v : row) t.data_[i++] = v;
    }
    return t;
  }

  static Tensor identity(int64_t n) {
    Tensor t({n, n});
    for (int64_t i = 0; i < n; ++i) t.data_[i * n + i] = T(1);
    return t;
  }

  static Tensor randn(Shape shape, Rng& rng, double scale = 1.0) {
    Tensor t(std::move(shape));
    for (auto& v : t.data_) v = static_cast<T>(rng.normal() * scale);
    return t;
  }

  const Shape& shape() const { return shape_; }
  int64_t dim(size_t i) const { return shape_.at(i); }
  int64_t ndim() const { return static_cast<int64_t>(shape_.size()); }
  int64_t numel() const { return static_cast<int64_t>(data_.size()); }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  T& operator[](int64_t i) { return data_[i]; }
  T operator[](int64_t i) const { return data_[i]; }

  T& at(int64_t i, int64_t j) { return data_[i * shape_[1] + j]; }
  T at(int64_t i, int64_t j) const { return data_[i * shape_[1] + j]; }

  /// Same storage under a new shape; element count must match.
  Tensor reshaped(Shape shape) const {
    if (shape_numel(shape) != numel()) throw std::invalid_argument("reshape changes element count");
    return Tensor(std::move(shape), data_);
  }

  template <class U>
  Tensor<U> cast() const {
    Tensor<U> out(shape_);
    for (int64_t i = 0; i < numel(); ++i) out[i] = static_cast<U>(data_[i]);
    return out;
  }

  bool all_finite() const {
    for (T v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  void require_finite(const char* what) const {
    if (!all_finite()) throw std::runtime_error(std::string("non-finite values in ") + what);
  }

 private:
  Shape shape_;
  std::vector<T> data_;
};

using Tensor32 = Tensor<float>;
using Tensor64 = Tensor<double>;

namespace detail {
inline void check_matmul_shapes(const Shape& a, const Shape& b) {
  if (a.size() != 2 || b.size() != 2)
    throw std::invalid_argument("matmul expects rank-2 tensors");
  if (a[1] != b[0])
    throw std::invalid_argument("matmul inner extents differ: " + shape_str(a) + " x " + shape_str(b));
}
}  // namespace detail

/// C = A * B with double accumulation, k-major inner loops so each output
/// element has a fixed summation order (bitwise reproducible under any
/// thread count). Reports 2*m*n*k multiply-adds to `counter` when given.
template <class T>
Tensor<T> matmul(const Tensor<T>& a, const Tensor<T>& b, FlopsCounter* counter = nullptr) {
  detail::check_matmul_shapes(a.shape(), b.shape());
  const int64_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  Tensor<T> c({m, n});
  const T* pa = a.data();
  const T* pb = b.data();
  T* pc = c.data();
#pragma omp parallel
  {
    std::vector<double> acc(static_cast<size_t>(n));
#pragma omp for schedule(static)
    for (int64_t i = 0; i < m; ++i) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (int64_t kk = 0; kk < k; ++kk) {
        const double av = static_cast<double>(pa[i * k + kk]);
        const T* brow = pb + kk * n;
        for (int64_t j = 0; j < n; ++j) acc[j] += av * static_cast<double>(brow[j]);
      }
      for (int64_t j = 0; j < n; ++j) pc[i * n + j] = static_cast<T>(acc[j]);
    }
  }
  if (counter) counter->add(2ull * static_cast<uint64_t>(m) * static_cast<uint64_t>(n) * static_cast<uint64_t>(k));
  c.require_finite("matmul output");
  return c;
}

/// Row-wise softmax with max subtraction. Input must be finite.
template <class T>
Tensor<T> softmax_rows(const Tensor<T>& a) {
  if (a.ndim() != 2) throw std::invalid_argument("softmax_rows expects a rank-2 tensor");
  a.require_finite("softmax_rows input");
  const int64_t m = a.dim(0), n = a.dim(1);
  Tensor<T> out({m, n});
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < m; ++i) {
    const T* row = a.data() + i * n;
    T* orow = out.data() + i * n;
    double mx = -std::numeric_limits<double>::infinity();
    for (int64_t j = 0; j < n; ++j) mx = std::max(mx, static_cast<double>(row[j]));
    double sum = 0.0;
    for (int64_t j = 0; j < n; ++j) {
      double e = std::exp(static_cast<double>(row[j]) - mx);
      orow[j] = static_cast<T>(e);
      sum += e;
    }
    const double inv = 1.0 / sum;
    for (int64_t j = 0; j < n; ++j) orow[j] = static_cast<T>(static_cast<double>(orow[j]) * inv);
  }
  return out;
}

template <class T>
Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b) {
  if (a.shape() != b.shape()) throw std::invalid_argument("add shape mismatch");
  Tensor<T> c(a.shape());
  for (int64_t i = 0; i < a.numel(); ++i) c[i] = a[i] + b[i];
  return c;
}

template <class T>
Tensor<T> sub(const Tensor<T>& a, const Tensor<T>& b) {
  if (a.shape() != b.shape()) throw std::invalid_argument("sub shape mismatch");
  Tensor<T> c(a.shape());
  for (int64_t i = 0; i < a.numel(); ++i) c[i] = a[i] - b[i];
  return c;
}

template <class T>
Tensor<T> scale(const Tensor<T>& a, T s) {
  Tensor<T> c(a.shape());
  for (int64_t i = 0; i < a.numel(); ++i) c[i] = a[i] * s;
  return c;
}

template <class T>
double sum(const Tensor<T>& a) {
  double s = 0.0;
  for (int64_t i = 0; i < a.numel(); ++i) s += static_cast<double>(a[i]);
  return s;
}

template <class T>
double max_abs_diff(const Tensor<T>& a, const Tensor<T>& b) {
  if (a.shape() != b.shape()) throw std::invalid_argument("max_abs_diff shape mismatch");
  double m = 0.0;
  for (int64_t i = 0; i < a.numel(); ++i)
    m = std::max(m, std::abs(static_cast<double>(a[i]) - static_cast<double>(b[i])));
  return m;
}

/// Central-difference gradient of a scalar function, 64-bit only:
/// g_i = (f(x + eps*e_i) - f(x - eps*e_i)) / (2*eps).
inline Tensor64 fd_gradient(const std::function<double(const Tensor64&)>& f, const Tensor64& x,
                            double eps) {
  if (!(eps > 0)) throw std::invalid_argument("fd_gradient requires eps > 0");
  Tensor64 grad(x.shape());
  Tensor64 probe = x;
  for (int64_t i = 0; i < x.numel(); ++i) {
    const double x0 = probe[i];
    probe[i] = x0 + eps;
    const double fp = f(probe);
    probe[i] = x0 - eps;
    const double fm = f(probe);
    probe[i] = x0;
    if (!std::isfinite(fp) || !std::isfinite(fm))
      throw std::runtime_error("fd_gradient: non-finite function evaluation");
    grad[i] = (fp - fm) / (2.0 * eps);
  }
  return grad;
}

}  // namespace sw
