// Dense multi-index arrays and the small amount of linear algebra the engine
// needs over jets (inverse, determinant) and over doubles.
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "projcomp/jet.hpp"

namespace projcomp {

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class S>
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::vector<int> shape, const S& fill) : shape_(std::move(shape)) {
    std::size_t n = 1;
    for (int d : shape_) n *= static_cast<std::size_t>(d);
    data_.assign(n, fill);
  }

  /// rank indices, each ranging over dim.
  static Tensor cube(int rank, int dim, const S& fill) { return Tensor(std::vector<int>(rank, dim), fill); }

  int rank() const { return static_cast<int>(shape_.size()); }
  int dim(int slot = 0) const { return shape_[static_cast<std::size_t>(slot)]; }
  const std::vector<int>& shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }
  std::vector<S>& data() { return data_; }
  const std::vector<S>& data() const { return data_; }

  template <class... I>
  S& operator()(I... idx) {
    return data_[offset(static_cast<int>(idx)...)];
  }
  template <class... I>
  const S& operator()(I... idx) const {
    return data_[offset(static_cast<int>(idx)...)];
  }

  S& at(const std::vector<int>& idx) { return data_[offset_vec(idx)]; }
  const S& at(const std::vector<int>& idx) const { return data_[offset_vec(idx)]; }

  /// Multi-index of a flat position.
  std::vector<int> unflatten(std::size_t flat) const {
    std::vector<int> idx(shape_.size());
    for (int s = rank() - 1; s >= 0; --s) {
      idx[static_cast<std::size_t>(s)] = static_cast<int>(flat % static_cast<std::size_t>(shape_[static_cast<std::size_t>(s)]));
      flat /= static_cast<std::size_t>(shape_[static_cast<std::size_t>(s)]);
    }
    return idx;
  }

  template <class F>
  auto map(F&& f) const {
    using R = decltype(f(std::declval<const S&>()));
    Tensor<R> out;
    out.shape_ = shape_;
    out.data_.reserve(data_.size());
    for (const auto& v : data_) out.data_.push_back(f(v));
    return out;
  }

 private:
  template <class U>
  friend class Tensor;

  template <class... I>
  std::size_t offset(I... idx) const {
    const int ids[] = {idx...};
    std::size_t off = 0;
    for (std::size_t s = 0; s < sizeof...(I); ++s) off = off * static_cast<std::size_t>(shape_[s]) + static_cast<std::size_t>(ids[s]);
    return off;
  }
  std::size_t offset_vec(const std::vector<int>& idx) const {
    std::size_t off = 0;
    for (std::size_t s = 0; s < idx.size(); ++s) off = off * static_cast<std::size_t>(shape_[s]) + static_cast<std::size_t>(idx[s]);
    return off;
  }

  std::vector<int> shape_;
  std::vector<S> data_;
};

using JetTensor = Tensor<Jet>;
using RealTensor = Tensor<double>;

inline RealTensor values(const JetTensor& t) {
  return t.map([](const Jet& j) { return j.value(); });
}

inline int min_order(const JetTensor& t) { return min_order(std::span<const Jet>(t.data())); }

inline JetTensor truncated(const JetTensor& t, int order) {
  return t.map([order](const Jet& j) { return j.truncated(order); });
}

/// ∂_var applied to every component (one order lower).
inline JetTensor derivative(const JetTensor& t, int var) {
  return t.map([var](const Jet& j) { return j.derivative(var); });
}

inline double max_abs(const RealTensor& t) {
  double m = 0.0;
  for (double v : t.data()) m = std::max(m, std::abs(v));
  return m;
}

inline double max_abs_diff(const RealTensor& a, const RealTensor& b) {
  if (a.shape() != b.shape()) throw std::invalid_argument("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

inline Eigen::MatrixXd to_matrix(const RealTensor& t) {
  Eigen::MatrixXd m(t.dim(0), t.dim(1));
  for (int i = 0; i < t.dim(0); ++i)
    for (int j = 0; j < t.dim(1); ++j) m(i, j) = t(i, j);
  return m;
}

inline RealTensor from_matrix(const Eigen::MatrixXd& m) {
  RealTensor t({static_cast<int>(m.rows()), static_cast<int>(m.cols())}, 0.0);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) t(i, j) = m(i, j);
  return t;
}

/// Inverse of a square jet matrix by Gauss-Jordan elimination with partial
/// pivoting on the value coefficients.
inline JetTensor inverse(const JetTensor& m) {
  const int n = m.dim(0);
  if (m.rank() != 2 || m.dim(1) != n) throw std::invalid_argument("inverse: not a square matrix");
  const Jet& proto = m(0, 0);
  const Jet zero = Jet::constant(0.0, proto.num_vars(), proto.order());
  JetTensor a = m;
  JetTensor inv = JetTensor::cube(2, n, zero);
  for (int i = 0; i < n; ++i) inv(i, i) = zero + 1.0;
  double scale = 0.0;
  for (const auto& j : m.data()) scale = std::max(scale, std::abs(j.value()));
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col).value()) > std::abs(a(piv, col).value())) piv = r;
    if (!(std::abs(a(piv, col).value()) > 1e-14 * std::max(scale, 1e-300)))
      throw GeometryError("inverse: singular matrix");
    if (piv != col)
      for (int c = 0; c < n; ++c) {
        std::swap(a(col, c), a(piv, c));
        std::swap(inv(col, c), inv(piv, c));
      }
    const Jet rp = Jet::reciprocal(a(col, col));
    for (int c = 0; c < n; ++c) {
      a(col, c) = a(col, c) * rp;
      inv(col, c) = inv(col, c) * rp;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const Jet f = a(r, col);
      if (f.value() == 0.0 && std::all_of(f.coeffs().begin(), f.coeffs().end(), [](double v) { return v == 0.0; }))
        continue;
      for (int c = 0; c < n; ++c) {
        a(r, c) -= f * a(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  return inv;
}

inline double determinant(const RealTensor& m) { return to_matrix(m).determinant(); }

/// Real eigenvalues of a real square matrix, sorted. Imaginary parts above tol
/// raise GeometryError.
inline std::vector<double> real_eigenvalues(const RealTensor& m, double tol = 1e-8) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(to_matrix(m), false);
  std::vector<double> out;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const auto ev = es.eigenvalues()(i);
    if (std::abs(ev.imag()) > tol * std::max(1.0, std::abs(ev.real())))
      throw GeometryError("real_eigenvalues: complex eigenvalue");
    out.push_back(ev.real());
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<double> symmetric_eigenvalues(const RealTensor& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_matrix(m));
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return out;
}

}  // namespace projcomp
