// Truncated multivariate Taylor polynomials ("jets") used as the only scalar
// type of the engine. Every derivative the library needs is a coefficient
// extraction from a jet; nothing is differentiated numerically.
#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace projcomp {

class JetError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Monomial bookkeeping shared by all jets with the same (num_vars, order).
///
/// Monomials are stored in graded-lexicographic order, so the layout of order
/// k-1 is a prefix of the layout of order k. Truncation is therefore a prefix
/// copy, and differentiation maps an order-k jet onto the order-(k-1) prefix.
struct JetLayout {
  int num_vars = 0;
  int order = 0;
  std::vector<std::vector<int>> exponents;
  std::vector<int> degree;
  std::vector<double> multi_factorial;  // α!
  /// raise[v][i]: index of exponents[i] + e_v, or -1 if beyond the order.
  std::vector<std::vector<int>> raise;
  /// (i, j, k): monomial i times monomial j is monomial k.
  struct Product {
    int lhs, rhs, out;
  };
  std::vector<Product> products;
  std::map<std::vector<int>, int> index;

  std::size_t size() const { return exponents.size(); }

  /// Number of monomials of total degree <= k.
  std::size_t prefix_size(int k) const {
    std::size_t n = 0;
    while (n < degree.size() && degree[n] <= k) ++n;
    return n;
  }

  int find(const std::vector<int>& alpha) const {
    auto it = index.find(alpha);
    return it == index.end() ? -1 : it->second;
  }
};

namespace detail {

inline void append_degree(int num_vars, int remaining, int var, std::vector<int>& current,
                          std::vector<std::vector<int>>& out) {
  if (var == num_vars - 1) {
    current[var] = remaining;
    out.push_back(current);
    current[var] = 0;
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current[var] = e;
    append_degree(num_vars, remaining - e, var + 1, current, out);
  }
  current[var] = 0;
}

inline std::unique_ptr<JetLayout> build_layout(int num_vars, int order) {
  auto layout = std::make_unique<JetLayout>();
  layout->num_vars = num_vars;
  layout->order = order;
  std::vector<int> current(static_cast<std::size_t>(num_vars), 0);
  for (int d = 0; d <= order; ++d) {
    if (num_vars == 0) {
      if (d == 0) layout->exponents.push_back({});
      continue;
    }
    append_degree(num_vars, d, 0, current, layout->exponents);
  }
  const int m = static_cast<int>(layout->exponents.size());
  for (int i = 0; i < m; ++i) {
    const auto& a = layout->exponents[i];
    layout->index.emplace(a, i);
    int deg = 0;
    double fact = 1.0;
    for (int e : a) {
      deg += e;
      for (int t = 2; t <= e; ++t) fact *= t;
    }
    layout->degree.push_back(deg);
    layout->multi_factorial.push_back(fact);
  }
  layout->raise.assign(static_cast<std::size_t>(num_vars), std::vector<int>(m, -1));
  for (int v = 0; v < num_vars; ++v) {
    for (int i = 0; i < m; ++i) {
      auto a = layout->exponents[i];
      ++a[v];
      layout->raise[v][i] = layout->find(a);
    }
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (layout->degree[i] + layout->degree[j] > order) continue;
      std::vector<int> sum(static_cast<std::size_t>(num_vars));
      for (int v = 0; v < num_vars; ++v) sum[v] = layout->exponents[i][v] + layout->exponents[j][v];
      layout->products.push_back({i, j, layout->find(sum)});
    }
  }
  return layout;
}

}  // namespace detail

/// Layouts are built once per (num_vars, order) and never freed.
inline const JetLayout& jet_layout(int num_vars, int order) {
  if (num_vars < 0 || order < 0) throw JetError("jet layout: negative size");
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<JetLayout>> registry;
  std::lock_guard lock(mutex);
  auto& slot = registry[{num_vars, order}];
  if (!slot) slot = detail::build_layout(num_vars, order);
  return *slot;
}

/// Truncated Taylor polynomial of a scalar function at a basepoint.
///
/// coeff(α) holds ∂^α f / α!. Arithmetic is closed under truncation; two jets
/// combine only when their variable count and order agree.
class Jet {
 public:
  Jet() = default;

  static Jet constant(double value, int num_vars, int order) {
    Jet j(&jet_layout(num_vars, order));
    j.coeffs_[0] = value;
    return j;
  }

  /// seed_variable: the coordinate function x_index expanded at `value`.
  static Jet variable(int index, double value, int num_vars, int order) {
    if (index < 0 || index >= num_vars)
      throw JetError("seed_variable: index " + std::to_string(index) + " out of range");
    Jet j = constant(value, num_vars, order);
    if (order >= 1) j.coeffs_[1 + static_cast<std::size_t>(index)] = 1.0;
    return j;
  }

  bool valid() const { return layout_ != nullptr; }
  int num_vars() const { return layout_->num_vars; }
  int order() const { return layout_->order; }
  const JetLayout& layout() const { return *layout_; }
  double value() const { return coeffs_[0]; }
  std::span<const double> coeffs() const { return coeffs_; }

  double coeff(const std::vector<int>& alpha) const {
    check_index(alpha);
    const int i = layout_->find(alpha);
    return i < 0 ? 0.0 : coeffs_[static_cast<std::size_t>(i)];
  }

  /// Raw partial derivative ∂^α f at the basepoint (α! · coeff).
  double partial(const std::vector<int>& alpha) const {
    check_index(alpha);
    const int i = layout_->find(alpha);
    return coeffs_[static_cast<std::size_t>(i)] * layout_->multi_factorial[static_cast<std::size_t>(i)];
  }

  /// First partial ∂_var f at the basepoint.
  double partial(int var) const {
    if (layout_->order < 1) throw JetError("partial: jet order exhausted");
    return coeffs_[1 + static_cast<std::size_t>(var)];
  }

  /// ∂f/∂x_var as a jet of one lower order.
  Jet derivative(int var) const {
    if (var < 0 || var >= num_vars()) throw JetError("derivative: variable out of range");
    if (order() < 1) throw JetError("derivative: jet order exhausted");
    Jet out(&jet_layout(num_vars(), order() - 1));
    const auto& raise = layout_->raise[static_cast<std::size_t>(var)];
    for (std::size_t i = 0; i < out.coeffs_.size(); ++i) {
      const int k = raise[i];
      const double mult = layout_->exponents[static_cast<std::size_t>(k)][static_cast<std::size_t>(var)];
      out.coeffs_[i] = mult * coeffs_[static_cast<std::size_t>(k)];
    }
    return out;
  }

  Jet truncated(int new_order) const {
    if (new_order > order()) throw JetError("truncate: cannot raise jet order");
    if (new_order == order()) return *this;
    Jet out(&jet_layout(num_vars(), new_order));
    std::copy_n(coeffs_.begin(), out.coeffs_.size(), out.coeffs_.begin());
    return out;
  }

  Jet operator-() const {
    Jet out = *this;
    for (double& c : out.coeffs_) c = -c;
    return out;
  }

  Jet& operator+=(const Jet& b) {
    check_compatible(b);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += b.coeffs_[i];
    return *this;
  }
  Jet& operator-=(const Jet& b) {
    check_compatible(b);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= b.coeffs_[i];
    return *this;
  }
  Jet& operator+=(double s) {
    coeffs_[0] += s;
    return *this;
  }
  Jet& operator-=(double s) {
    coeffs_[0] -= s;
    return *this;
  }
  Jet& operator*=(double s) {
    for (double& c : coeffs_) c *= s;
    return *this;
  }
  Jet& operator/=(double s) {
    for (double& c : coeffs_) c /= s;
    return *this;
  }
  Jet& operator*=(const Jet& b) {
    *this = multiply(*this, b);
    return *this;
  }
  Jet& operator/=(const Jet& b) {
    *this = multiply(*this, reciprocal(b));
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b) { return multiply(a, b); }
  friend Jet operator/(const Jet& a, const Jet& b) { return multiply(a, reciprocal(b)); }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a -= s; }
  friend Jet operator-(double s, const Jet& a) { return -a + s; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a /= s; }
  friend Jet operator/(double s, const Jet& a) { return reciprocal(a) * s; }

  /// f(a) for f given by its Taylor coefficients f_k = f^(k)(a0)/k!.
  static Jet compose(const Jet& a, std::span<const double> series) {
    Jet delta = a;
    delta.coeffs_[0] = 0.0;
    const int k_max = a.order();
    Jet out = constant(series[static_cast<std::size_t>(k_max)], a.num_vars(), a.order());
    for (int k = k_max - 1; k >= 0; --k) {
      out = multiply(out, delta);
      out.coeffs_[0] += series[static_cast<std::size_t>(k)];
    }
    return out;
  }

  static Jet reciprocal(const Jet& a) {
    const double a0 = a.value();
    if (a0 == 0.0) throw JetError("division by a jet with zero constant term");
    std::vector<double> s(static_cast<std::size_t>(a.order()) + 1);
    double p = 1.0 / a0;
    for (auto& c : s) {
      c = p;
      p *= -1.0 / a0;
    }
    return compose(a, s);
  }

 private:
  explicit Jet(const JetLayout* layout) : layout_(layout), coeffs_(layout->size(), 0.0) {}

  void check_compatible(const Jet& b) const {
    if (!valid() || !b.valid()) throw JetError("operation on an empty jet");
    if (layout_ != b.layout_)
      throw JetError("jet shape mismatch: (" + std::to_string(num_vars()) + "," + std::to_string(order()) +
                     ") vs (" + std::to_string(b.num_vars()) + "," + std::to_string(b.order()) + ")");
  }

  void check_index(const std::vector<int>& alpha) const {
    if (static_cast<int>(alpha.size()) != num_vars()) throw JetError("multi-index has wrong length");
    int deg = 0;
    for (int e : alpha) {
      if (e < 0) throw JetError("negative multi-index entry");
      deg += e;
    }
    if (deg > order()) throw JetError("multi-index beyond jet order");
  }

  static Jet multiply(const Jet& a, const Jet& b) {
    a.check_compatible(b);
    Jet out(a.layout_);
    const double* x = a.coeffs_.data();
    const double* y = b.coeffs_.data();
    double* z = out.coeffs_.data();
    for (const auto& p : a.layout_->products) z[p.out] += x[p.lhs] * y[p.rhs];
    return out;
  }

  const JetLayout* layout_ = nullptr;
  std::vector<double> coeffs_;
};

// Elementary functions: Taylor coefficients of f at the value, composed with
// the nilpotent part of the argument.

inline Jet exp(const Jet& a) {
  std::vector<double> s(static_cast<std::size_t>(a.order()) + 1);
  const double e = std::exp(a.value());
  double fact = 1.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (k > 0) fact *= static_cast<double>(k);
    s[k] = e / fact;
  }
  return Jet::compose(a, s);
}

inline Jet log(const Jet& a) {
  const double a0 = a.value();
  if (!(a0 > 0.0)) throw JetError("log of a jet with non-positive value");
  std::vector<double> s(static_cast<std::size_t>(a.order()) + 1);
  s[0] = std::log(a0);
  for (std::size_t k = 1; k < s.size(); ++k)
    s[k] = ((k % 2 == 1) ? 1.0 : -1.0) / (static_cast<double>(k) * std::pow(a0, static_cast<double>(k)));
  return Jet::compose(a, s);
}

inline Jet sin(const Jet& a) {
  std::vector<double> s(static_cast<std::size_t>(a.order()) + 1);
  double fact = 1.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (k > 0) fact *= static_cast<double>(k);
    s[k] = std::sin(a.value() + static_cast<double>(k) * std::numbers::pi / 2) / fact;
  }
  return Jet::compose(a, s);
}

inline Jet cos(const Jet& a) {
  std::vector<double> s(static_cast<std::size_t>(a.order()) + 1);
  double fact = 1.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (k > 0) fact *= static_cast<double>(k);
    s[k] = std::cos(a.value() + static_cast<double>(k) * std::numbers::pi / 2) / fact;
  }
  return Jet::compose(a, s);
}

/// a^p for real p. Non-integer p needs a positive value.
inline Jet pow(const Jet& a, double p) {
  const double a0 = a.value();
  const bool integral = p == std::floor(p);
  if (!integral && !(a0 > 0.0)) throw JetError("pow: non-integer power of a non-positive jet");
  if (integral && p < 0 && a0 == 0.0) throw JetError("pow: negative power of a zero jet");
  std::vector<double> s(static_cast<std::size_t>(a.order()) + 1);
  double binom = 1.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (k > 0) binom *= (p - static_cast<double>(k - 1)) / static_cast<double>(k);
    const double e = p - static_cast<double>(k);
    s[k] = (binom == 0.0) ? 0.0 : binom * std::pow(a0, e);
  }
  return Jet::compose(a, s);
}

inline Jet sqrt(const Jet& a) {
  if (!(a.value() > 0.0)) throw JetError("sqrt of a jet with non-positive value");
  return pow(a, 0.5);
}

inline Jet square(const Jet& a) { return a * a; }

/// atan via the series of its derivative 1/(1+t²) about the value.
inline Jet atan(const Jet& a) {
  const int k = a.order();
  std::vector<double> s(static_cast<std::size_t>(k) + 1);
  s[0] = std::atan(a.value());
  if (k > 0) {
    const Jet t = Jet::variable(0, a.value(), 1, k - 1);
    const Jet d = 1.0 / (1.0 + t * t);
    for (int j = 0; j < k; ++j) s[static_cast<std::size_t>(j) + 1] = d.coeffs()[static_cast<std::size_t>(j)] / (j + 1);
  }
  return Jet::compose(a, s);
}

/// Seeds every coordinate of a point as an independent variable.
inline std::vector<Jet> seed_point(std::span<const double> point, int order) {
  const int n = static_cast<int>(point.size());
  std::vector<Jet> out;
  out.reserve(point.size());
  for (int i = 0; i < n; ++i) out.push_back(Jet::variable(i, point[static_cast<std::size_t>(i)], n, order));
  return out;
}

/// Lowest order among a set of jets.
inline int min_order(std::span<const Jet> jets) {
  int k = jets.empty() ? 0 : jets.front().order();
  for (const auto& j : jets) k = std::min(k, j.order());
  return k;
}

}  // namespace projcomp
