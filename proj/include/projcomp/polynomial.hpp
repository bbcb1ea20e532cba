// Sparse multivariate polynomials with real coefficients. They carry the
// Christoffel symbols of projective structures so that base-manifold
// derivatives are exact before any jet is formed.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "projcomp/jet.hpp"

namespace projcomp {

class Polynomial {
 public:
  using Exponent = std::vector<int>;

  Polynomial() = default;
  explicit Polynomial(int num_vars) : num_vars_(num_vars) {}

  static Polynomial constant(int num_vars, double c) {
    Polynomial p(num_vars);
    p.add_term(Exponent(static_cast<std::size_t>(num_vars), 0), c);
    return p;
  }

  static Polynomial variable(int num_vars, int index) {
    Polynomial p(num_vars);
    Exponent e(static_cast<std::size_t>(num_vars), 0);
    e[static_cast<std::size_t>(index)] = 1;
    p.add_term(e, 1.0);
    return p;
  }

  int num_vars() const { return num_vars_; }
  const std::map<Exponent, double>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) {
      int s = 0;
      for (int x : e) s += x;
      d = std::max(d, s);
    }
    return d;
  }

  void add_term(const Exponent& e, double c) {
    if (static_cast<int>(e.size()) != num_vars_) throw std::invalid_argument("polynomial: exponent size mismatch");
    if (c == 0.0) return;
    auto& slot = terms_[e];
    slot += c;
    if (slot == 0.0) terms_.erase(e);
  }

  Polynomial derivative(int var) const {
    Polynomial out(num_vars_);
    for (const auto& [e, c] : terms_) {
      const int k = e[static_cast<std::size_t>(var)];
      if (k == 0) continue;
      Exponent f = e;
      --f[static_cast<std::size_t>(var)];
      out.add_term(f, c * k);
    }
    return out;
  }

  double operator()(std::span<const double> x) const {
    double sum = 0.0;
    for (const auto& [e, c] : terms_) {
      double t = c;
      for (int v = 0; v < num_vars_; ++v) t *= std::pow(x[static_cast<std::size_t>(v)], e[static_cast<std::size_t>(v)]);
      sum += t;
    }
    return sum;
  }

  /// Evaluation on jets; the result has the jets' common shape.
  Jet operator()(std::span<const Jet> x) const {
    if (static_cast<int>(x.size()) != num_vars_) throw std::invalid_argument("polynomial: wrong argument count");
    const Jet& proto = x.front();
    Jet sum = Jet::constant(0.0, proto.num_vars(), proto.order());
    std::vector<std::vector<Jet>> powers(static_cast<std::size_t>(num_vars_));
    auto power = [&](int v, int k) -> const Jet& {
      auto& cache = powers[static_cast<std::size_t>(v)];
      if (cache.empty()) cache.push_back(Jet::constant(1.0, proto.num_vars(), proto.order()));
      while (static_cast<int>(cache.size()) <= k) cache.push_back(cache.back() * x[static_cast<std::size_t>(v)]);
      return cache[static_cast<std::size_t>(k)];
    };
    for (const auto& [e, c] : terms_) {
      Jet t = Jet::constant(c, proto.num_vars(), proto.order());
      for (int v = 0; v < num_vars_; ++v)
        if (e[static_cast<std::size_t>(v)] > 0) t = t * power(v, e[static_cast<std::size_t>(v)]);
      sum += t;
    }
    return sum;
  }

  Polynomial& operator+=(const Polynomial& b) {
    check(b);
    for (const auto& [e, c] : b.terms_) add_term(e, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& b) {
    check(b);
    for (const auto& [e, c] : b.terms_) add_term(e, -c);
    return *this;
  }
  Polynomial& operator*=(double s) {
    if (s == 0.0) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check(b);
    Polynomial out(a.num_vars_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponent e = ea;
        for (std::size_t v = 0; v < e.size(); ++v) e[v] += eb[v];
        out.add_term(e, ca * cb);
      }
    return out;
  }

  /// Coefficientwise comparison.
  friend double max_coeff_diff(const Polynomial& a, const Polynomial& b) {
    double m = 0.0;
    for (const auto& [e, c] : (a - b).terms_) m = std::max(m, std::abs(c));
    return m;
  }

 private:
  void check(const Polynomial& b) const {
    if (b.num_vars_ != num_vars_) throw std::invalid_argument("polynomial: variable count mismatch");
  }

  int num_vars_ = 0;
  std::map<Exponent, double> terms_;
};

}  // namespace projcomp
