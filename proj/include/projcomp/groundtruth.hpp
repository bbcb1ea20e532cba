// Jet engine against finite differences on random composite functions.
// Everything except the jet evaluation itself works on doubles.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <vector>

#include "projcomp/field.hpp"
#include "projcomp/jet.hpp"

namespace projcomp::fdcheck {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

/// Fourth-order central first-derivative stencil, nested once per entry of
/// `alpha` (a multi-index).
inline double fd_partial(const std::function<double(const Point&)>& f, const Point& p, const std::vector<int>& alpha,
                         double h) {
  int var = -1;
  for (std::size_t v = 0; v < alpha.size(); ++v)
    if (alpha[v] > 0) {
      var = static_cast<int>(v);
      break;
    }
  if (var < 0) return f(p);
  std::vector<int> rest = alpha;
  --rest[static_cast<std::size_t>(var)];
  auto shifted = [&](double s) {
    Point q = p;
    q[static_cast<std::size_t>(var)] += s * h;
    return fd_partial(f, q, rest, h);
  };
  return (-shifted(2) + 8 * shifted(1) - 8 * shifted(-1) + shifted(-2)) / (12 * h);
}

/// One Richardson step on top of the O(h⁴) stencil. A single stencil at
/// h = 1e-2 misses about 1% of random third partials by more than 1e-5.
inline double fd_partial_richardson(const std::function<double(const Point&)>& f, const Point& p,
                                    const std::vector<int>& alpha, double h = 5e-3) {
  const double a = fd_partial(f, p, alpha, h), b = fd_partial(f, p, alpha, h / 2);
  return (16 * b - a) / 15;
}

/// All multi-indices of total degree 1..order in num_vars variables.
inline std::vector<std::vector<int>> multi_indices(int num_vars, int order) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(num_vars), 0);
  std::function<void(int, int)> rec = [&](int v, int left) {
    if (v == num_vars) {
      int d = 0;
      for (int c : cur) d += c;
      if (d > 0) out.push_back(cur);
      return;
    }
    for (int e = 0; e <= left; ++e) {
      cur[static_cast<std::size_t>(v)] = e;
      rec(v + 1, left - e);
    }
    cur[static_cast<std::size_t>(v)] = 0;
  };
  rec(0, order);
  return out;
}

/// Random expression tree, evaluable on doubles and on jets.
struct Expr {
  enum Kind { var, cst, add, sub, mul, div, sin_, cos_, exp_, log_, sqrt_, powc } kind = cst;
  int index = 0;
  double value = 0.0;
  std::shared_ptr<Expr> a, b;

  template <class S>
  S eval(const std::vector<S>& x) const {
    using std::cos, std::exp, std::log, std::sin, std::sqrt, std::pow;
    using projcomp::cos, projcomp::exp, projcomp::log, projcomp::sin, projcomp::sqrt, projcomp::pow;
    switch (kind) {
      case var:
        return x[static_cast<std::size_t>(index)];
      case cst:
        return x[0] * 0.0 + value;
      case add:
        return a->eval(x) + b->eval(x);
      case sub:
        return a->eval(x) - b->eval(x);
      case mul:
        return a->eval(x) * b->eval(x);
      case div: {
        // 1.5 + u² keeps poles away
        const S u = b->eval(x);
        return a->eval(x) / (u * u + 1.5);
      }
      case sin_:
        return sin(a->eval(x));
      case cos_:
        return cos(a->eval(x));
      case exp_:
        return exp(sin(a->eval(x)));
      case log_: {
        const S u = a->eval(x);
        return log(u * u + 1.0);
      }
      case sqrt_: {
        const S u = a->eval(x);
        return sqrt(u * u + 2.0);
      }
      case powc: {
        const S u = a->eval(x);
        return pow(u * u + 1.0, value);
      }
    }
    return x[0];
  }
};

inline std::shared_ptr<Expr> random_expr(std::mt19937_64& rng, int num_vars, int depth) {
  auto e = std::make_shared<Expr>();
  const int leaf = depth <= 0 ? 1 : static_cast<int>(rng() % 4 == 0);
  if (leaf) {
    if (rng() % 3 == 0) {
      e->kind = Expr::cst;
      e->value = uniform(rng, -1.5, 1.5);
    } else {
      e->kind = Expr::var;
      e->index = static_cast<int>(rng() % static_cast<unsigned>(num_vars));
    }
    return e;
  }
  const int pick = static_cast<int>(rng() % 10);
  static constexpr Expr::Kind kinds[] = {Expr::add, Expr::sub, Expr::mul, Expr::div, Expr::sin_,
                                         Expr::cos_, Expr::exp_, Expr::log_, Expr::sqrt_, Expr::powc};
  e->kind = kinds[pick];
  e->a = random_expr(rng, num_vars, depth - 1);
  if (pick < 4) e->b = random_expr(rng, num_vars, depth - 1);
  if (e->kind == Expr::powc) e->value = uniform(rng, -1.5, 2.5);
  return e;
}

struct GroundTruthReport {
  int functions = 0;
  int partials = 0;
  int failures = 0;
  double max_rel_error = 0.0;  // |jet − fd| / max(1, |fd|)
};

/// `count` random functions of 1..3 variables (tree depth 4) at random points
/// in [−1, 1]^k, every partial up to `order` against the Richardson stencil.
/// Function i uses its own generator, so the result is order independent.
inline GroundTruthReport jet_ground_truth(int count, std::uint64_t seed, int order = 3, double tol = 1e-5) {
  GroundTruthReport r;
  for (int f = 0; f < count; ++f) {
    std::mt19937_64 rng(seed * 1000003ULL + static_cast<std::uint64_t>(f));
    const int nv = 1 + f % 3;
    const auto e = random_expr(rng, nv, 4);
    Point p;
    for (int v = 0; v < nv; ++v) p.push_back(uniform(rng, -1, 1));
    const Jet j = e->eval(seed_point(p, order));
    const auto fn = [&](const Point& q) { return e->eval(q); };
    bool bad = false;
    for (const auto& alpha : multi_indices(nv, order)) {
      const double fd = fd_partial_richardson(fn, p, alpha);
      const double err = std::abs(j.partial(alpha) - fd) / std::max(1.0, std::abs(fd));
      r.max_rel_error = std::max(r.max_rel_error, err);
      bad = bad || !(err < tol);
      ++r.partials;
    }
    r.failures += bad;
    ++r.functions;
  }
  return r;
}

}  // namespace projcomp::fdcheck
