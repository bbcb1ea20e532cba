// Independent test oracles. Nothing here reads jet coefficients beyond the
// value slot: derivatives come from finite differences or from explicit
// algebra written out in the tests.
#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <random>
#include <vector>

#include "projcomp/field.hpp"
#include "projcomp/groundtruth.hpp"
#include "projcomp/jet.hpp"
#include "projcomp/tensor.hpp"

namespace oracle {

using projcomp::Point;
using projcomp::RealTensor;

using projcomp::fdcheck::Expr;
using projcomp::fdcheck::fd_partial;
using projcomp::fdcheck::multi_indices;
using projcomp::fdcheck::random_expr;
using projcomp::fdcheck::uniform;

/// Values of a field's components as a plain function of the point.
inline std::function<RealTensor(const Point&)> value_fn(const projcomp::TensorField& f) {
  return [f](const Point& p) { return f.values_at(p); };
}

/// ∂_l of every component of a tensor-valued function, by the fourth-order
/// stencil; result(l, flat) layout returned as vector of tensors.
inline std::vector<RealTensor> fd_gradient(const std::function<RealTensor(const Point&)>& f, const Point& p, double h) {
  std::vector<RealTensor> out;
  for (std::size_t l = 0; l < p.size(); ++l) {
    auto at = [&](double s) {
      Point q = p;
      q[l] += s * h;
      return f(q);
    };
    RealTensor a = at(2), b = at(1), c = at(-1), d = at(-2);
    RealTensor r = a;
    for (std::size_t i = 0; i < r.size(); ++i)
      r.data()[i] = (-a.data()[i] + 8 * b.data()[i] - 8 * c.data()[i] + d.data()[i]) / (12 * h);
    out.push_back(r);
  }
  return out;
}

/// Christoffel symbols from metric values by finite differences.
inline RealTensor fd_christoffel(const std::function<RealTensor(const Point&)>& metric, const Point& p, double h = 1e-3) {
  const RealTensor g = metric(p);
  const int n = g.dim(0);
  const Eigen::MatrixXd gi = projcomp::to_matrix(g).inverse();
  const auto dg = fd_gradient(metric, p, h);
  RealTensor G = RealTensor::cube(3, n, 0.0);
  for (int c = 0; c < n; ++c)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0;
        for (int l = 0; l < n; ++l)
          s += 0.5 * gi(c, l) *
               (dg[static_cast<std::size_t>(i)](j, l) + dg[static_cast<std::size_t>(j)](i, l) - dg[static_cast<std::size_t>(l)](i, j));
        G(c, i, j) = s;
      }
  return G;
}

/// Curvature assembled from connection values with finite-difference ∂Γ,
/// written out independently of the library kernel.
inline RealTensor fd_riemann(const std::function<RealTensor(const Point&)>& gamma, const Point& p, double h = 1e-3) {
  const RealTensor G = gamma(p);
  const int n = G.dim(0);
  const auto dG = fd_gradient(gamma, p, h);
  RealTensor R = RealTensor::cube(4, n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double v = dG[static_cast<std::size_t>(c)](a, d, b) - dG[static_cast<std::size_t>(d)](a, c, b);
          for (int e = 0; e < n; ++e) v += G(a, c, e) * G(e, d, b) - G(a, d, e) * G(e, c, b);
          R(a, b, c, d) = v;
        }
  return R;
}

inline RealTensor contract_ricci(const RealTensor& R) {
  const int n = R.dim(0);
  RealTensor Ric = RealTensor::cube(2, n, 0.0);
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d)
      for (int a = 0; a < n; ++a) Ric(b, d) += R(a, b, a, d);
  return Ric;
}

/// Ricci of a metric by nested finite differences of metric values only.
inline RealTensor fd_ricci_of_metric(const std::function<RealTensor(const Point&)>& metric, const Point& p,
                                     double h_outer = 2e-3, double h_inner = 1e-3) {
  auto gamma = [&](const Point& q) { return fd_christoffel(metric, q, h_inner); };
  return contract_ricci(fd_riemann(gamma, p, h_outer));
}


}  // namespace oracle
