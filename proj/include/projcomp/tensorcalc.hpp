// Connection and curvature toolkit on chart-local jet fields.
//
// Conventions (fixed once for the whole library):
//   Γ(k,i,j) = Γ^k_ij with ∇_i ∂_j = Γ^k_ij ∂_k
//   R^a_{bcd} = ∂_c Γ^a_{db} − ∂_d Γ^a_{cb} + Γ^a_{ce} Γ^e_{db} − Γ^a_{de} Γ^e_{cb}
//   Ric_{bd}  = R^a_{bad}   (not assumed symmetric)
//   P_{ab}    = Ric_(ab)/(n−1) − Ric_[ab]/(n+1), i.e. Ric_ab = n P_ba − P_ab
// With these the unit round S^m has Ric = (m−1)γ and P = γ.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "projcomp/field.hpp"
#include "projcomp/jet.hpp"
#include "projcomp/tensor.hpp"

namespace projcomp {

namespace detail {

inline JetTensor at_order(const JetTensor& t, int order) { return min_order(t) == order ? t : truncated(t, order); }

inline int common_order(const JetTensor& a, const JetTensor& b) { return std::min(min_order(a), min_order(b)); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Pointwise kernels on jet tensors

/// Levi-Civita symbols of a metric given as an order-k jet matrix (result has
/// order k−1).
inline JetTensor christoffel(const JetTensor& g, const CoordinateDerivative& D = {}) {
  const int n = g.dim(0);
  const int k = min_order(g);
  if (k < 1) throw JetError("levi_civita: jet order exhausted");
  const JetTensor gk = detail::at_order(g, k - 1);
  JetTensor ginv;
  try {
    ginv = inverse(gk);
  } catch (const GeometryError&) {
    throw GeometryError("levi_civita: singular metric");
  }
  std::vector<JetTensor> dg;
  dg.reserve(static_cast<std::size_t>(n));
  for (int l = 0; l < n; ++l) dg.push_back(D(g, l));  // dg[l](i,j) = ∂_l g_ij
  const Jet zero = zero_jet(gk(0, 0));
  // first kind: Γ_{l,ij} = ½(∂_i g_jl + ∂_j g_il − ∂_l g_ij)
  JetTensor first = JetTensor::cube(3, n, zero);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Jet v = (dg[static_cast<std::size_t>(i)](j, l) + dg[static_cast<std::size_t>(j)](i, l) - dg[static_cast<std::size_t>(l)](i, j)) * 0.5;
        first(l, i, j) = v;
        first(l, j, i) = v;
      }
  JetTensor gamma = JetTensor::cube(3, n, zero);
  for (int c = 0; c < n; ++c)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Jet s = zero;
        for (int l = 0; l < n; ++l) s += ginv(c, l) * first(l, i, j);
        gamma(c, i, j) = s;
        gamma(c, j, i) = s;
      }
  return gamma;
}

/// Curvature of an affine connection given as order-k jets (result order k−1).
inline JetTensor riemann(const JetTensor& gamma, const CoordinateDerivative& D = {}) {
  const int n = gamma.dim(0);
  const int k = min_order(gamma);
  if (k < 1) throw JetError("riemann: jet order exhausted");
  const JetTensor G = detail::at_order(gamma, k - 1);
  std::vector<JetTensor> dG;
  for (int c = 0; c < n; ++c) dG.push_back(D(gamma, c));
  const Jet zero = zero_jet(G(0, 0, 0));
  JetTensor R = JetTensor::cube(4, n, zero);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = c + 1; d < n; ++d) {
          Jet v = dG[static_cast<std::size_t>(c)](a, d, b) - dG[static_cast<std::size_t>(d)](a, c, b);
          for (int e = 0; e < n; ++e) v += G(a, c, e) * G(e, d, b) - G(a, d, e) * G(e, c, b);
          R(a, b, c, d) = v;
          R(a, b, d, c) = -v;
        }
  return R;
}

inline JetTensor ricci_from_riemann(const JetTensor& R) {
  const int n = R.dim(0);
  const Jet zero = zero_jet(R(0, 0, 0, 0));
  JetTensor Ric = JetTensor::cube(2, n, zero);
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d) {
      Jet s = zero;
      for (int a = 0; a < n; ++a) s += R(a, b, a, d);
      Ric(b, d) = s;
    }
  return Ric;
}

/// Projective Schouten tensor from the Ricci tensor in dimension n.
inline JetTensor schouten_from_ricci(const JetTensor& Ric) {
  const int n = Ric.dim(0);
  if (n < 2) throw GeometryError("projective_schouten: dimension must be at least 2");
  JetTensor P = Ric;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const Jet sym = (Ric(a, b) + Ric(b, a)) * 0.5;
      const Jet anti = (Ric(a, b) - Ric(b, a)) * 0.5;
      P(a, b) = sym / static_cast<double>(n - 1) - anti / static_cast<double>(n + 1);
    }
  return P;
}

/// W^a_{bcd} = R^a_{bcd} − δ^a_c P_db + δ^a_d P_cb + 2 P_[cd] δ^a_b.
inline JetTensor weyl_from(const JetTensor& R, const JetTensor& P) {
  const int n = R.dim(0);
  const int k = std::min(min_order(R), min_order(P));
  JetTensor W = detail::at_order(R, k);
  const JetTensor Pk = detail::at_order(P, k);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          Jet& w = W(a, b, c, d);
          if (a == c) w -= Pk(d, b);
          if (a == d) w += Pk(c, b);
          if (a == b) w += Pk(c, d) - Pk(d, c);
        }
  return W;
}

/// Γ̄^k_ij = Γ^k_ij + δ^k_i Υ_j + δ^k_j Υ_i.
inline JetTensor projective_change(const JetTensor& gamma, const JetTensor& upsilon) {
  const int n = gamma.dim(0);
  const int k = detail::common_order(gamma, upsilon);
  JetTensor out = detail::at_order(gamma, k);
  const JetTensor u = detail::at_order(upsilon, k);
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < n; ++j) {
      out(a, a, j) += u(j);
      out(a, j, a) += u(j);
    }
  return out;
}

/// ∇T for a tensor of valence (contra, co). The derivative index becomes the
/// first covariant slot: (∇T)^{a..}_{d b..} = ∇_d T^{a..}_{b..}.
inline JetTensor covariant_derivative(const JetTensor& gamma, const JetTensor& field, Valence valence,
                                      const CoordinateDerivative& D = {}) {
  const int rank = valence.rank();
  if (field.rank() != rank) throw std::invalid_argument("covariant_derivative: valence does not match components");
  const int n = gamma.dim(0);
  const int kf = min_order(field);
  if (kf < 1) throw JetError("covariant_derivative: jet order exhausted");
  const int k = std::min(kf - 1, min_order(gamma));
  const JetTensor G = detail::at_order(gamma, k);
  const JetTensor F = detail::at_order(field, k);
  std::vector<JetTensor> dF;
  for (int d = 0; d < n; ++d) dF.push_back(detail::at_order(D(field, d), k));

  std::vector<int> shape(static_cast<std::size_t>(rank + 1), n);
  const Jet zero = Jet::constant(0.0, G(0, 0, 0).num_vars(), k);
  JetTensor out(shape, zero);
  const int dslot = valence.contra;
  for (std::size_t f = 0; f < out.size(); ++f) {
    const auto idx = out.unflatten(f);
    const int d = idx[static_cast<std::size_t>(dslot)];
    std::vector<int> base;
    for (int s = 0; s <= rank; ++s)
      if (s != dslot) base.push_back(idx[static_cast<std::size_t>(s)]);
    Jet v = dF[static_cast<std::size_t>(d)].at(base);
    for (int s = 0; s < rank; ++s) {
      auto moved = base;
      const int orig = base[static_cast<std::size_t>(s)];
      for (int e = 0; e < n; ++e) {
        moved[static_cast<std::size_t>(s)] = e;
        if (s < valence.contra)
          v += G(orig, d, e) * F.at(moved);
        else
          v -= G(e, d, orig) * F.at(moved);
      }
    }
    out.data()[f] = v;
  }
  return out;
}

/// (dω)_{a0..ak} = Σ_j (−1)^j ∂_{aj} ω_{a0..âj..ak}, i.e. (k+1) ∂_[a0 ω_a1..ak].
inline JetTensor exterior_derivative(const JetTensor& omega, const CoordinateDerivative& D = {}) {
  const int k = omega.rank();
  if (k == 0) throw std::invalid_argument("exterior_derivative: use gradient() for scalars");
  const int n = omega.dim(0);
  if (k >= n) throw std::invalid_argument("exterior_derivative: form degree must be below the dimension");
  const int ord = min_order(omega);
  if (ord < 1) throw JetError("exterior_derivative: jet order exhausted");
  std::vector<JetTensor> d;
  for (int a = 0; a < n; ++a) d.push_back(D(omega, a));
  const Jet zero = zero_jet(d[0].data()[0]);
  JetTensor out = JetTensor::cube(k + 1, n, zero);
  for (std::size_t f = 0; f < out.size(); ++f) {
    const auto idx = out.unflatten(f);
    Jet v = zero;
    for (int j = 0; j <= k; ++j) {
      std::vector<int> rest;
      for (int s = 0; s <= k; ++s)
        if (s != j) rest.push_back(idx[static_cast<std::size_t>(s)]);
      const Jet& term = d[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])].at(rest);
      if (j % 2 == 0)
        v += term;
      else
        v -= term;
    }
    out.data()[f] = v;
  }
  return out;
}

/// Exterior derivative of a scalar: (dT)_a = ∂_a T.
inline JetTensor gradient(const Jet& f, const CoordinateDerivative& D = {}, int dim = -1) {
  if (dim < 0) dim = f.num_vars();
  JetTensor out({dim}, Jet());
  for (int a = 0; a < dim; ++a) out(a) = D(f, a);
  return out;
}

/// (α∧β)_{ab} = α_a β_b − α_b β_a, matching exterior_derivative.
inline JetTensor wedge(const JetTensor& alpha, const JetTensor& beta) {
  const int n = alpha.dim(0);
  const int k = detail::common_order(alpha, beta);
  const JetTensor a = detail::at_order(alpha, k);
  const JetTensor b = detail::at_order(beta, k);
  JetTensor out = JetTensor::cube(2, n, zero_jet(a(0)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = a(i) * b(j) - a(j) * b(i);
  return out;
}

// ---------------------------------------------------------------------------
// Coordinate changes

namespace detail {

/// out[.., a, ..] = Σ_c M(a, c) T[.., c, ..] in the given slot.
inline JetTensor apply_slot(const JetTensor& t, int slot, const JetTensor& m) {
  JetTensor out = t;
  const int n = m.dim(0);
  for (std::size_t f = 0; f < out.size(); ++f) {
    auto idx = out.unflatten(f);
    const int a = idx[static_cast<std::size_t>(slot)];
    Jet v = zero_jet(t.data()[0]);
    for (int c = 0; c < n; ++c) {
      idx[static_cast<std::size_t>(slot)] = c;
      v += m(a, c) * t.at(idx);
    }
    out.data()[f] = v;
  }
  return out;
}

inline JetTensor transpose(const JetTensor& m) {
  JetTensor out = m;
  for (int i = 0; i < m.dim(0); ++i)
    for (int j = 0; j < m.dim(1); ++j) out(i, j) = m(j, i);
  return out;
}

}  // namespace detail

/// Jacobian J(c, a) = ∂x^c/∂y^a of a chart map evaluated on coordinates y.
inline JetTensor jacobian(const std::vector<Jet>& x_of_y, Coords y) {
  const int m = static_cast<int>(x_of_y.size());
  const int n = static_cast<int>(y.size());
  const CoordinateDerivative D(y);
  JetTensor J({m, n}, Jet());
  for (int c = 0; c < m; ++c)
    for (int a = 0; a < n; ++a) J(c, a) = D(x_of_y[static_cast<std::size_t>(c)], a);
  return J;
}

/// Components of `field` (defined on map.target) expressed in the source
/// coordinates y of the map, at the seeded point y. Order drops by one.
inline JetTensor transform_components(const TensorField& field, const ChartMap& map, Coords y) {
  const std::vector<Jet> x = map.eval(y);
  const JetTensor J = jacobian(x, y);
  const int k = min_order(J);
  JetTensor comps = field(x);
  comps = detail::at_order(comps, std::min(k, min_order(comps)));
  const int kk = min_order(comps);
  const JetTensor Jk = detail::at_order(J, kk);
  const Valence v = field.valence();
  if (Jk.dim(0) == Jk.dim(1) && std::abs(determinant(values(Jk))) < 1e-300)
    throw GeometryError("coordinate_transform: singular Jacobian");
  if (v.contra > 0) {
    JetTensor Jinv;
    try {
      Jinv = inverse(Jk);
    } catch (const GeometryError&) {
      throw GeometryError("coordinate_transform: singular Jacobian");
    }
    for (int s = 0; s < v.contra; ++s) comps = detail::apply_slot(comps, s, Jinv);
  }
  const JetTensor Jt = detail::transpose(Jk);
  for (int s = v.contra; s < v.rank(); ++s) comps = detail::apply_slot(comps, s, Jt);
  return comps;
}

/// The field re-expressed on the source chart of `map`.
inline TensorField coordinate_transform(const TensorField& field, const ChartMap& map) {
  return TensorField(map.source, field.valence(),
                     [field, map](Coords y) { return transform_components(field, map, y); }, field.symmetry(),
                     std::max(field.depth(), 1));
}

inline MetricField coordinate_transform(const MetricField& g, const ChartMap& map) {
  return MetricField(map.source, [g, map](Coords y) { return transform_components(g, map, y); }, std::max(g.depth(), 1));
}

/// Connection coefficients in the source coordinates:
/// Γ'^c_ab = (J⁻¹)^c_k (J^i_a J^j_b Γ^k_ij + ∂_a ∂_b x^k).
inline ConnectionField coordinate_transform(const ConnectionField& conn, const ChartMap& map) {
  return ConnectionField(
      map.source,
      [conn, map](Coords y) {
        const std::vector<Jet> x = map.eval(y);
        const int n = static_cast<int>(y.size());
        const JetTensor J = jacobian(x, y);
        const CoordinateDerivative D(y);
        JetTensor G = conn(x);
        const int k = std::min({min_order(G), min_order(J) - 1});
        if (k < 0) throw JetError("coordinate_transform: jet order exhausted");
        G = detail::at_order(G, k);
        const JetTensor Jk = detail::at_order(J, k);
        const JetTensor Jinv = inverse(Jk);
        const Jet zero = zero_jet(Jk(0, 0));
        JetTensor rhs = JetTensor::cube(3, n, zero);  // (k, a, b)
        for (int kk = 0; kk < n; ++kk)
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
              Jet v = D(J(kk, a), b).truncated(k);
              for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) v += Jk(i, a) * Jk(j, b) * G(kk, i, j);
              rhs(kk, a, b) = v;
            }
        return detail::apply_slot(rhs, 0, Jinv);
      },
      conn.torsion_free(), std::max(conn.depth(), 2));
}

// ---------------------------------------------------------------------------
// Field-level operations

/// Levi-Civita connection of a metric field.
inline ConnectionField levi_civita(const MetricField& g) {
  return ConnectionField(
      g.chart(), [g](Coords x) { return christoffel(g(x), CoordinateDerivative(x)); }, true, g.depth() + 1);
}

/// Projective change by a covector field.
inline ConnectionField projective_change(const ConnectionField& conn, const TensorField& upsilon) {
  return ConnectionField(
      conn.chart(), [conn, upsilon](Coords x) { return projective_change(conn(x), upsilon(x)); }, conn.torsion_free(),
      std::max(conn.depth(), upsilon.depth()));
}

/// Connection jets at p with one order to spare for curvature.
inline JetTensor curvature_ready(const ConnectionField& conn, const Point& p) { return conn.at(p, conn.depth() + 1); }

inline RealTensor riemann_at(const ConnectionField& conn, const Point& p) { return values(riemann(curvature_ready(conn, p))); }

inline RealTensor ricci_at(const ConnectionField& conn, const Point& p) {
  return values(ricci_from_riemann(riemann(curvature_ready(conn, p))));
}

inline JetTensor ricci(const ConnectionField& conn, Coords x) {
  return ricci_from_riemann(riemann(conn(x), CoordinateDerivative(x)));
}

inline RealTensor projective_schouten_at(const ConnectionField& conn, const Point& p) {
  if (conn.dim() < 2) throw GeometryError("projective_schouten: dimension must be at least 2");
  return values(schouten_from_ricci(ricci_from_riemann(riemann(curvature_ready(conn, p)))));
}

inline RealTensor projective_weyl_at(const ConnectionField& conn, const Point& p) {
  const JetTensor R = riemann(curvature_ready(conn, p));
  return values(weyl_from(R, schouten_from_ricci(ricci_from_riemann(R))));
}

struct EinsteinFit {
  double lambda = 0.0;
  double max_residual = 0.0;
  double lambda_spread = 0.0;
  std::vector<double> per_point_lambda;
};

/// Fits Ric = λ g over the sample: λ is the mean of tr(g⁻¹Ric)/dim, the
/// residual the worst ‖Ric − λg‖∞ / ‖g‖∞.
inline EinsteinFit einstein_residual(const MetricField& g, std::span<const Point> points) {
  const int order = g.depth() + 2;
  if (points.size() < 2) throw std::invalid_argument("einstein_residual: need at least two points");
  const int n = g.dim();
  std::vector<RealTensor> rics, gs;
  EinsteinFit fit;
  for (const auto& p : points) {
    const auto x = seed_point(p, order);
    const JetTensor gj = g(x);
    const RealTensor gv = values(gj);
    const RealTensor ric = values(ricci_from_riemann(riemann(christoffel(gj))));
    const Eigen::MatrixXd gi = to_matrix(gv).inverse();
    double tr = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) tr += gi(a, b) * ric(b, a);
    fit.per_point_lambda.push_back(tr / n);
    rics.push_back(ric);
    gs.push_back(gv);
  }
  fit.lambda = std::accumulate(fit.per_point_lambda.begin(), fit.per_point_lambda.end(), 0.0) /
               static_cast<double>(points.size());
  const auto [lo, hi] = std::minmax_element(fit.per_point_lambda.begin(), fit.per_point_lambda.end());
  fit.lambda_spread = *hi - *lo;
  for (std::size_t i = 0; i < points.size(); ++i) {
    double num = 0.0;
    for (std::size_t f = 0; f < rics[i].size(); ++f)
      num = std::max(num, std::abs(rics[i].data()[f] - fit.lambda * gs[i].data()[f]));
    fit.max_residual = std::max(fit.max_residual, num / max_abs(gs[i]));
  }
  return fit;
}

// ---------------------------------------------------------------------------
// Geodesics

struct Trajectory {
  std::vector<double> times;
  std::vector<Point> positions;
  std::vector<Point> velocities;
  /// Largest |g(v,v) − g0(v0,v0)| per unit time, when a metric was supplied.
  double energy_drift_rate = 0.0;
};

/// Classical RK4 for ẍ^k + Γ^k_ij ẋ^i ẋ^j = 0.
inline Trajectory geodesic_integrate(const ConnectionField& conn, const Point& p0, const Point& v0, int steps,
                                     double step_size, const MetricField* metric = nullptr) {
  const int n = conn.dim();
  if (static_cast<int>(p0.size()) != n || static_cast<int>(v0.size()) != n)
    throw std::invalid_argument("geodesic_integrate: state has the wrong dimension");
  auto accel = [&](const Point& x, const Point& v) {
    const RealTensor G = conn.values_at(x);
    Point a(static_cast<std::size_t>(n), 0.0);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(k)] -= G(k, i, j) * v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)];
    return a;
  };
  auto axpy = [](const Point& a, double s, const Point& b) {
    Point out = a;
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += s * b[i];
    return out;
  };
  auto energy = [&](const Point& x, const Point& v) {
    const RealTensor g = metric->values_at(x);
    double e = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) e += g(i, j) * v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)];
    return e;
  };

  Trajectory traj;
  Point x = p0, v = v0;
  traj.times.push_back(0.0);
  traj.positions.push_back(x);
  traj.velocities.push_back(v);
  const double e0 = metric ? energy(x, v) : 0.0;
  double worst = 0.0;
  for (int s = 1; s <= steps; ++s) {
    const double h = step_size;
    const Point k1x = v, k1v = accel(x, v);
    const Point x2 = axpy(x, h / 2, k1x), v2 = axpy(v, h / 2, k1v);
    if (!conn.chart().contains(x2)) throw GeometryError("geodesic_integrate: trajectory left the chart box");
    const Point k2x = v2, k2v = accel(x2, v2);
    const Point x3 = axpy(x, h / 2, k2x), v3 = axpy(v, h / 2, k2v);
    if (!conn.chart().contains(x3)) throw GeometryError("geodesic_integrate: trajectory left the chart box");
    const Point k3x = v3, k3v = accel(x3, v3);
    const Point x4 = axpy(x, h, k3x), v4 = axpy(v, h, k3v);
    if (!conn.chart().contains(x4)) throw GeometryError("geodesic_integrate: trajectory left the chart box");
    const Point k4x = v4, k4v = accel(x4, v4);
    for (int i = 0; i < n; ++i) {
      const auto u = static_cast<std::size_t>(i);
      x[u] += h / 6 * (k1x[u] + 2 * k2x[u] + 2 * k3x[u] + k4x[u]);
      v[u] += h / 6 * (k1v[u] + 2 * k2v[u] + 2 * k3v[u] + k4v[u]);
    }
    for (double c : x)
      if (!std::isfinite(c)) throw GeometryError("geodesic_integrate: step failure (non-finite state)");
    if (!conn.chart().contains(x)) throw GeometryError("geodesic_integrate: trajectory left the chart box");
    const double t = s * step_size;
    traj.times.push_back(t);
    traj.positions.push_back(x);
    traj.velocities.push_back(v);
    if (metric) worst = std::max(worst, std::abs(energy(x, v) - e0) / t);
  }
  traj.energy_drift_rate = worst;
  return traj;
}

}  // namespace projcomp
