// Concrete metrics, frames and projective structures, each bound to a chart
// with a safe sampling box.
#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "projcomp/field.hpp"
#include "projcomp/polynomial.hpp"
#include "projcomp/random.hpp"
#include "projcomp/tensorcalc.hpp"

namespace projcomp {

namespace detail {

/// g += c · a⊙b with a⊙b = ½(a⊗b + b⊗a).
inline void add_sym(JetTensor& g, const Jet& c, const JetTensor& a, const JetTensor& b) {
  const int n = g.dim(0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) += c * (a(i) * b(j) + a(j) * b(i)) * 0.5;
}

inline JetTensor zero_matrix(Coords x) { return JetTensor::cube(2, static_cast<int>(x.size()), zero_jet(x[0])); }

inline std::vector<std::string> numbered(const std::string& stem, int count, int first = 1) {
  std::vector<std::string> out;
  for (int i = 0; i < count; ++i) out.push_back(stem + std::to_string(i + first));
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Fibre metrics

/// Unit round S^m in stereographic coordinates: 4|du|²/(1+|u|²)².
inline MetricField round_sphere(int m) {
  if (m < 1) throw std::invalid_argument("round_sphere: dimension must be at least 1");
  Chart chart(detail::numbered("u", m), std::vector<Interval>(static_cast<std::size_t>(m), {-2.0, 2.0}));
  return MetricField(chart, [](Coords x) {
    Jet s = Jet::constant(1.0, x[0].num_vars(), x[0].order());
    for (const auto& u : x) s += u * u;
    const Jet c = 4.0 / (s * s);
    JetTensor g = detail::zero_matrix(x);
    for (std::size_t i = 0; i < x.size(); ++i) g(static_cast<int>(i), static_cast<int>(i)) = c;
    return g;
  });
}

/// Flat metric on a coordinate torus chart.
inline MetricField flat_torus(int m) {
  Chart chart(detail::numbered("t", m), std::vector<Interval>(static_cast<std::size_t>(m), {0.0, 2 * std::numbers::pi}));
  return MetricField(chart, [](Coords x) {
    JetTensor g = detail::zero_matrix(x);
    for (std::size_t i = 0; i < x.size(); ++i) g(static_cast<int>(i), static_cast<int>(i)) += 1.0;
    return g;
  });
}

/// du² − dv², signature (1,1).
inline MetricField split_flat_plane() {
  Chart chart({"u", "v"}, {{-2.0, 2.0}, {-2.0, 2.0}});
  return MetricField(chart, [](Coords x) {
    JetTensor g = detail::zero_matrix(x);
    g(0, 0) += 1.0;
    g(1, 1) -= 1.0;
    return g;
  });
}

// ---------------------------------------------------------------------------
// Cones and their compactification

/// dr² + r²γ on (r, y); r sampled in [0.5, 3].
inline MetricField cone(const MetricField& gamma) {
  std::vector<std::string> names{"r"};
  std::vector<Interval> box{{0.5, 3.0}};
  for (const auto& s : gamma.chart().names) names.push_back(s);
  for (const auto& b : gamma.chart().box) box.push_back(b);
  Chart chart(names, box);
  return MetricField(chart, [gamma](Coords x) {
    const JetTensor gm = gamma(x.subspan(1));
    JetTensor g = detail::zero_matrix(x);
    g(0, 0) += 1.0;
    const Jet r2 = x[0] * x[0];
    for (int a = 0; a < gm.dim(0); ++a)
      for (int b = 0; b < gm.dim(0); ++b) g(a + 1, b + 1) = r2 * gm(a, b);
    return g;
  });
}

/// dT²/(1−T²) + (1−T²)γ on (T, y); T sampled in [0.1, 0.9].
inline MetricField compactified_cone(const MetricField& gamma) {
  std::vector<std::string> names{"T"};
  std::vector<Interval> box{{0.1, 0.9}};
  for (const auto& s : gamma.chart().names) names.push_back(s);
  for (const auto& b : gamma.chart().box) box.push_back(b);
  Chart chart(names, box, [](const Point& p) { return 1.0 - std::abs(p[0]); });
  return MetricField(chart, [gamma](Coords x) {
    const JetTensor gm = gamma(x.subspan(1));
    JetTensor g = detail::zero_matrix(x);
    const Jet s = 1.0 - x[0] * x[0];
    g(0, 0) = 1.0 / s;
    for (int a = 0; a < gm.dim(0); ++a)
      for (int b = 0; b < gm.dim(0); ++b) g(a + 1, b + 1) = s * gm(a, b);
    return g;
  });
}

/// (T, y) ↦ (r, y) with T = (r²+1)^{−1/2}.
inline ChartMap cone_T_to_r(const MetricField& cone_metric, const MetricField& compact) {
  return ChartMap{compact.chart(), cone_metric.chart(), [](Coords y) {
                    std::vector<Jet> x(y.begin(), y.end());
                    x[0] = sqrt(1.0 - y[0] * y[0]) / y[0];
                    return x;
                  }};
}

/// (T, y) ↦ (r, y) with r = 1/T; the T box is the image of the radial box.
inline ChartMap inverse_radius_map(const Chart& radial) {
  std::vector<std::string> names = radial.names;
  std::vector<Interval> box = radial.box;
  if (!(box[0].lo > 0)) throw std::invalid_argument("inverse_radius_map: radial box must be positive");
  names[0] = "T";
  box[0] = {1.0 / radial.box[0].hi, 1.0 / radial.box[0].lo};
  return ChartMap{Chart(names, box), radial, [](Coords y) {
                    std::vector<Jet> x(y.begin(), y.end());
                    x[0] = 1.0 / y[0];
                    return x;
                  }};
}

inline MetricField flat_spherical(int n) {
  if (n < 2) throw std::invalid_argument("flat_spherical: n must be at least 2");
  return cone(round_sphere(n - 1));
}

inline MetricField compactified_flat(int n) {
  if (n < 2) throw std::invalid_argument("compactified_flat: n must be at least 2");
  return compactified_cone(round_sphere(n - 1));
}

// ---------------------------------------------------------------------------
// Warped pairs

struct WarpedPair {
  std::function<Jet(const Jet&)> f;
  MetricField gamma;
  double kappa = 0.0;
  Interval r_range{0.5, 3.0};
};

struct WarpedMetrics {
  MetricField g;
  MetricField gbar;
  TensorField upsilon;
};

/// g = dr² + fγ, ḡ = dr²/(1+κf)² + fγ/(1+κf), Υ = −κf′/(2(1+κf)) dr.
inline WarpedMetrics warped(const WarpedPair& wp) {
  for (int i = 0; i <= 200; ++i) {
    const double r = wp.r_range.lo + (wp.r_range.hi - wp.r_range.lo) * i / 200.0;
    const double fv = wp.f(Jet::constant(r, 1, 0)).value();
    if (!(fv > 0.0)) throw GeometryError("warped: f must be positive on the r-interval");
    if (std::abs(1.0 + wp.kappa * fv) < 1e-8) throw GeometryError("warped: 1 + kappa f vanishes in the box");
  }
  std::vector<std::string> names{"r"};
  std::vector<Interval> box{wp.r_range};
  for (const auto& s : wp.gamma.chart().names) names.push_back(s);
  for (const auto& b : wp.gamma.chart().box) box.push_back(b);
  Chart chart(names, box);
  const auto f = wp.f;
  const auto gamma = wp.gamma;
  const double kappa = wp.kappa;
  MetricField g(chart, [f, gamma](Coords x) {
    const JetTensor gm = gamma(x.subspan(1));
    JetTensor out = detail::zero_matrix(x);
    out(0, 0) += 1.0;
    const Jet fv = f(x[0]);
    for (int a = 0; a < gm.dim(0); ++a)
      for (int b = 0; b < gm.dim(0); ++b) out(a + 1, b + 1) = fv * gm(a, b);
    return out;
  });
  MetricField gbar(chart, [f, gamma, kappa](Coords x) {
    const JetTensor gm = gamma(x.subspan(1));
    JetTensor out = detail::zero_matrix(x);
    const Jet fv = f(x[0]);
    const Jet s = 1.0 + kappa * fv;
    out(0, 0) = 1.0 / (s * s);
    const Jet c = fv / s;
    for (int a = 0; a < gm.dim(0); ++a)
      for (int b = 0; b < gm.dim(0); ++b) out(a + 1, b + 1) = c * gm(a, b);
    return out;
  });
  TensorField ups(chart, {0, 1}, [f, kappa](Coords x) {
    const Jet fv = f(x[0]);
    const Jet df = CoordinateDerivative(x)(fv, 0);
    const Jet s = (1.0 + kappa * fv).truncated(df.order());
    JetTensor out({static_cast<int>(x.size())}, zero_jet(df));
    out(0) = -kappa * df / (2.0 * s);
    return out;
  }, Symmetry::none, 1);
  return {g, gbar, ups};
}

// ---------------------------------------------------------------------------
// Eguchi–Hanson

struct EHParams {
  double a = 1.0;
};

/// σ1, σ2, σ3 as covectors on (r, θ, ψ, φ) (the r slot is zero).
inline std::array<JetTensor, 3> eh_sigma(Coords x) {
  const Jet& th = x[1];
  const Jet& ps = x[2];
  const Jet zero = zero_jet(th);
  const Jet one = zero + 1.0;
  const Jet cp = cos(ps), sp = sin(ps), st = sin(th), ct = cos(th);
  std::array<JetTensor, 3> s;
  for (auto& t : s) t = JetTensor({4}, zero);
  s[0](1) = cp;
  s[0](3) = sp * st;
  s[1](1) = -sp;
  s[1](3) = cp * st;
  s[2](2) = one;
  s[2](3) = ct;
  return s;
}

inline Chart eh_chart(const EHParams& p) {
  if (!(p.a > 0)) throw std::invalid_argument("eguchi_hanson: a must be positive");
  const double a = p.a;
  return Chart({"r", "theta", "psi", "phi"},
               {{1.1 * a, 5.0 * a}, {0.3, std::numbers::pi - 0.3}, {0.0, 2 * std::numbers::pi}, {0.0, 2 * std::numbers::pi}},
               [a](const Point& q) { return std::min(q[0] - a, std::sin(q[1])); });
}

/// (1−a⁴/r⁴)⁻¹dr² + ¼r²(1−a⁴/r⁴)σ3² + ¼r²(σ1²+σ2²).
inline MetricField eguchi_hanson(const EHParams& p) {
  const double a4 = std::pow(p.a, 4);
  return MetricField(eh_chart(p), [a4](Coords x) {
    if (!(x[0].value() > std::pow(a4, 0.25))) throw GeometryError("eguchi_hanson: r must exceed a");
    const auto s = eh_sigma(x);
    const Jet r2 = x[0] * x[0];
    const Jet w = 1.0 - a4 / (r2 * r2);
    JetTensor g = detail::zero_matrix(x);
    g(0, 0) = 1.0 / w;
    detail::add_sym(g, 0.25 * r2 * w, s[2], s[2]);
    detail::add_sym(g, 0.25 * r2, s[0], s[0]);
    detail::add_sym(g, 0.25 * r2, s[1], s[1]);
    return g;
  });
}

struct EHCompactified {
  MetricField g;    // on (T, θ, ψ, φ), T = 1/r
  TensorField h;    // T²(g − C dT²/T⁴), valid for T > 0
  double C = 1.0;
};

inline EHCompactified eh_compactified(const EHParams& p) {
  const double a = p.a;
  const double a4 = std::pow(a, 4);
  const Chart rc = eh_chart(p);
  Chart chart({"T", "theta", "psi", "phi"}, {{1.0 / (5.0 * a), 1.0 / (1.1 * a)}, rc.box[1], rc.box[2], rc.box[3]},
              [a](const Point& q) { return std::min(1.0 / a - q[0], std::sin(q[1])); });
  auto metric = [a4](Coords x) {
    const auto s = eh_sigma(x);
    const Jet T2 = x[0] * x[0];
    const Jet w = 1.0 - a4 * T2 * T2;
    if (!(w.value() > 0)) throw GeometryError("eh_compactified: r must exceed a");
    JetTensor g = detail::zero_matrix(x);
    g(0, 0) = 1.0 / (T2 * T2 * w);
    const Jet q = 0.25 / T2;
    detail::add_sym(g, q * w, s[2], s[2]);
    detail::add_sym(g, q, s[0], s[0]);
    detail::add_sym(g, q, s[1], s[1]);
    return g;
  };
  // C is the T→0 limit of T⁴ g_TT = 1/(1 − a⁴T⁴).
  const double C = 1.0;
  MetricField g(chart, metric);
  TensorField h(chart, {0, 2},
                [metric, C](Coords x) {
                  JetTensor out = metric(x);
                  const Jet T2 = x[0] * x[0];
                  out(0, 0) -= C / (T2 * T2);
                  for (auto& c : out.data()) c = c * T2;
                  return out;
                },
                Symmetry::symmetric);
  return {g, h, C};
}

// ---------------------------------------------------------------------------
// Projective structures

struct ProjectiveStructure {
  int n = 0;
  Chart chart;
  ConnectionField connection;
  /// P_ij of the connection (not symmetric in general).
  TensorField schouten;
  /// Γ^k_ij at flat index (k·n + i)·n + j; empty for non-polynomial input.
  std::vector<Polynomial> gamma_poly;
  std::vector<Polynomial> schouten_poly;
  int degree = 0;
  double bound = 0.0;

  bool polynomial() const { return !gamma_poly.empty(); }
  const Polynomial& gamma(int k, int i, int j) const { return gamma_poly[static_cast<std::size_t>((k * n + i) * n + j)]; }
  const Polynomial& P(int i, int j) const { return schouten_poly[static_cast<std::size_t>(i * n + j)]; }
};

inline Chart default_base_chart(int n) {
  return Chart(detail::numbered("x", n), std::vector<Interval>(static_cast<std::size_t>(n), {-1.0, 1.0}));
}

/// Ric_bd = ∂_aΓ^a_db − ∂_dΓ^a_ab + Γ^a_ae Γ^e_db − Γ^a_de Γ^e_ab, then P.
inline std::vector<Polynomial> schouten_polynomials(int n, const std::vector<Polynomial>& G) {
  auto g = [&](int k, int i, int j) -> const Polynomial& { return G[static_cast<std::size_t>((k * n + i) * n + j)]; };
  std::vector<Polynomial> ric(static_cast<std::size_t>(n * n), Polynomial(n));
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d) {
      Polynomial r(n);
      for (int a = 0; a < n; ++a) {
        r += g(a, d, b).derivative(a);
        r -= g(a, a, b).derivative(d);
        for (int e = 0; e < n; ++e) {
          r += g(a, a, e) * g(e, d, b);
          r -= g(a, d, e) * g(e, a, b);
        }
      }
      ric[static_cast<std::size_t>(b * n + d)] = r;
    }
  std::vector<Polynomial> P(static_cast<std::size_t>(n * n), Polynomial(n));
  const double s = 1.0 / (n - 1), t = 1.0 / (n + 1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const Polynomial& rab = ric[static_cast<std::size_t>(a * n + b)];
      const Polynomial& rba = ric[static_cast<std::size_t>(b * n + a)];
      P[static_cast<std::size_t>(a * n + b)] = (rab + rba) * (0.5 * s) - (rab - rba) * (0.5 * t);
    }
  return P;
}

inline ProjectiveStructure polynomial_structure(int n, std::vector<Polynomial> gamma, Chart chart) {
  if (n < 2) throw std::invalid_argument("projective structure: n must be at least 2");
  if (static_cast<int>(gamma.size()) != n * n * n) throw std::invalid_argument("projective structure: need n^3 coefficients");
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (max_coeff_diff(gamma[static_cast<std::size_t>((k * n + i) * n + j)], gamma[static_cast<std::size_t>((k * n + j) * n + i)]) > 0)
          throw std::invalid_argument("projective structure: coefficients must be symmetric in the lower indices");
  ProjectiveStructure ps;
  ps.n = n;
  ps.chart = std::move(chart);
  ps.gamma_poly = std::move(gamma);
  ps.schouten_poly = schouten_polynomials(n, ps.gamma_poly);
  for (const auto& p : ps.gamma_poly) ps.degree = std::max(ps.degree, p.degree());
  auto G = ps.gamma_poly;
  auto P = ps.schouten_poly;
  ps.connection = ConnectionField(ps.chart, [G, n](Coords x) {
    const auto xs = x.subspan(0, static_cast<std::size_t>(n));
    JetTensor out = JetTensor::cube(3, n, zero_jet(x[0]));
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          const Jet v = G[static_cast<std::size_t>((k * n + i) * n + j)](xs);
          out(k, i, j) = v;
          out(k, j, i) = v;
        }
    return out;
  });
  ps.schouten = TensorField(ps.chart, {0, 2}, [P, n](Coords x) {
    const auto xs = x.subspan(0, static_cast<std::size_t>(n));
    JetTensor out = JetTensor::cube(2, n, zero_jet(x[0]));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out(i, j) = P[static_cast<std::size_t>(i * n + j)](xs);
    return out;
  });
  return ps;
}

/// Wraps an arbitrary torsion-free connection; P is computed from jets and
/// consumes two derivative orders.
inline ProjectiveStructure structure_from_connection(const ConnectionField& conn) {
  const int n = conn.dim();
  if (n < 2) throw std::invalid_argument("projective structure: n must be at least 2");
  ProjectiveStructure ps;
  ps.n = n;
  ps.chart = conn.chart();
  ps.connection = conn;
  ps.schouten = TensorField(
      conn.chart(), {0, 2},
      [conn, n](Coords x) { return schouten_from_ricci(ricci(conn, x.subspan(0, static_cast<std::size_t>(n)))); },
      Symmetry::none, conn.depth() + 1);
  return ps;
}

/// Coefficients uniform in [−bound, bound] on every monomial of degree ≤
/// `degree`, symmetrised by construction; deterministic in seed.
inline ProjectiveStructure random_projective_structure(int n, int degree, double bound, std::uint64_t seed) {
  if (degree < 0 || degree > 3) throw std::invalid_argument("random_projective_structure: degree must be in [0, 3]");
  if (bound < 0 || bound > 1) throw std::invalid_argument("random_projective_structure: bound must be in [0, 1]");
  Stream s(seed, "projective-structure/" + std::to_string(n));
  std::vector<Polynomial> G(static_cast<std::size_t>(n * n * n), Polynomial(n));
  std::vector<Polynomial::Exponent> monomials;
  monomials.emplace_back(static_cast<std::size_t>(n), 0);
  std::function<void(Polynomial::Exponent&, int, int)> rec = [&](Polynomial::Exponent& e, int v, int left) {
    if (v == n) {
      int d = 0;
      for (int c : e) d += c;
      if (d > 0) monomials.push_back(e);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      e[static_cast<std::size_t>(v)] = k;
      rec(e, v + 1, left - k);
    }
    e[static_cast<std::size_t>(v)] = 0;
  };
  Polynomial::Exponent e(static_cast<std::size_t>(n), 0);
  rec(e, 0, degree);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Polynomial p(n);
        for (const auto& m : monomials) p.add_term(m, s.uniform(-bound, bound));
        G[static_cast<std::size_t>((k * n + i) * n + j)] = p;
        G[static_cast<std::size_t>((k * n + j) * n + i)] = p;
      }
  ProjectiveStructure ps = polynomial_structure(n, std::move(G), default_base_chart(n));
  ps.degree = degree;
  ps.bound = bound;
  return ps;
}

/// Γ̄^k_ij = Γ^k_ij + δ^k_i Υ_j + δ^k_j Υ_i with polynomial Υ.
inline ProjectiveStructure projective_change(const ProjectiveStructure& ps, const std::vector<Polynomial>& upsilon) {
  if (!ps.polynomial()) throw std::invalid_argument("projective_change: structure is not polynomial");
  const int n = ps.n;
  if (static_cast<int>(upsilon.size()) != n) throw std::invalid_argument("projective_change: upsilon has the wrong size");
  std::vector<Polynomial> G = ps.gamma_poly;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      G[static_cast<std::size_t>((k * n + k) * n + j)] += upsilon[static_cast<std::size_t>(j)];
      G[static_cast<std::size_t>((k * n + j) * n + k)] += upsilon[static_cast<std::size_t>(j)];
    }
  ProjectiveStructure out = polynomial_structure(n, std::move(G), ps.chart);
  out.bound = ps.bound;
  return out;
}

/// Random polynomial covector with coefficients in [−bound, bound].
inline std::vector<Polynomial> random_covector(int n, int degree, double bound, std::uint64_t seed) {
  Stream s(seed, "upsilon/" + std::to_string(n));
  std::vector<Polynomial> out;
  for (int i = 0; i < n; ++i) {
    Polynomial p(n);
    p.add_term(Polynomial::Exponent(static_cast<std::size_t>(n), 0), s.uniform(-bound, bound));
    for (int d = 1; d <= degree; ++d)
      for (int v = 0; v < n; ++v) {
        Polynomial::Exponent e(static_cast<std::size_t>(n), 0);
        e[static_cast<std::size_t>(v)] = d;
        p.add_term(e, s.uniform(-bound, bound));
        if (v + 1 < n && d >= 2) {
          Polynomial::Exponent m(static_cast<std::size_t>(n), 0);
          m[static_cast<std::size_t>(v)] = d - 1;
          m[static_cast<std::size_t>(v + 1)] = 1;
          p.add_term(m, s.uniform(-bound, bound));
        }
      }
    out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// The neutral-signature metric on the 2n-manifold (x^i, ξ_i)

struct DMStructure {
  ProjectiveStructure base;
  Chart chart;
  MetricField g;
  TensorField omega;
};

inline Chart dm_chart(const ProjectiveStructure& ps, Interval xi_box = {-1.0, 1.0}) {
  std::vector<std::string> names = ps.chart.names;
  std::vector<Interval> box = ps.chart.box;
  for (int i = 0; i < ps.n; ++i) {
    names.push_back("xi" + std::to_string(i + 1));
    box.push_back(xi_box);
  }
  return Chart(names, box);
}

/// g = (dξ_i − (Γ^k_ij ξ_k − ξ_iξ_j − P_(ij)) dx^j) ⊙ dx^i and
/// Ω = dξ_i∧dx^i + P_[ij] dx^i∧dx^j, with ⊙ and ∧ carrying a ½.
inline DMStructure dm_metric(const ProjectiveStructure& ps, Interval xi_box = {-1.0, 1.0}) {
  const int n = ps.n;
  const Chart chart = dm_chart(ps, xi_box);
  const ConnectionField conn = ps.connection;
  const TensorField schouten = ps.schouten;
  MetricField g(chart, [conn, schouten, n](Coords x) {
    const auto xs = x.subspan(0, static_cast<std::size_t>(n));
    const auto xi = x.subspan(static_cast<std::size_t>(n));
    const JetTensor G = conn(xs);
    const JetTensor P = schouten(xs);
    const int k = std::min(min_order(G), min_order(P));
    const Jet zero = Jet::constant(0.0, x[0].num_vars(), k);
    JetTensor out = JetTensor::cube(2, 2 * n, zero);
    for (int i = 0; i < n; ++i) {
      out(i, n + i) = zero + 0.5;
      out(n + i, i) = zero + 0.5;
      for (int j = i; j < n; ++j) {
        Jet v = xi[static_cast<std::size_t>(i)].truncated(k) * xi[static_cast<std::size_t>(j)].truncated(k) +
                (P(i, j).truncated(k) + P(j, i).truncated(k)) * 0.5;
        for (int l = 0; l < n; ++l) v -= G(l, i, j).truncated(k) * xi[static_cast<std::size_t>(l)].truncated(k);
        out(i, j) = v;
        out(j, i) = v;
      }
    }
    return out;
  }, std::max(conn.depth(), schouten.depth()));
  TensorField omega(
      chart, {0, 2},
      [schouten, n](Coords x) {
        const JetTensor P = schouten(x.subspan(0, static_cast<std::size_t>(n)));
        const Jet zero = zero_jet(P(0, 0));
        JetTensor out = JetTensor::cube(2, 2 * n, zero);
        for (int i = 0; i < n; ++i) {
          out(n + i, i) = zero + 0.5;
          out(i, n + i) = zero - 0.5;
          for (int j = 0; j < n; ++j) out(i, j) = (P(i, j) - P(j, i)) * 0.5;
        }
        return out;
      },
      Symmetry::antisymmetric, schouten.depth());
  return {ps, chart, g, omega};
}

/// Einstein constant of the neutral metric, 2(n+1).
inline double dm_einstein_constant(int n) { return 2.0 * (n + 1); }

}  // namespace projcomp
