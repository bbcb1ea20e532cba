// The cotractor connection of a projective structure in the trivialisation
// given by a representative connection, its curvature, and the
// horizontal/vertical frame of the (x, ξ) manifold read off from it.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "projcomp/catalog.hpp"
#include "projcomp/tensorcalc.hpp"

namespace projcomp {

/// Fibre index 0 is σ, 1..n are μ_j.
struct CotractorConnection {
  ProjectiveStructure base;

  int n() const { return base.n; }
  int depth() const { return std::max(base.connection.depth(), base.schouten.depth()); }

  /// γ(i, α, β) = γ_{iα}^β with ∇_i V_α = ∂_i V_α − γ_{iα}^β V_β.
  JetTensor operator()(Coords x) const {
    const int n = base.n;
    const auto xs = x.subspan(0, static_cast<std::size_t>(n));
    const JetTensor G = base.connection(xs);
    const JetTensor P = base.schouten(xs);
    const int k = std::min(min_order(G), min_order(P));
    const Jet zero = Jet::constant(0.0, x[0].num_vars(), k);
    JetTensor out({n, n + 1, n + 1}, zero);
    for (int i = 0; i < n; ++i) {
      out(i, 0, i + 1) = zero + 1.0;
      for (int j = 0; j < n; ++j) {
        out(i, j + 1, 0) = -P(i, j).truncated(k);
        for (int l = 0; l < n; ++l) out(i, j + 1, l + 1) = G(l, i, j).truncated(k);
      }
    }
    return out;
  }

  RealTensor values_at(const Point& p) const { return values((*this)(seed_point(p, depth()))); }
};

inline CotractorConnection cotractor_connection(const ProjectiveStructure& ps) { return {ps}; }

/// The defining component identities, checked against the base data at p.
inline double cotractor_invariant_residual(const CotractorConnection& tc, const Point& p) {
  const int n = tc.n();
  const RealTensor g = tc.values_at(p);
  const RealTensor G = tc.base.connection.values_at(p);
  const RealTensor P = tc.base.schouten.values_at(p);
  double r = 0.0;
  for (int i = 0; i < n; ++i) {
    r = std::max(r, std::abs(g(i, 0, 0)));
    for (int j = 0; j < n; ++j) {
      r = std::max(r, std::abs(g(i, 0, j + 1) - (i == j ? 1.0 : 0.0)));
      r = std::max(r, std::abs(g(i, j + 1, 0) + P(i, j)));
      for (int k = 0; k < n; ++k) r = std::max(r, std::abs(g(i, j + 1, k + 1) - G(k, i, j)));
    }
  }
  return r;
}

/// ∇_i V_β for a jet section V = (σ, μ_1..μ_n); result (i, β).
inline JetTensor cotractor_derivative(const CotractorConnection& tc, const std::vector<Jet>& V, Coords x) {
  const int n = tc.n();
  if (static_cast<int>(V.size()) != n + 1) throw std::invalid_argument("cotractor_derivative: section must have n+1 components");
  const CoordinateDerivative D(x.subspan(0, static_cast<std::size_t>(n)));
  const JetTensor g = tc(x);
  const int k = std::min(V[0].order() - 1, min_order(g));
  if (k < 0) throw JetError("cotractor_derivative: jet order exhausted");
  JetTensor out({n, n + 1}, Jet::constant(0.0, x[0].num_vars(), k));
  for (int i = 0; i < n; ++i)
    for (int b = 0; b <= n; ++b) {
      Jet v = D(V[static_cast<std::size_t>(b)], i).truncated(k);
      for (int a = 0; a <= n; ++a) v -= g(i, b, a).truncated(k) * V[static_cast<std::size_t>(a)].truncated(k);
      out(i, b) = v;
    }
  return out;
}

using CotractorSection = std::function<std::vector<Jet>(Coords)>;

inline std::vector<double> cotractor_derivative(const CotractorConnection& tc, const CotractorSection& V, int i,
                                                const Point& p) {
  const auto x = seed_point(p, std::max(1, tc.depth()));
  const JetTensor d = cotractor_derivative(tc, V(x), x);
  std::vector<double> out;
  for (int b = 0; b <= tc.n(); ++b) out.push_back(d(i, b).value());
  return out;
}

/// F(i, j, β, δ) with [∇_i, ∇_j]V_β = −F_{ijβ}^δ V_δ:
/// F = ∂_iγ_j − ∂_jγ_i − γ_iγ_j + γ_jγ_i (matrix products over the fibre).
inline JetTensor tractor_curvature(const JetTensor& gamma, const CoordinateDerivative& D = {}) {
  const int n = gamma.dim(0), m = gamma.dim(1);
  const int k = min_order(gamma) - 1;
  if (k < 0) throw JetError("tractor_curvature: jet order exhausted");
  JetTensor out({n, n, m, m}, Jet::constant(0.0, gamma(0, 0, 0).num_vars(), k));
  const JetTensor gk = truncated(gamma, k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int b = 0; b < m; ++b)
        for (int d = 0; d < m; ++d) {
          Jet v = D(gamma(j, b, d), i) - D(gamma(i, b, d), j);
          for (int a = 0; a < m; ++a) v += gk(j, b, a) * gk(i, a, d) - gk(i, b, a) * gk(j, a, d);
          out(i, j, b, d) = v;
        }
  return out;
}

inline RealTensor tractor_curvature_at(const CotractorConnection& tc, const Point& p) {
  const auto x = seed_point(p, tc.depth() + 1);
  return values(tractor_curvature(tc(x), CoordinateDerivative(x)));
}

/// Gauge matrix for the change Υ = dφ: σ̄ = e^φσ, μ̄ = e^φ(μ + σ dφ).
/// Rows are new components, columns old ones.
inline Eigen::MatrixXd cotractor_gauge(double phi, const std::vector<double>& dphi) {
  const int n = static_cast<int>(dphi.size());
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n + 1, n + 1);
  for (int j = 0; j < n; ++j) M(j + 1, 0) = dphi[static_cast<std::size_t>(j)];
  return std::exp(phi) * M;
}

/// tr(F_ij F_kl) as an (n, n, n, n) array; invariant under the gauge.
inline RealTensor curvature_traces(const RealTensor& F) {
  const int n = F.dim(0), m = F.dim(2);
  RealTensor out = RealTensor::cube(4, n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) s += F(i, j, a, b) * F(k, l, b, a);
          out(i, j, k, l) = s;
        }
  return out;
}

// ---------------------------------------------------------------------------
// Horizontal/vertical splitting on (x, ξ), ξ_i = V_i/V_0

/// dξ_j(h_i): the parallel-transport lift of ∂_i pushed to ξ,
/// γ_{ij}^0 + γ_{ij}^kξ_k − ξ_j(γ_{i0}^0 + γ_{i0}^kξ_k).
inline RealTensor horizontal_shift(const RealTensor& gamma, std::span<const double> xi) {
  const int n = gamma.dim(0);
  RealTensor A = RealTensor::cube(2, n, 0.0);
  for (int i = 0; i < n; ++i) {
    double s0 = gamma(i, 0, 0);
    for (int k = 0; k < n; ++k) s0 += gamma(i, 0, k + 1) * xi[static_cast<std::size_t>(k)];
    for (int j = 0; j < n; ++j) {
      double v = gamma(i, j + 1, 0);
      for (int k = 0; k < n; ++k) v += gamma(i, j + 1, k + 1) * xi[static_cast<std::size_t>(k)];
      A(i, j) = v - xi[static_cast<std::size_t>(j)] * s0;
    }
  }
  return A;
}

struct SplittingReport {
  double pairing = 0.0;       // max |2g(v^i,h_j) − δ|
  double hh = 0.0;            // max |g(h_i,h_j)|
  double vv = 0.0;            // max |g(v^i,v^j)|
  double metric = 0.0;        // pairing metric vs dm_metric, coordinates
  double omega_vh = 0.0;      // max |2Ω(v^i,h_j) − δ|
  double omega_hh = 0.0;      // max |Ω(h_i,h_j)|
  double omega = 0.0;         // pairing form vs dm Ω, coordinates
  double max() const { return std::max({pairing, hh, vv, metric, omega_vh, omega_hh, omega}); }
};

/// Frame columns (h_1..h_n, v^1..v^n) in (∂x, ∂ξ) coordinates at a point of
/// the 2n-chart.
inline Eigen::MatrixXd splitting_frame(const CotractorConnection& tc, const Point& p) {
  const int n = tc.n();
  const RealTensor gam = tc.values_at(Point(p.begin(), p.begin() + n));
  const RealTensor A = horizontal_shift(gam, std::span<const double>(p).subspan(static_cast<std::size_t>(n)));
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    E(i, i) = 1.0;
    for (int j = 0; j < n; ++j) E(n + j, i) = A(i, j);
    E(n + i, n + i) = 1.0;
  }
  return E;
}

/// Pairing metric G(h_i, v^j) = ½δ and pairing form Ω(v^i, h_j) = ½δ (both
/// vanishing on h,h and v,v), compared with the dm_metric output.
inline SplittingReport splitting_metric_crosscheck(const ProjectiveStructure& ps, const Point& p) {
  const int n = ps.n;
  const CotractorConnection tc{ps};
  const DMStructure dm = dm_metric(ps);
  const Eigen::MatrixXd E = splitting_frame(tc, p);
  const Eigen::MatrixXd g = to_matrix(dm.g.values_at(p));
  const Eigen::MatrixXd w = to_matrix(dm.omega.values_at(p));
  const Eigen::MatrixXd gf = E.transpose() * g * E;
  const Eigen::MatrixXd wf = E.transpose() * w * E;
  SplittingReport r;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double d = i == j ? 1.0 : 0.0;
      r.pairing = std::max(r.pairing, std::abs(2 * gf(n + i, j) - d));
      r.hh = std::max(r.hh, std::abs(gf(i, j)));
      r.vv = std::max(r.vv, std::abs(gf(n + i, n + j)));
      r.omega_vh = std::max(r.omega_vh, std::abs(2 * wf(n + i, j) - d));
      r.omega_hh = std::max(r.omega_hh, std::abs(wf(i, j)));
    }
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(2 * n, 2 * n), W = G;
  for (int i = 0; i < n; ++i) {
    G(i, n + i) = G(n + i, i) = 0.5;
    W(n + i, i) = 0.5;
    W(i, n + i) = -0.5;
  }
  const Eigen::MatrixXd Ei = E.inverse();
  r.metric = (Ei.transpose() * G * Ei - g).cwiseAbs().maxCoeff();
  r.omega = (Ei.transpose() * W * Ei - w).cwiseAbs().maxCoeff();
  return r;
}

/// (x, ξ) ↦ (x, ξ + sΥ(x)) between the 2n-charts of a structure and its
/// projective change by the polynomial covector Υ.
inline ChartMap xi_shift_map(const Chart& source, const Chart& target, const std::vector<Polynomial>& upsilon, double s = 1.0) {
  const int n = static_cast<int>(upsilon.size());
  return ChartMap{source, target, [upsilon, n, s](Coords y) {
                    std::vector<Jet> x(y.begin(), y.end());
                    const auto xs = y.subspan(0, static_cast<std::size_t>(n));
                    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(n + i)] = y[static_cast<std::size_t>(n + i)] + s * upsilon[static_cast<std::size_t>(i)](xs);
                    return x;
                  }};
}

}  // namespace projcomp
