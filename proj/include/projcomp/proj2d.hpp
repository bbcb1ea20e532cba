// Two-dimensional projective structures as ODEs Y'' = A3 Y'³ + A2 Y'² + A1 Y' + A0
// and the Pfaffian system (θ₀, θ₁, θ₂) on (X, Y, Z).
#pragma once

#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <string>
#include <vector>

#include "projcomp/catalog.hpp"
#include "projcomp/paracx.hpp"

namespace projcomp {

struct PathGeometry2D {
  ProjectiveStructure source;
  /// A0..A3 as polynomials in (X, Y); empty when the source is not polynomial.
  std::vector<Polynomial> A;

  /// {A0, A1, A2, A3} at (X, Y).
  std::array<double, 4> coefficients(double X, double Y) const {
    const Point x{X, Y};
    if (!A.empty()) return {A[0](x), A[1](x), A[2](x), A[3](x)};
    const RealTensor G = source.connection.values_at(x);
    return {-G(1, 0, 0), G(0, 0, 0) - 2 * G(1, 0, 1), 2 * G(0, 0, 1) - G(1, 1, 1), G(0, 1, 1)};
  }

  double rhs(double X, double Y, double P) const {
    const auto a = coefficients(X, Y);
    return ((a[3] * P + a[2]) * P + a[1]) * P + a[0];
  }
};

/// A3 = Γ¹₂₂, A2 = 2Γ¹₁₂ − Γ²₂₂, A1 = Γ¹₁₁ − 2Γ²₁₂, A0 = −Γ²₁₁.
inline PathGeometry2D ode_from_projective(const ProjectiveStructure& ps) {
  if (ps.n != 2) throw std::invalid_argument("ode_from_projective: structure must be two-dimensional");
  PathGeometry2D pg{ps, {}};
  if (ps.polynomial()) {
    pg.A = {ps.gamma(1, 0, 0) * -1.0, ps.gamma(0, 0, 0) - ps.gamma(1, 0, 1) * 2.0,
            ps.gamma(0, 0, 1) * 2.0 - ps.gamma(1, 1, 1), ps.gamma(0, 1, 1)};
  }
  return pg;
}

/// Θ(X, Y, Z) = −A0 + A1 Z − A2 Z² + A3 Z³, the n = 2 case of Θ_AB.
inline double theta_cubic(const PathGeometry2D& pg, double X, double Y, double Z) {
  const auto a = pg.coefficients(X, Y);
  return -a[0] + a[1] * Z - a[2] * Z * Z + a[3] * Z * Z * Z;
}

/// Slots of the (X, Y, Z) chart.
struct IdealForms {
  std::array<double, 3> theta0;  // dY + Z dX
  std::array<double, 3> theta1;  // dZ − Θ dX
  std::array<double, 3> theta2;  // dX
  RealTensor hD;                 // θ₁ ⊙ θ₂
  RealTensor contact;            // θ₀ (as a (X, Y, Z) covector)
  double coframe_det = 0.0;
};

inline IdealForms ideal_forms(const PathGeometry2D& pg, double X, double Y, double Z) {
  IdealForms f;
  const double th = theta_cubic(pg, X, Y, Z);
  f.theta0 = {Z, 1.0, 0.0};
  f.theta1 = {-th, 0.0, 1.0};
  f.theta2 = {1.0, 0.0, 0.0};
  f.hD = RealTensor::cube(2, 3, 0.0);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      f.hD(a, b) = 0.5 * (f.theta1[static_cast<std::size_t>(a)] * f.theta2[static_cast<std::size_t>(b)] +
                          f.theta2[static_cast<std::size_t>(a)] * f.theta1[static_cast<std::size_t>(b)]);
  f.contact = RealTensor({3}, 0.0);
  for (int a = 0; a < 3; ++a) f.contact(a) = f.theta0[static_cast<std::size_t>(a)];
  Eigen::Matrix3d M;
  for (int a = 0; a < 3; ++a) {
    M(0, a) = f.theta0[static_cast<std::size_t>(a)];
    M(1, a) = f.theta1[static_cast<std::size_t>(a)];
    M(2, a) = f.theta2[static_cast<std::size_t>(a)];
  }
  f.coframe_det = M.determinant();
  return f;
}

/// h_D of boundary_data(ps) at T = 0 read in (X, Y, Z) slots.
inline RealTensor boundary_hD_xyz(const ProjectiveStructure& ps, double X, double Y, double Z) {
  const BoundaryLayout L{2};
  const RealTensor h = boundary_data(ps, {0.0, Z, X, Y}).hD;
  const std::array<int, 3> slot{L.X(0), L.Y(), L.Z(0)};
  RealTensor out = RealTensor::cube(2, 3, 0.0);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) out(a, b) = h(slot[static_cast<std::size_t>(a)], slot[static_cast<std::size_t>(b)]);
  return out;
}

// ---------------------------------------------------------------------------
// Integral curves

struct CurveSample {
  double X, Y, Z;   // Z = −dY/dX so that θ₀ pulls back to zero
  double theta0;    // pullback of θ₀ per unit dX
  double theta1;    // pullback of θ₁ per unit dX
};

struct CurveReport {
  std::vector<CurveSample> samples;
  double max_theta0 = 0.0;
  double max_theta1 = 0.0;
  double residual() const { return std::max(max_theta0, max_theta1); }
};

/// RK4 in X for (Y, P = Y') from X0 to X1 in `steps` steps.
inline std::vector<std::array<double, 3>> integrate_ode(const PathGeometry2D& pg, double X0, double Y0, double P0, double X1,
                                                        int steps) {
  if (steps < 1) throw std::invalid_argument("integrate_ode: steps must be positive");
  const Chart& chart = pg.source.chart;
  const double h = (X1 - X0) / steps;
  std::vector<std::array<double, 3>> out{{X0, Y0, P0}};
  double X = X0, Y = Y0, P = P0;
  auto check = [&](double x, double y) {
    if (!chart.contains({x, y})) throw GeometryError("integrate_ode: curve left the chart box");
  };
  for (int s = 0; s < steps; ++s) {
    const double k1y = P, k1p = pg.rhs(X, Y, P);
    check(X + h / 2, Y + h / 2 * k1y);
    const double k2y = P + h / 2 * k1p, k2p = pg.rhs(X + h / 2, Y + h / 2 * k1y, P + h / 2 * k1p);
    check(X + h / 2, Y + h / 2 * k2y);
    const double k3y = P + h / 2 * k2p, k3p = pg.rhs(X + h / 2, Y + h / 2 * k2y, P + h / 2 * k2p);
    check(X + h, Y + h * k3y);
    const double k4y = P + h * k3p, k4p = pg.rhs(X + h, Y + h * k3y, P + h * k3p);
    Y += h / 6 * (k1y + 2 * k2y + 2 * k3y + k4y);
    P += h / 6 * (k1p + 2 * k2p + 2 * k3p + k4p);
    X = X0 + (s + 1) * h;
    check(X, Y);
    out.push_back({X, Y, P});
  }
  return out;
}

/// Lifts the integrated curve with Z = −Y' and evaluates the pullbacks of θ₀
/// and θ₁, differentiating the discrete curve with five-point stencils so
/// the residual measures the integrator rather than the ODE itself.
inline CurveReport integral_curve_check(const PathGeometry2D& pg, double X0, double Y0, double P0, double X1, int steps) {
  if (steps < 4) throw std::invalid_argument("integral_curve_check: need at least 4 steps");
  const auto curve = integrate_ode(pg, X0, Y0, P0, X1, steps);
  const double h = (X1 - X0) / steps;
  CurveReport rep;
  auto d5 = [&](std::size_t k, int comp) {
    return (-curve[k + 2][static_cast<std::size_t>(comp)] + 8 * curve[k + 1][static_cast<std::size_t>(comp)] -
            8 * curve[k - 1][static_cast<std::size_t>(comp)] + curve[k - 2][static_cast<std::size_t>(comp)]) /
           (12 * h);
  };
  for (std::size_t k = 2; k + 2 < curve.size(); ++k) {
    const auto& [X, Y, P] = curve[k];
    const double Z = -P;
    const double dY = d5(k, 1), dZ = -d5(k, 2);
    CurveSample s{X, Y, Z, dY + Z, dZ - theta_cubic(pg, X, Y, Z)};
    rep.max_theta0 = std::max(rep.max_theta0, std::abs(s.theta0));
    rep.max_theta1 = std::max(rep.max_theta1, std::abs(s.theta1));
    rep.samples.push_back(s);
  }
  return rep;
}

inline void write_curve_csv(const CurveReport& rep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_curve_csv: cannot open " + path);
  out << "X,Y,Z,theta0_residual,theta1_residual\n" << std::setprecision(17);
  for (const auto& s : rep.samples) out << s.X << ',' << s.Y << ',' << s.Z << ',' << s.theta0 << ',' << s.theta1 << '\n';
}

/// Integrates a geodesic of the representative connection, then integrates the
/// ODE from the same initial slope to the same final X and compares Y.
inline double geodesic_projection_residual(const PathGeometry2D& pg, const Point& p0, const Point& v0, int steps,
                                           double step_size) {
  if (std::abs(v0[0]) < 1e-3) throw std::invalid_argument("geodesic_projection_residual: initial dX must not vanish");
  const Trajectory tr = geodesic_integrate(pg.source.connection, p0, v0, steps, step_size);
  double worst = 0.0;
  for (std::size_t k = tr.positions.size() / 4; k < tr.positions.size(); k += std::max<std::size_t>(1, tr.positions.size() / 4)) {
    const Point& q = tr.positions[k];
    const auto c = integrate_ode(pg, p0[0], p0[1], v0[1] / v0[0], q[0], 4 * steps);
    worst = std::max(worst, std::abs(c.back()[1] - q[1]));
    const double slope = tr.velocities[k][1] / tr.velocities[k][0];
    worst = std::max(worst, std::abs(c.back()[2] - slope));
  }
  return worst;
}

}  // namespace projcomp
