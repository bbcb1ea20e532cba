#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "projcomp/proj2d.hpp"
#include "projcomp/random.hpp"

using namespace projcomp;

namespace {

ProjectiveStructure only_gamma122(double v) {
  std::vector<Polynomial> G(8, Polynomial(2));
  Polynomial c(2);
  c.add_term({0, 0}, v);
  G[(0 * 2 + 1) * 2 + 1] = c;
  return polynomial_structure(2, G, default_base_chart(2));
}

}  // namespace

TEST(Ode, RejectsHigherDimension) {
  EXPECT_THROW(ode_from_projective(random_projective_structure(3, 1, 0.3, 0)), std::invalid_argument);
}

TEST(Ode, FlatIsStraightLines) {
  const PathGeometry2D pg = ode_from_projective(random_projective_structure(2, 0, 0.0, 0));
  for (double v : pg.coefficients(0.3, -0.2)) EXPECT_EQ(v, 0.0);
}

TEST(Ode, CubicCoefficientReadOff) {
  const PathGeometry2D pg = ode_from_projective(only_gamma122(1.0));
  const auto a = pg.coefficients(0.1, 0.2);
  EXPECT_EQ(a[3], 1.0);
  EXPECT_EQ(a[0], 0.0);
  EXPECT_EQ(a[1], 0.0);
  EXPECT_EQ(a[2], 0.0);
  EXPECT_DOUBLE_EQ(pg.rhs(0.1, 0.2, 0.5), 0.125);
}

TEST(Ode, CoefficientsMatchComponentFormulaAtPoints) {
  const ProjectiveStructure ps = random_projective_structure(2, 2, 0.5, 3);
  const PathGeometry2D pg = ode_from_projective(ps);
  PathGeometry2D numeric{ps, {}};  // forces the connection-value route
  for (const Point& p : sample_points(ps.chart, 1, "ode", 10)) {
    const RealTensor G = ps.connection.values_at(p);
    const auto a = pg.coefficients(p[0], p[1]);
    EXPECT_NEAR(a[3], G(0, 1, 1), 1e-14);
    EXPECT_NEAR(a[2], 2 * G(0, 0, 1) - G(1, 1, 1), 1e-14);
    EXPECT_NEAR(a[1], G(0, 0, 0) - 2 * G(1, 0, 1), 1e-14);
    EXPECT_NEAR(a[0], -G(1, 0, 0), 1e-14);
    const auto b = numeric.coefficients(p[0], p[1]);
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(a[static_cast<std::size_t>(k)], b[static_cast<std::size_t>(k)], 1e-14);
  }
}

TEST(Ode, ProjectivelyInvariant) {
  const ProjectiveStructure ps = random_projective_structure(2, 2, 0.5, 4);
  const PathGeometry2D pg = ode_from_projective(ps);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const PathGeometry2D pc = ode_from_projective(projective_change(ps, random_covector(2, 2, 0.5, 50 + s)));
    for (int k = 0; k < 4; ++k)  // coefficient-level identity
      EXPECT_LT(max_coeff_diff(pg.A[static_cast<std::size_t>(k)], pc.A[static_cast<std::size_t>(k)]), 1e-14) << "A" << k;
    for (const Point& p : sample_points(ps.chart, s, "ode-inv", 3)) {
      const auto a = pg.coefficients(p[0], p[1]), b = pc.coefficients(p[0], p[1]);
      for (int k = 0; k < 4; ++k) EXPECT_NEAR(a[static_cast<std::size_t>(k)], b[static_cast<std::size_t>(k)], 1e-10);
    }
  }
}

TEST(Ideal, FlatTheta1IsDZ) {
  const PathGeometry2D pg = ode_from_projective(random_projective_structure(2, 0, 0.0, 0));
  const IdealForms f = ideal_forms(pg, 0.2, 0.7, -0.3);
  EXPECT_EQ(f.theta1[0], 0.0);
  EXPECT_EQ(f.theta1[1], 0.0);
  EXPECT_EQ(f.theta1[2], 1.0);
}

TEST(Ideal, BoundaryMetricAgreesWithBoundaryData) {
  const ProjectiveStructure ps = random_projective_structure(2, 2, 0.5, 5);
  const PathGeometry2D pg = ode_from_projective(ps);
  for (const Point& y : sample_points(boundary_chart(2), 2, "ideal", 20)) {
    const double Z = y[1], X = y[2], Y = y[3];
    const IdealForms f = ideal_forms(pg, X, Y, Z);
    EXPECT_LT(max_abs_diff(f.hD, boundary_hD_xyz(ps, X, Y, Z)), 1e-12);
    EXPECT_NEAR(f.coframe_det, 1.0, 1e-15);
    // θ₀ of boundary_data is 2(dY + Z dX)
    const RealTensor t0 = boundary_data(ps, {0.0, Z, X, Y}).theta0;
    EXPECT_NEAR(2 * f.theta0[0], t0(2), 1e-15);
    EXPECT_NEAR(2 * f.theta0[1], t0(3), 1e-15);
  }
}

TEST(IntegralCurve, FlatLinesAreExact) {
  const PathGeometry2D pg = ode_from_projective(random_projective_structure(2, 0, 0.0, 0));
  const CurveReport r = integral_curve_check(pg, -0.5, 0.1, 0.4, 0.5, 200);
  EXPECT_LT(r.residual(), 1e-12);
  EXPECT_NEAR(r.samples.back().Y, 0.1 + 0.4 * (r.samples.back().X + 0.5), 1e-13);
}

TEST(IntegralCurve, CubicCurveAgainstClosedForm) {
  // Y'' = Y'³ has P = P0/√(1 − 2P0²s), Y = Y0 + (1 − √(1 − 2P0²s))/P0.
  const PathGeometry2D pg = ode_from_projective(only_gamma122(1.0));
  const double X0 = -0.6, Y0 = -0.3, P0 = 0.5, X1 = 0.6;
  auto exact = [&](double X) { return Y0 + (1 - std::sqrt(1 - 2 * P0 * P0 * (X - X0))) / P0; };
  const auto c1 = integrate_ode(pg, X0, Y0, P0, X1, 200);
  const auto c2 = integrate_ode(pg, X0, Y0, P0, X1, 400);
  const double e1 = std::abs(c1.back()[1] - exact(X1)), e2 = std::abs(c2.back()[1] - exact(X1));
  EXPECT_LT(e2, 1e-9);
  EXPECT_GT(e1 / e2, 12.0);  // fourth order
  const CurveReport r = integral_curve_check(pg, X0, Y0, P0, X1, 400);
  EXPECT_LT(r.residual(), 1e-7);
}

TEST(IntegralCurve, RandomStructureLiftIsIntegral) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const PathGeometry2D pg = ode_from_projective(random_projective_structure(2, 2, 0.3, seed));
    const CurveReport r = integral_curve_check(pg, -0.5, 0.0, 0.3, 0.5, 400);
    EXPECT_LT(r.residual(), 1e-7) << "seed " << seed;
  }
}

TEST(IntegralCurve, OppositeSignOfZIsNotIntegral) {
  // With Z = +Y' the lift would not annihilate θ₁ unless Θ is odd in Z.
  const PathGeometry2D pg = ode_from_projective(random_projective_structure(2, 2, 0.3, 7));
  const auto c = integrate_ode(pg, -0.5, 0.0, 0.3, 0.5, 100);
  double worst = 0;
  for (const auto& [X, Y, P] : c) worst = std::max(worst, std::abs(pg.rhs(X, Y, P) - theta_cubic(pg, X, Y, P)));
  EXPECT_GT(worst, 1e-3);
}

TEST(IntegralCurve, GeodesicsProjectToSolutions) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const ProjectiveStructure ps = random_projective_structure(2, 2, 0.3, seed);
    const PathGeometry2D pg = ode_from_projective(ps);
    EXPECT_LT(geodesic_projection_residual(pg, {-0.4, 0.1}, {1.0, 0.3}, 400, 0.002), 1e-6) << "seed " << seed;
    // a projectively equivalent representative gives the same paths
    const ProjectiveStructure pc = projective_change(ps, random_covector(2, 1, 0.3, 90 + seed));
    const PathGeometry2D pgc{pc, pg.A};
    EXPECT_LT(geodesic_projection_residual(pgc, {-0.4, 0.1}, {1.0, 0.3}, 400, 0.002), 1e-6) << "seed " << seed;
  }
}

TEST(IntegralCurve, LeavingTheChartThrows) {
  const PathGeometry2D pg = ode_from_projective(random_projective_structure(2, 0, 0.0, 0));
  EXPECT_THROW(integrate_ode(pg, 0.0, 0.0, 5.0, 0.9, 50), GeometryError);
}

TEST(IntegralCurve, CsvExport) {
  const PathGeometry2D pg = ode_from_projective(random_projective_structure(2, 2, 0.3, 1));
  const CurveReport r = integral_curve_check(pg, -0.2, 0.0, 0.1, 0.2, 40);
  const std::string path = ::testing::TempDir() + "projcomp_curve.csv";
  write_curve_csv(r, path);
  std::ifstream in(path);
  std::string header, line;
  std::getline(in, header);
  EXPECT_EQ(header, "X,Y,Z,theta0_residual,theta1_residual");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, static_cast<int>(r.samples.size()));
  std::remove(path.c_str());
}
