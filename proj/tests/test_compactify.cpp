#include <gtest/gtest.h>

#include <cmath>

#include "projcomp/catalog.hpp"
#include "projcomp/compactify.hpp"

using namespace projcomp;

namespace {

CompactificationSpec spec_on(const Chart& chart, double alpha = 1.0, double C = 1.0) {
  CompactificationSpec s;
  s.chart = chart;
  s.alpha = alpha;
  s.C = C;
  s.seed = 3;
  return s;
}

// LC(cone over γ) moved to the T = (r²+1)^{-1/2} chart and changed by dT/T.
ConnectionField compactified_cone_connection(const MetricField& gamma) {
  const MetricField g = cone(gamma), gbar = compactified_cone(gamma);
  const ChartMap m = cone_T_to_r(g, gbar);
  const ConnectionField c = coordinate_transform(levi_civita(g), m);
  return projective_change(c, upsilon_from_defining(m.source, [](Coords x) { return x[0]; }, 1.0));
}

TEST(Upsilon, InverseRadius) {
  // T = 1/r in the r chart: Υ = dT/T = -dr/r
  const Chart c({"r"}, {{0.5, 3.0}});
  const TensorField u = upsilon_from_defining(c, [](Coords x) { return 1.0 / x[0]; }, 1.0);
  EXPECT_NEAR(u.values_at({2.0})(0), -0.5, 1e-15);
  const TensorField u2 = upsilon_from_defining(c, [](Coords x) { return 1.0 / x[0]; }, 2.0);
  EXPECT_NEAR(u2.values_at({2.0})(0), -0.25, 1e-15);
}

TEST(Upsilon, ConeDefiningFunction) {
  const Chart c({"r"}, {{0.5, 3.0}});
  const TensorField u = upsilon_from_defining(c, [](Coords x) { return 1.0 / sqrt(x[0] * x[0] + 1.0); }, 1.0);
  for (double r : {0.5, 1.3, 2.9}) EXPECT_NEAR(u.values_at({r})(0), -r / (r * r + 1), 1e-14);
  EXPECT_THROW(upsilon_from_defining(c, [](Coords x) { return x[0] - 1.0; }, 1.0).values_at({1.0}), CompactificationError);
}

TEST(Spec, Validation) {
  CompactificationSpec s = spec_on(compactified_flat(3).chart());
  EXPECT_NO_THROW(s.validate());
  s.alpha = 0.75;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s.alpha = 1;
  s.ladder = {1e-3, 1e-2, 1e-4};
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s.ladder = {1e-2, 1e-3};
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(Richardson, PolynomialIsExact) {
  const std::vector<double> h{1e-2, 1e-3, 1e-4};
  std::vector<double> f;
  for (double x : h) f.push_back(2.5 - 3 * x + 7 * x * x);
  EXPECT_NEAR(detail::extrapolate_to_zero(h, f), 2.5, 1e-12);
}

TEST(ConnectionExtension, ConeOverRoundSphere) {
  const MetricField gbar = compactified_cone(round_sphere(2));
  const ConnectionField lcbar = levi_civita(gbar);
  const auto v = connection_extension_check(compactified_cone_connection(round_sphere(2)), spec_on(gbar.chart()),
                                            [&](const Point& p) { return lcbar.values_at(p); });
  EXPECT_TRUE(v.pass) << v.witness;
  EXPECT_LT(v.closed_form_error, 1e-7);
  EXPECT_GE(v.min_ratio, 5.0);
}

TEST(ConnectionExtension, ConeOverSplitPlaneAndTorus) {
  for (const MetricField& gamma : {split_flat_plane(), flat_torus(2)}) {
    const MetricField gbar = compactified_cone(gamma);
    const ConnectionField lcbar = levi_civita(gbar);
    const auto v = connection_extension_check(compactified_cone_connection(gamma), spec_on(gbar.chart()),
                                              [&](const Point& p) { return lcbar.values_at(p); });
    EXPECT_TRUE(v.pass) << v.witness;
  }
}

TEST(ConnectionExtension, NaiveInverseRadiusOnFlatSpace) {
  const MetricField g = flat_spherical(3);
  const ChartMap m = inverse_radius_map(g.chart());
  const ConnectionField c = projective_change(coordinate_transform(levi_civita(g), m),
                                              upsilon_from_defining(m.source, [](Coords x) { return x[0]; }, 1.0));
  const auto v = connection_extension_check(c, spec_on(m.source));
  EXPECT_TRUE(v.pass) << v.witness;

  const auto pts = sample_points(m.source, 1, "metricity", 5);
  const auto mv = metricity_check(c, true, pts);
  EXPECT_EQ(mv.status, MetricityStatus::fail) << mv.witness;
  EXPECT_GT(mv.residual, 1e-3);
}

TEST(ConnectionExtension, EguchiHansonNeedsTheChange) {
  const auto eh = eh_compactified({1.0});
  const ConnectionField raw = levi_civita(eh.g);
  const auto spec = spec_on(eh.g.chart());
  const auto bad = connection_extension_check(raw, spec);
  EXPECT_FALSE(bad.pass);
  EXPECT_FALSE(bad.witness.empty());
  const auto good = connection_extension_check(projective_change(raw, upsilon_from_defining(spec)), spec);
  EXPECT_TRUE(good.pass) << good.witness;
}

TEST(ConnectionExtension, DivergenceWitnessOnSyntheticField) {
  const Chart c({"T", "y"}, {{0.1, 1.0}, {-1.0, 1.0}});
  const auto v = ladder_extension(spec_on(c), [](const Point& p) {
    RealTensor t({2}, 0.0);
    t(0) = 1.0 + p[0];
    t(1) = 1.0 / p[0];
    return t;
  });
  EXPECT_FALSE(v.pass);
  EXPECT_LT(v.min_ratio, 1.0);
}

// f = r² + c with T = 1/r: ḡ = dT²/(κ+(1+κc)T²)² + (1+cT²)γ/(κ+(1+κc)T²).
TEST(ConnectionExtension, WarpedFamilyMatchesClosedForm) {
  const double cs[] = {0.0, 0.4, -0.2};
  const double ks[] = {1.0, 0.5, 2.0};
  for (int t = 0; t < 3; ++t) {
    const double c = cs[t], kappa = ks[t];
    WarpedPair wp{[c](const Jet& r) { return r * r + c; }, round_sphere(2), kappa, {0.5, 3.0}};
    const auto w = warped(wp);
    const ChartMap m = inverse_radius_map(w.g.chart());
    const ConnectionField cbar =
        projective_change(coordinate_transform(levi_civita(w.g), m), coordinate_transform(w.upsilon, m));
    const MetricField gamma = round_sphere(2);
    const MetricField gT(m.source, [gamma, c, kappa](Coords x) {
      const JetTensor gm = gamma(x.subspan(1));
      JetTensor out = detail::zero_matrix(x);
      const Jet T2 = x[0] * x[0];
      const Jet q = kappa + (1 + kappa * c) * T2;
      out(0, 0) = 1.0 / (q * q);
      const Jet s = (1.0 + c * T2) / q;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) out(a + 1, b + 1) = s * gm(a, b);
      return out;
    });
    const ConnectionField lc = levi_civita(gT);
    // the closed form agrees with the transformed ḡ in the interior
    const Point q{0.6, 0.3, -0.4};
    EXPECT_LT(max_abs_diff(gT.values_at(q), coordinate_transform(w.gbar, m).values_at(q)), 1e-12);
    const auto v = connection_extension_check(cbar, spec_on(m.source), [&](const Point& p) { return lc.values_at(p); });
    EXPECT_TRUE(v.pass) << v.witness;
    EXPECT_LT(v.closed_form_error, 1e-7);
  }
}

TEST(AsymptoticForm, FlatSpaceRecoversRoundBoundary) {
  const MetricField g = flat_spherical(3), gbar = compactified_flat(3);
  const MetricField gT = coordinate_transform(g, cone_T_to_r(g, gbar));
  const auto a = asymptotic_form_check(gT, spec_on(gbar.chart()));
  EXPECT_TRUE(a.pass) << a.verdict.witness;
  EXPECT_TRUE(a.boundary_nondegenerate);
  // h = dT²/(1−T²) + (1−T²)γ, i.e. ḡ itself; at T=0 it is dT² + γ
  for (std::size_t i = 0; i < a.verdict.limits.size(); ++i)
    EXPECT_LT(max_abs_diff(a.verdict.limits[i], gbar.values_at(a.verdict.boundary_points[i])), 1e-7);
  EXPECT_LT(a.recovered_C_error, 1e-9);
  const Point p{0.4, 0.2, -0.7};
  EXPECT_LT(max_abs_diff(a.h.values_at(p), gbar.values_at(p)), 1e-12);
}

TEST(AsymptoticForm, EguchiHansonBoundaryMetric) {
  const auto eh = eh_compactified({1.0});
  const auto spec = spec_on(eh.g.chart(), 1.0, eh.C);
  const auto a = asymptotic_form_check(eh.g, spec);
  EXPECT_TRUE(a.pass) << a.verdict.witness;
  EXPECT_LT(a.recovered_C_error, 1e-9);
  for (std::size_t i = 0; i < a.verdict.limits.size(); ++i) {
    const Point& y = a.verdict.boundary_points[i];
    const auto x = seed_point(y, 0);
    const auto s = eh_sigma(x);
    JetTensor ref = detail::zero_matrix(x);
    for (int k = 0; k < 3; ++k) detail::add_sym(ref, Jet::constant(0.25, 4, 0), s[static_cast<std::size_t>(k)], s[static_cast<std::size_t>(k)]);
    EXPECT_LT(max_abs_diff(a.verdict.limits[i], values(ref)), 1e-7);
  }
  // the library's h-field and this one agree off the boundary
  const Point p{0.5, 1.0, 2.0, 3.0};
  EXPECT_LT(max_abs_diff(a.h.values_at(p), eh.h.values_at(p)), 1e-12);
}

TEST(AsymptoticForm, WrongAlphaOrCDiverges) {
  const auto eh = eh_compactified({1.0});
  const auto a2 = asymptotic_form_check(eh.g, spec_on(eh.g.chart(), 2.0, 1.0));
  EXPECT_FALSE(a2.pass);
  EXPECT_NE(a2.verdict.witness.find("diverges"), std::string::npos);
  const auto c2 = asymptotic_form_check(eh.g, spec_on(eh.g.chart(), 1.0, 2.0));
  EXPECT_FALSE(c2.pass);
}

TEST(Metricity, CompactifiedConeOverSphere) {
  const ConnectionField c = compactified_cone_connection(round_sphere(2));
  const auto pts = sample_points(compactified_flat(3).chart(), 2, "metricity", 5);
  const auto v = metricity_check(c, true, pts);
  EXPECT_EQ(v.status, MetricityStatus::pass) << v.witness;
  // ĝ = ḡ here since ḡ is Einstein with constant n−1
  const MetricField gbar = compactified_flat(3);
  const MetricField ghat = ricci_candidate(c);
  for (const auto& p : pts) EXPECT_LT(max_abs_diff(ghat.values_at(p), gbar.values_at(p)), 1e-8);
}

TEST(Metricity, SplitSignatureConeWithExplicitCandidate) {
  const MetricField gbar = compactified_cone(split_flat_plane());
  const ConnectionField c = compactified_cone_connection(split_flat_plane());
  const auto pts = sample_points(gbar.chart(), 4, "metricity", 5);
  EXPECT_EQ(metricity_check(c, true, pts).status, MetricityStatus::inconclusive);
  const auto v = metricity_check(c, false, pts, &gbar);
  EXPECT_EQ(v.status, MetricityStatus::pass) << v.witness;
}

TEST(Metricity, EguchiHansonIsInconclusive) {
  const auto eh = eh_compactified({1.0});
  const auto spec = spec_on(eh.g.chart());
  const ConnectionField c = projective_change(levi_civita(eh.g), upsilon_from_defining(spec));
  const auto pts = sample_points(eh.g.chart(), 5, "metricity", 3);
  const auto v = metricity_check(c, true, pts);
  EXPECT_EQ(v.status, MetricityStatus::inconclusive);
  EXPECT_GT(v.weyl, 1e-6);
}

TEST(Metricity, NonSymmetricRicciNeverPasses) {
  const auto ps = random_projective_structure(2, 2, 0.8, 11);
  const auto pts = sample_points(ps.chart, 6, "metricity", 4);
  const auto v = metricity_check(ps.connection, false, pts);
  EXPECT_GT(v.ricci_antisymmetry, 1e-6);
  EXPECT_EQ(v.status, MetricityStatus::fail);
}

TEST(Metricity, FlatConnectionIsTriviallyMetric) {
  const ConnectionField lc = levi_civita(flat_spherical(3));
  const auto pts = sample_points(lc.chart(), 7, "metricity", 3);
  EXPECT_EQ(metricity_check(lc, true, pts).status, MetricityStatus::pass);
}

}  // namespace
