#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "projcomp/catalog.hpp"
#include "projcomp/compactify.hpp"
#include "projcomp/tractor.hpp"

using namespace projcomp;

namespace {

ProjectiveStructure flat_structure(int n) { return random_projective_structure(n, 0, 0.0, 0); }

Polynomial random_potential(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Polynomial phi(n);
  for (const auto& e : oracle::multi_indices(n, 3)) phi.add_term(e, oracle::uniform(rng, -0.4, 0.4));
  return phi;
}

std::vector<Polynomial> gradient_of(const Polynomial& phi) {
  std::vector<Polynomial> out;
  for (int i = 0; i < phi.num_vars(); ++i) out.push_back(phi.derivative(i));
  return out;
}

struct RandomSection {
  std::vector<std::shared_ptr<oracle::Expr>> comps;
  std::vector<Jet> operator()(Coords x) const {
    const std::vector<Jet> xv(x.begin(), x.end());
    std::vector<Jet> out;
    for (const auto& c : comps) out.push_back(c->eval(xv));
    return out;
  }
  std::vector<double> at(const Point& p) const {
    std::vector<double> out;
    for (const auto& c : comps) out.push_back(c->eval(p));
    return out;
  }
};

RandomSection random_section(int n, std::mt19937_64& rng) {
  RandomSection s;
  for (int a = 0; a <= n; ++a) s.comps.push_back(oracle::random_expr(rng, n, 3));
  return s;
}

TEST(Cotractor, DefiningComponents) {
  for (int n : {2, 3}) {
    const auto ps = random_projective_structure(n, 2, 0.7, 21);
    const CotractorConnection tc{ps};
    for (const auto& p : sample_points(ps.chart, 1, "tractor", 10)) EXPECT_EQ(cotractor_invariant_residual(tc, p), 0.0);
  }
}

TEST(Cotractor, FlatStructureSimpleSections) {
  const CotractorConnection tc{flat_structure(2)};
  const CotractorSection one = [](Coords x) {
    return std::vector<Jet>{zero_jet(x[0]) + 1.0, zero_jet(x[0]), zero_jet(x[0])};
  };
  const CotractorSection lin = [](Coords x) { return std::vector<Jet>{x[0], zero_jet(x[0]), zero_jet(x[0])}; };
  for (int i = 0; i < 2; ++i) {
    for (double v : cotractor_derivative(tc, one, i, {0.3, -0.2})) EXPECT_EQ(v, 0.0);
    const auto d = cotractor_derivative(tc, lin, i, {0.3, -0.2});
    EXPECT_EQ(d[0], i == 0 ? 1.0 : 0.0);
    EXPECT_EQ(d[1], 0.0);
    EXPECT_EQ(d[2], 0.0);
  }
}

// (∇_iσ − μ_i, ∂_iμ_j − Γ^k_ijμ_k + P_ijσ) assembled from polynomial values
// and finite-difference derivatives of the section.
TEST(Cotractor, MatchesComponentAssembly) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 2;
    const auto ps = random_projective_structure(n, 2, 0.8, 100 + static_cast<std::uint64_t>(trial));
    const CotractorConnection tc{ps};
    const RandomSection V = random_section(n, rng);
    Point p;
    for (int i = 0; i < n; ++i) p.push_back(oracle::uniform(rng, -0.8, 0.8));
    const auto v = V.at(p);
    for (int i = 0; i < n; ++i) {
      std::vector<int> e(static_cast<std::size_t>(n), 0);
      e[static_cast<std::size_t>(i)] = 1;
      auto dcomp = [&](int a) {
        return oracle::fd_partial([&](const Point& q) { return V.comps[static_cast<std::size_t>(a)]->eval(q); }, p, e, 1e-3);
      };
      const auto d = cotractor_derivative(tc, V, i, p);
      EXPECT_NEAR(d[0], dcomp(0) - v[static_cast<std::size_t>(i + 1)], 1e-7);
      for (int j = 0; j < n; ++j) {
        double ref = dcomp(j + 1) + ps.P(i, j)(p) * v[0];
        for (int k = 0; k < n; ++k) ref -= ps.gamma(k, i, j)(p) * v[static_cast<std::size_t>(k + 1)];
        EXPECT_NEAR(d[static_cast<std::size_t>(j + 1)], ref, 1e-7);
      }
    }
  }
}

TEST(TractorCurvature, CommutatorOfDerivatives) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 2 + trial % 2;
    const auto ps = random_projective_structure(n, 2, 0.8, 200 + static_cast<std::uint64_t>(trial));
    const CotractorConnection tc{ps};
    const RandomSection V = random_section(n, rng);
    Point p;
    for (int i = 0; i < n; ++i) p.push_back(oracle::uniform(rng, -0.8, 0.8));
    const auto x = seed_point(p, 2);
    const JetTensor dV = cotractor_derivative(tc, V(x), x);
    const RealTensor F = tractor_curvature_at(tc, p);
    const auto v = V.at(p);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        std::vector<Jet> Wi, Wj;
        for (int b = 0; b <= n; ++b) {
          Wi.push_back(dV(i, b));
          Wj.push_back(dV(j, b));
        }
        const JetTensor ddj = cotractor_derivative(tc, Wj, x);  // ∇_·∇_j V
        const JetTensor ddi = cotractor_derivative(tc, Wi, x);
        for (int b = 0; b <= n; ++b) {
          double fv = 0.0;
          for (int d = 0; d <= n; ++d) fv += F(i, j, b, d) * v[static_cast<std::size_t>(d)];
          EXPECT_NEAR(ddj(i, b).value() - ddi(j, b).value(), -fv, 1e-10);
        }
      }
  }
}

TEST(TractorCurvature, FlatAndGenericWitness) {
  EXPECT_EQ(max_abs(tractor_curvature_at(CotractorConnection{flat_structure(2)}, {0.1, 0.2})), 0.0);
  const auto ps = random_projective_structure(2, 2, 0.8, 5);
  EXPECT_GT(max_abs(tractor_curvature_at(CotractorConnection{ps}, {0.1, 0.2})), 1e-3);
}

// The round-sphere patch is projectively flat and its Ricci is symmetric, so
// the tractor connection of its Levi-Civita connection is flat.
TEST(TractorCurvature, VanishesOnRoundSpherePatch) {
  const auto ps = structure_from_connection(levi_civita(compactified_flat(3)));
  const CotractorConnection tc{ps};
  for (const auto& p : sample_points(ps.chart, 2, "tractor", 5)) EXPECT_LT(max_abs(tractor_curvature_at(tc, p)), 1e-9);
}

TEST(TractorCurvature, GaugeCovariance) {
  for (int n : {2, 3}) {
    const auto ps = random_projective_structure(n, 2, 0.7, 300 + static_cast<std::uint64_t>(n));
    const Polynomial phi = random_potential(n, 17 + static_cast<std::uint64_t>(n));
    const auto psb = projective_change(ps, gradient_of(phi));
    const CotractorConnection tc{ps}, tcb{psb};
    for (const auto& p : sample_points(ps.chart, 3, "tractor", 10)) {
      std::vector<double> dphi;
      for (int i = 0; i < n; ++i) dphi.push_back(phi.derivative(i)(p));
      const Eigen::MatrixXd M = cotractor_gauge(phi(p), dphi);
      const Eigen::MatrixXd Mi = M.inverse();
      const RealTensor F = tractor_curvature_at(tc, p), Fb = tractor_curvature_at(tcb, p);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Eigen::MatrixXd f(n + 1, n + 1), fb(n + 1, n + 1);
          for (int a = 0; a <= n; ++a)
            for (int b = 0; b <= n; ++b) {
              f(a, b) = F(i, j, a, b);
              fb(a, b) = Fb(i, j, a, b);
            }
          EXPECT_LT((fb - M * f * Mi).cwiseAbs().maxCoeff(), 1e-8);
        }
      EXPECT_LT(max_abs_diff(curvature_traces(F), curvature_traces(Fb)), 1e-8);
    }
  }
}

TEST(Cotractor, GaugeIntertwinesDerivatives) {
  std::mt19937_64 rng(53);
  const int n = 2;
  const auto ps = random_projective_structure(n, 2, 0.7, 8);
  const Polynomial phi = random_potential(n, 9);
  const auto psb = projective_change(ps, gradient_of(phi));
  const CotractorConnection tc{ps}, tcb{psb};
  const RandomSection V = random_section(n, rng);
  const CotractorSection Vb = [&](Coords x) {
    const auto v = V(x);
    const Jet e = exp(phi(x));
    std::vector<Jet> out{e * v[0]};
    for (int j = 0; j < n; ++j) out.push_back(e * (v[static_cast<std::size_t>(j + 1)] + v[0] * phi.derivative(j)(x)));
    return out;
  };
  for (const auto& p : sample_points(ps.chart, 4, "tractor", 5)) {
    std::vector<double> dphi;
    for (int i = 0; i < n; ++i) dphi.push_back(phi.derivative(i)(p));
    const Eigen::MatrixXd M = cotractor_gauge(phi(p), dphi);
    for (int i = 0; i < n; ++i) {
      const auto a = cotractor_derivative(tc, V, i, p);
      const auto b = cotractor_derivative(tcb, Vb, i, p);
      const Eigen::VectorXd Ma = M * Eigen::Map<const Eigen::VectorXd>(a.data(), n + 1);
      for (int k = 0; k <= n; ++k) EXPECT_NEAR(b[static_cast<std::size_t>(k)], Ma(k), 1e-10);
    }
  }
}

TEST(Splitting, FlatModel) {
  const auto ps = flat_structure(2);
  const Chart c = dm_chart(ps);
  for (const auto& p : sample_points(c, 5, "splitting", 10)) EXPECT_LT(splitting_metric_crosscheck(ps, p).max(), 1e-12);
}

TEST(Splitting, RandomStructures) {
  for (int n : {2, 3}) {
    const auto ps = random_projective_structure(n, 2, 0.8, 400 + static_cast<std::uint64_t>(n));
    for (const auto& p : sample_points(dm_chart(ps), 6, "splitting", 20)) {
      const auto r = splitting_metric_crosscheck(ps, p);
      EXPECT_LT(r.max(), 1e-9);
    }
  }
}

TEST(Splitting, HorizontalShiftFromTractorData) {
  // dξ_j(h_i) = −(P_ij + ξ_iξ_j − Γ^k_ijξ_k)
  const auto ps = random_projective_structure(2, 2, 0.8, 12);
  const CotractorConnection tc{ps};
  const Point x{0.3, -0.6};
  const std::vector<double> xi{0.7, -0.2};
  const RealTensor A = horizontal_shift(tc.values_at(x), xi);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double ref = -(ps.P(i, j)(x) + xi[static_cast<std::size_t>(i)] * xi[static_cast<std::size_t>(j)]);
      for (int k = 0; k < 2; ++k) ref += ps.gamma(k, i, j)(x) * xi[static_cast<std::size_t>(k)];
      EXPECT_NEAR(A(i, j), ref, 1e-14);
    }
}

// ξ ↦ ξ + Υ carries the structure of Γ + δΥ + δΥ back to that of Γ; the
// opposite shift does not.
TEST(Splitting, ProjectiveChangeIsAFibreShift) {
  for (int n : {2, 3}) {
    const auto ps = random_projective_structure(n, 2, 0.6, 500 + static_cast<std::uint64_t>(n));
    const auto ups = random_covector(n, 2, 0.5, 7);
    const auto psb = projective_change(ps, ups);
    const DMStructure a = dm_metric(ps), b = dm_metric(psb, {-3.0, 3.0});
    const MetricField gplus = coordinate_transform(b.g, xi_shift_map(a.chart, b.chart, ups, 1.0));
    const TensorField wplus = coordinate_transform(b.omega, xi_shift_map(a.chart, b.chart, ups, 1.0));
    const MetricField gminus = coordinate_transform(b.g, xi_shift_map(a.chart, b.chart, ups, -1.0));
    double worst_minus = 0.0;
    for (const auto& p : sample_points(a.chart, 8, "shift", 10)) {
      EXPECT_LT(max_abs_diff(gplus.values_at(p), a.g.values_at(p)), 1e-8);
      EXPECT_LT(max_abs_diff(wplus.values_at(p), a.omega.values_at(p)), 1e-8);
      worst_minus = std::max(worst_minus, max_abs_diff(gminus.values_at(p), a.g.values_at(p)));
    }
    EXPECT_GT(worst_minus, 1e-3);
  }
}

}  // namespace
