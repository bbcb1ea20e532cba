#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "oracles.hpp"
#include "projcomp/jet.hpp"

using projcomp::Jet;
using projcomp::JetError;

namespace {

TEST(JetSeed, ValueAndLinearSlot) {
  const Jet x = Jet::variable(0, 3.0, 1, 3);
  EXPECT_DOUBLE_EQ(x.value(), 3.0);
  EXPECT_DOUBLE_EQ(x.coeff({1}), 1.0);
  EXPECT_DOUBLE_EQ(x.coeff({2}), 0.0);
  EXPECT_THROW(Jet::variable(2, 0.0, 2, 3), JetError);
}

TEST(JetSeed, SquareAtThree) {
  const Jet x = Jet::variable(0, 3.0, 1, 3);
  const Jet y = x * x;
  EXPECT_DOUBLE_EQ(y.coeff({0}), 9.0);
  EXPECT_DOUBLE_EQ(y.coeff({1}), 6.0);
  EXPECT_DOUBLE_EQ(y.coeff({2}), 1.0);
  EXPECT_DOUBLE_EQ(y.coeff({3}), 0.0);
}

TEST(JetSeed, SqrtSlope) {
  const Jet r = projcomp::sqrt(Jet::variable(0, 4.0, 1, 3));
  EXPECT_DOUBLE_EQ(r.value(), 2.0);
  EXPECT_DOUBLE_EQ(r.coeff({1}), 0.25);
}

TEST(JetArith, ProductAndGeometricSeries) {
  const Jet x = Jet::variable(0, 2.0, 1, 2);
  const Jet y = x * x;
  EXPECT_DOUBLE_EQ(y.coeff({0}), 4.0);
  EXPECT_DOUBLE_EQ(y.coeff({1}), 4.0);
  EXPECT_DOUBLE_EQ(y.coeff({2}), 1.0);

  const Jet z = Jet::variable(0, 0.0, 1, 3);
  const Jet g = 1.0 / (1.0 - z);
  for (int k = 0; k <= 3; ++k) EXPECT_DOUBLE_EQ(g.coeff({k}), 1.0);
}

TEST(JetArith, DivisionByZeroConstantTerm) {
  const Jet z = Jet::variable(0, 0.0, 1, 3);
  EXPECT_THROW(1.0 / z, JetError);
  EXPECT_THROW(z / z, JetError);
}

TEST(JetArith, ShapeMismatchRejected) {
  const Jet a = Jet::variable(0, 1.0, 2, 3);
  const Jet b = Jet::variable(0, 1.0, 2, 2);
  const Jet c = Jet::variable(0, 1.0, 3, 3);
  EXPECT_THROW(a + b, JetError);
  EXPECT_THROW(a * c, JetError);
  EXPECT_NO_THROW(a.truncated(2) + b);
}

// Polynomials at basepoint 0: the Taylor coefficients are the polynomial
// coefficients, so the truncated product is computed by direct expansion.
using Poly = std::map<std::vector<int>, double>;

Poly random_poly(std::mt19937_64& rng, int nv, int deg) {
  Poly p;
  for (const auto& a : oracle::multi_indices(nv, deg)) p[a] = oracle::uniform(rng, -1, 1);
  p[std::vector<int>(static_cast<std::size_t>(nv), 0)] = oracle::uniform(rng, 0.5, 2);
  return p;
}

Jet to_jet(const Poly& p, int nv, int order) {
  Jet j = Jet::constant(0.0, nv, order);
  std::vector<Jet> x;
  for (int v = 0; v < nv; ++v) x.push_back(Jet::variable(v, 0.0, nv, order));
  for (const auto& [a, c] : p) {
    Jet t = Jet::constant(c, nv, order);
    for (int v = 0; v < nv; ++v)
      for (int e = 0; e < a[static_cast<std::size_t>(v)]; ++e) t = t * x[static_cast<std::size_t>(v)];
    j += t;
  }
  return j;
}

TEST(JetArith, ProductMatchesExpandThenTruncate) {
  std::mt19937_64 rng(7);
  const int nv = 3, order = 3;
  for (int trial = 0; trial < 50; ++trial) {
    const Poly a = random_poly(rng, nv, 3), b = random_poly(rng, nv, 3);
    Poly prod;
    for (const auto& [ea, ca] : a)
      for (const auto& [eb, cb] : b) {
        std::vector<int> e(ea);
        int deg = 0;
        for (int v = 0; v < nv; ++v) deg += (e[static_cast<std::size_t>(v)] += eb[static_cast<std::size_t>(v)]);
        if (deg <= order) prod[e] += ca * cb;
      }
    const Jet ja = to_jet(a, nv, order), jb = to_jet(b, nv, order);
    const Jet jp = ja * jb;
    for (const auto& [e, c] : prod) EXPECT_NEAR(jp.coeff(e), c, 1e-13);
    // division inverts multiplication
    const Jet back = jp / jb;
    for (const auto& [e, c] : a) EXPECT_NEAR(back.coeff(e), c, 1e-11);
  }
}

TEST(JetElementary, SineSeriesAtZero) {
  const Jet s = projcomp::sin(Jet::variable(0, 0.0, 1, 3));
  EXPECT_NEAR(s.coeff({0}), 0.0, 1e-16);
  EXPECT_NEAR(s.coeff({1}), 1.0, 1e-16);
  EXPECT_NEAR(s.coeff({2}), 0.0, 1e-16);
  EXPECT_NEAR(s.coeff({3}), -1.0 / 6.0, 1e-16);
}

TEST(JetElementary, InversePairsAndPythagoras) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<double> p = {oracle::uniform(rng, -2, 2), oracle::uniform(rng, -2, 2)};
    const auto x = projcomp::seed_point(p, 3);
    const Jet u = x[0] * x[0] + 0.3 * x[1] + 2.0;  // positive value
    const Jet back = projcomp::exp(projcomp::log(u));
    const Jet one = projcomp::square(projcomp::cos(x[0] * x[1])) + projcomp::square(projcomp::sin(x[0] * x[1]));
    for (std::size_t i = 0; i < u.coeffs().size(); ++i) {
      EXPECT_NEAR(back.coeffs()[i], u.coeffs()[i], 1e-12 * std::max(1.0, std::abs(u.coeffs()[i])));
      EXPECT_NEAR(one.coeffs()[i], i == 0 ? 1.0 : 0.0, 1e-12);
    }
  }
}

TEST(JetElementary, DomainViolations) {
  const Jet z = Jet::variable(0, -1.0, 1, 2);
  EXPECT_THROW(projcomp::log(z), JetError);
  EXPECT_THROW(projcomp::sqrt(z), JetError);
  EXPECT_THROW(projcomp::pow(z, 0.5), JetError);
  EXPECT_NO_THROW(projcomp::pow(z, 3.0));
}

TEST(JetPartial, SimplePartials) {
  const Jet x = Jet::variable(0, 1.7, 2, 3);
  const Jet y = Jet::variable(1, -0.4, 2, 3);
  EXPECT_DOUBLE_EQ((x * x).partial(std::vector<int>{2, 0}), 2.0);
  EXPECT_DOUBLE_EQ((x * y).partial(std::vector<int>{1, 1}), 1.0);
  EXPECT_THROW((x * y).partial(std::vector<int>{2, 2}), JetError);
}

TEST(JetPartial, DerivativeLowersOrder) {
  const auto x = projcomp::seed_point(std::vector<double>{0.3, 0.8}, 3);
  const Jet f = projcomp::sin(x[0]) * x[1] * x[1];
  const Jet fx = f.derivative(0);
  EXPECT_EQ(fx.order(), 2);
  EXPECT_NEAR(fx.value(), std::cos(0.3) * 0.64, 1e-15);
  EXPECT_NEAR(fx.partial(std::vector<int>{1, 1}), -std::sin(0.3) * 2 * 0.8, 1e-15);
  EXPECT_THROW(Jet::constant(1.0, 2, 0).derivative(0), JetError);
}

TEST(JetPartial, TrigPolynomialsAgainstFiniteDifferences) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const double a = oracle::uniform(rng, -1, 1), b = oracle::uniform(rng, -1, 1), c = oracle::uniform(rng, -1, 1);
    auto f = [&](const auto& x) {
      using std::cos, std::sin, projcomp::cos, projcomp::sin;
      return a * sin(x[0] * 1.3) * x[1] + b * cos(x[1] - x[0]) * x[0] * x[0] + c * sin(x[0] * x[1]);
    };
    const projcomp::Point p = {oracle::uniform(rng, -1, 1), oracle::uniform(rng, -1, 1)};
    const auto jx = projcomp::seed_point(p, 3);
    const Jet jf = f(jx);
    for (const auto& alpha : oracle::multi_indices(2, 3)) {
      const double fd = oracle::fd_partial([&](const projcomp::Point& q) { return f(q); }, p, alpha, 1e-2);
      EXPECT_LE(std::abs(jf.partial(alpha) - fd), 1e-5 * std::max(1.0, std::abs(fd)));
    }
  }
}

// Leibniz rule and ring identities as properties over random jets.
TEST(JetProperties, LeibnizAndRingLaws) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const projcomp::Point p = {oracle::uniform(rng, -1, 1), oracle::uniform(rng, -1, 1), oracle::uniform(rng, -1, 1)};
    const auto x = projcomp::seed_point(p, 3);
    const auto ea = oracle::random_expr(rng, 3, 3), eb = oracle::random_expr(rng, 3, 3), ec = oracle::random_expr(rng, 3, 3);
    const Jet a = ea->eval(x), b = eb->eval(x), c = ec->eval(x);
    const Jet ab = a * b;
    for (int i = 0; i < 3; ++i)
      EXPECT_NEAR(ab.partial(i), a.value() * b.partial(i) + b.value() * a.partial(i),
                  1e-12 * std::max(1.0, std::abs(ab.partial(i))));
    const Jet l1 = (a + b) + c, r1 = a + (b + c);
    const Jet l2 = a * b, r2 = b * a;
    const Jet l3 = a + b, r3 = b + a;
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
      EXPECT_NEAR(l1.coeffs()[i], r1.coeffs()[i], 1e-13 * std::max(1.0, std::abs(l1.coeffs()[i])));
      EXPECT_NEAR(l2.coeffs()[i], r2.coeffs()[i], 1e-13 * std::max(1.0, std::abs(l2.coeffs()[i])));
      EXPECT_EQ(l3.coeffs()[i], r3.coeffs()[i]);
    }
  }
}

TEST(JetProperties, ChainRuleMatchesFiniteDifferences) {
  std::mt19937_64 rng(99);
  int checked = 0;
  while (checked < 40) {
    const auto e = oracle::random_expr(rng, 2, 4);
    const projcomp::Point p = {oracle::uniform(rng, -1, 1), oracle::uniform(rng, -1, 1)};
    const Jet j = e->eval(projcomp::seed_point(p, 1));
    for (int i = 0; i < 2; ++i) {
      std::vector<int> alpha = {i == 0, i == 1};
      const double fd = oracle::fd_partial([&](const projcomp::Point& q) { return e->eval(q); }, p, alpha, 1e-3);
      EXPECT_LE(std::abs(j.partial(i) - fd), 1e-5 * std::max(1.0, std::abs(fd)));
    }
    ++checked;
  }
}

}  // namespace
