// Defining functions, boundary extension on a ladder of T-slices, the
// asymptotic normal form and the Beltrami metricity witness.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "projcomp/field.hpp"
#include "projcomp/random.hpp"
#include "projcomp/tensorcalc.hpp"

namespace projcomp {

class CompactificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Boundary chart whose coordinate 0 is transverse to the boundary: the
/// ε-slice is {x⁰ = ε}, and boundary-tangent samples are drawn from the
/// remaining box coordinates and reused on every slice.
struct CompactificationSpec {
  Chart chart;
  ScalarFunction T;  // defaults to x⁰
  double alpha = 1.0;
  double C = 1.0;
  std::vector<double> ladder{1e-2, 1e-3, 1e-4};
  double shrink = 5.0;
  int samples = 4;
  std::uint64_t seed = 0;
  double closed_form_tol = 1e-7;
  // Differences below floor·max(1, |f|) count as converged. Raise it when the
  // slices are ill-conditioned (terms of size 1/T² cancelling).
  double floor = 1e-9;

  Jet defining(Coords x) const { return T ? T(x) : x[0]; }

  /// 2/α as an integer; throws when it is not one.
  int power() const {
    if (!(alpha > 0)) throw std::invalid_argument("compactification: alpha must be positive");
    const double k = 2.0 / alpha;
    if (std::abs(k - std::round(k)) > 1e-12) throw std::invalid_argument("compactification: 2/alpha must be an integer");
    return static_cast<int>(std::lround(k));
  }

  std::vector<Point> tangent_samples() const {
    std::vector<Point> out;
    for (int i = 0; i < samples; ++i) {
      Stream s(seed, "boundary-tangent", static_cast<std::uint64_t>(i));
      Point p{0.0};
      for (std::size_t c = 1; c < chart.box.size(); ++c) p.push_back(s.uniform(chart.box[c].lo, chart.box[c].hi));
      out.push_back(p);
    }
    return out;
  }

  void validate() const {
    power();
    if (ladder.size() < 3) throw std::invalid_argument("compactification: the ladder needs at least three slices");
    for (std::size_t i = 0; i < ladder.size(); ++i) {
      if (!(ladder[i] > 0)) throw std::invalid_argument("compactification: ladder values must be positive");
      if (i > 0 && !(ladder[i] < ladder[i - 1])) throw std::invalid_argument("compactification: ladder must decrease");
    }
    if (!(shrink > 1)) throw std::invalid_argument("compactification: shrink factor must exceed 1");
    if (samples < 1) throw std::invalid_argument("compactification: need at least one sample");
    for (auto y : tangent_samples()) {
      for (double e : ladder) {
        y[0] = e;
        const auto x = seed_point(y, 1);
        const Jet t = defining(x);
        if (!(t.value() > 0)) throw CompactificationError("compactification: T must be positive off the boundary");
        if (e == ladder.back()) {
          double m = 0.0;
          for (int a = 0; a < static_cast<int>(x.size()); ++a) m = std::max(m, std::abs(t.partial(a)));
          if (!(m > 1e-6)) throw CompactificationError("compactification: dT vanishes on the smallest slice");
        }
      }
    }
  }
};

struct ExtensionVerdict {
  bool pass = false;
  std::vector<Point> boundary_points;  // x⁰ = 0
  std::vector<RealTensor> limits;      // one per boundary point
  double min_ratio = std::numeric_limits<double>::infinity();
  double max_limit = 0.0;
  double closed_form_error = std::numeric_limits<double>::quiet_NaN();
  double tolerance = 0.0;
  std::string witness;
};

namespace detail {

/// Neville extrapolation of (h_k, f_k) to h = 0.
inline double extrapolate_to_zero(const std::vector<double>& h, std::vector<double> f) {
  const std::size_t m = h.size();
  for (std::size_t level = 1; level < m; ++level)
    for (std::size_t i = m - 1; i >= level; --i) {
      f[i] = (h[i] * f[i - 1] - h[i - level] * f[i]) / (h[i] - h[i - level]);
      if (i == level) break;
    }
  return f[m - 1];
}

}  // namespace detail

using PointEvaluator = std::function<RealTensor(const Point&)>;

/// Evaluates `f` on every slice at the matched tangent samples. A component
/// converges when every successive difference shrinks by `shrink` or is
/// already at the roundoff floor.
inline ExtensionVerdict ladder_extension(const CompactificationSpec& spec, const PointEvaluator& f,
                                         const PointEvaluator& closed_form = nullptr) {
  spec.validate();
  ExtensionVerdict v;
  v.tolerance = spec.closed_form_tol;
  const auto& eps = spec.ladder;
  bool ok = true;
  for (auto y : spec.tangent_samples()) {
    std::vector<RealTensor> vals;
    for (double e : eps) {
      y[0] = e;
      try {
        vals.push_back(f(y));
      } catch (const std::exception& ex) {
        throw CompactificationError("extension: evaluation failed on slice T=" + std::to_string(e) + ": " + ex.what());
      }
    }
    y[0] = 0.0;
    RealTensor lim = vals[0];
    for (std::size_t c = 0; c < lim.size(); ++c) {
      std::vector<double> fc;
      for (const auto& t : vals) fc.push_back(t.data()[c]);
      lim.data()[c] = detail::extrapolate_to_zero(eps, fc);
      const double scale = std::max(1.0, std::abs(fc.back()));
      const double floor = spec.floor * scale;
      for (std::size_t k = 0; k + 2 < fc.size(); ++k) {
        const double d1 = std::abs(fc[k] - fc[k + 1]);
        const double d2 = std::abs(fc[k + 1] - fc[k + 2]);
        if (d2 <= floor && d1 <= floor * 1e3) continue;
        const double r = d2 > 0 ? d1 / d2 : std::numeric_limits<double>::infinity();
        v.min_ratio = std::min(v.min_ratio, r);
        if (r < spec.shrink && ok) {
          ok = false;
          std::ostringstream w;
          w << "component " << c << " at tangent point " << v.boundary_points.size() << ": successive differences " << d1
            << ", " << d2 << " (ratio " << r << ")";
          v.witness = w.str();
        }
      }
      if (!std::isfinite(lim.data()[c]) && ok) {
        ok = false;
        v.witness = "non-finite limit in component " + std::to_string(c);
      }
    }
    v.max_limit = std::max(v.max_limit, max_abs(lim));
    if (closed_form) {
      const double err = max_abs_diff(lim, closed_form(y));
      v.closed_form_error = std::isnan(v.closed_form_error) ? err : std::max(v.closed_form_error, err);
    }
    v.boundary_points.push_back(y);
    v.limits.push_back(std::move(lim));
  }
  if (ok && closed_form && !(v.closed_form_error < v.tolerance)) {
    ok = false;
    v.witness = "limits differ from the closed form by " + std::to_string(v.closed_form_error);
  }
  v.pass = ok;
  return v;
}

/// Υ = dT/(αT).
inline TensorField upsilon_from_defining(const Chart& chart, ScalarFunction T, double alpha) {
  if (!(alpha > 0)) throw std::invalid_argument("upsilon_from_defining: alpha must be positive");
  return TensorField(chart, {0, 1}, [T = std::move(T), alpha](Coords x) {
    const Jet t = T(x);
    if (t.value() == 0.0) throw CompactificationError("upsilon_from_defining: T vanishes at the evaluation point");
    const CoordinateDerivative D(x);
    JetTensor out({static_cast<int>(x.size())}, Jet());
    for (int i = 0; i < static_cast<int>(x.size()); ++i) {
      const Jet d = D(t, i);
      out(i) = d / (alpha * t.truncated(d.order()));
    }
    return out;
  }, Symmetry::none, 1);
}

inline TensorField upsilon_from_defining(const CompactificationSpec& spec) {
  return upsilon_from_defining(spec.chart, [spec](Coords x) { return spec.defining(x); }, spec.alpha);
}

inline ExtensionVerdict connection_extension_check(const ConnectionField& conn, const CompactificationSpec& spec,
                                                   const PointEvaluator& closed_form = nullptr) {
  return ladder_extension(spec, [&](const Point& p) { return conn.values_at(p); }, closed_form);
}

struct AsymptoticForm {
  TensorField h;
  ExtensionVerdict verdict;
  /// det of h|_{T=0} on the boundary tangent coordinates, worst sample.
  double boundary_det = 0.0;
  bool boundary_nondegenerate = false;
  /// max |(g − h/T^{2/α})_TT T^{4/α}/(∂_T T)² − C| over slices.
  double recovered_C_error = 0.0;
  bool pass = false;
};

inline Jet int_pow(const Jet& t, int k) {
  Jet out = Jet::constant(1.0, t.num_vars(), t.order());
  for (int i = 0; i < k; ++i) out = out * t;
  return out;
}

/// h := T^{2/α}(g − C dT²/T^{4/α}).
inline TensorField asymptotic_h(const MetricField& g, const CompactificationSpec& spec) {
  const int k = spec.power();
  return TensorField(g.chart(), {0, 2}, [g, spec, k](Coords x) {
    const JetTensor gx = g(x);
    const Jet t = spec.defining(x);
    const CoordinateDerivative D(x);
    const int n = static_cast<int>(x.size());
    std::vector<Jet> dT;
    for (int a = 0; a < n; ++a) dT.push_back(D(t, a));
    const int ord = std::min(min_order(gx), dT[0].order());
    const Jet tk = int_pow(t.truncated(ord), k);
    const Jet c = spec.C / (tk * tk);
    JetTensor out = JetTensor::cube(2, n, Jet::constant(0.0, x[0].num_vars(), ord));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        out(a, b) = tk * (gx(a, b).truncated(ord) - c * dT[static_cast<std::size_t>(a)].truncated(ord) *
                                                          dT[static_cast<std::size_t>(b)].truncated(ord));
    return out;
  }, Symmetry::symmetric, std::max(g.depth(), 1));
}

inline AsymptoticForm asymptotic_form_check(const MetricField& g, const CompactificationSpec& spec) {
  AsymptoticForm out;
  out.h = asymptotic_h(g, spec);
  out.verdict = ladder_extension(spec, [&](const Point& p) { return out.h.values_at(p); });
  if (!out.verdict.pass) out.verdict.witness = "h diverges (C or alpha inconsistent): " + out.verdict.witness;
  const int n = g.dim();
  const int k = spec.power();
  out.boundary_det = std::numeric_limits<double>::infinity();
  for (const auto& lim : out.verdict.limits) {
    Eigen::MatrixXd m(n - 1, n - 1);
    for (int a = 1; a < n; ++a)
      for (int b = 1; b < n; ++b) m(a - 1, b - 1) = lim(a, b);
    out.boundary_det = std::min(out.boundary_det, std::abs(m.determinant()));
  }
  out.boundary_nondegenerate = out.boundary_det > MetricField::kMinAbsDeterminant;
  for (auto y : spec.tangent_samples())
    for (double e : spec.ladder) {
      y[0] = e;
      const auto x = seed_point(y, 1);
      const Jet t = spec.defining(x);
      const double tv = t.value(), dt = t.partial(0);
      const double gtt = g.values_at(y)(0, 0), htt = out.h.values_at(y)(0, 0);
      const double tk = std::pow(tv, k);
      const double rec = (gtt - htt / tk) * tk * tk / (dt * dt);
      out.recovered_C_error = std::max(out.recovered_C_error, std::abs(rec - spec.C));
    }
  out.pass = out.verdict.pass && out.boundary_nondegenerate;
  return out;
}

// ---------------------------------------------------------------------------
// Metricity

enum class MetricityStatus { pass, fail, inconclusive };

inline const char* to_string(MetricityStatus s) {
  switch (s) {
    case MetricityStatus::pass: return "pass";
    case MetricityStatus::fail: return "fail";
    case MetricityStatus::inconclusive: return "inconclusive";
  }
  return "?";
}

struct MetricityVerdict {
  MetricityStatus status = MetricityStatus::fail;
  double weyl = 0.0;
  double ricci_antisymmetry = 0.0;
  double riemann = 0.0;
  double candidate_det = 0.0;  // smallest |det ĝ| over the points
  double residual = 0.0;       // max |LC(ĝ) − ∇̄|
  std::string witness;
};

/// ĝ := Ric_sym/(n−1) of the connection.
inline MetricField ricci_candidate(const ConnectionField& conn) {
  const int n = conn.dim();
  return MetricField(conn.chart(), [conn, n](Coords x) {
    const JetTensor R = ricci(conn, x);
    JetTensor out = R;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) out(a, b) = (R(a, b) + R(b, a)) * (0.5 / (n - 1));
    return out;
  }, conn.depth() + 1);
}

/// Beltrami witness: with the flag set, a nonzero projective Weyl tensor
/// makes the result inconclusive. An explicit candidate metric replaces ĝ.
inline MetricityVerdict metricity_check(const ConnectionField& conn, bool require_projectively_flat,
                                        std::span<const Point> points, const MetricField* candidate = nullptr,
                                        double tol = 1e-7) {
  if (points.empty()) throw std::invalid_argument("metricity_check: no sample points");
  if (conn.dim() < 2) throw std::invalid_argument("metricity_check: dimension must be at least 2");
  MetricityVerdict v;
  const int n = conn.dim();
  for (const auto& p : points) {
    v.weyl = std::max(v.weyl, max_abs(projective_weyl_at(conn, p)));
    const RealTensor R = riemann_at(conn, p);
    v.riemann = std::max(v.riemann, max_abs(R));
    const RealTensor ric = ricci_at(conn, p);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) v.ricci_antisymmetry = std::max(v.ricci_antisymmetry, 0.5 * std::abs(ric(a, b) - ric(b, a)));
  }
  if (require_projectively_flat && v.weyl > 1e-8) {
    v.status = MetricityStatus::inconclusive;
    v.witness = "projective Weyl tensor is nonzero (" + std::to_string(v.weyl) + "); Beltrami witness does not apply";
    return v;
  }
  if (v.ricci_antisymmetry > 1e-9) {
    v.status = MetricityStatus::fail;
    v.residual = v.ricci_antisymmetry;
    v.witness = "Ricci tensor is not symmetric";
    return v;
  }
  if (!candidate && v.riemann < 1e-10) {
    v.status = MetricityStatus::pass;
    v.witness = "connection is flat";
    return v;
  }
  const MetricField ghat = candidate ? *candidate : ricci_candidate(conn);
  const ConnectionField lc = levi_civita(ghat);
  v.candidate_det = std::numeric_limits<double>::infinity();
  for (const auto& p : points) {
    const double det = std::abs(determinant(ghat.values_at(p)));
    v.candidate_det = std::min(v.candidate_det, det);
  }
  if (!(v.candidate_det > MetricField::kMinAbsDeterminant)) {
    v.status = MetricityStatus::fail;
    v.residual = 1.0;
    v.witness = "candidate metric is degenerate (|det| = " + std::to_string(v.candidate_det) + ")";
    return v;
  }
  for (const auto& p : points) v.residual = std::max(v.residual, max_abs_diff(lc.values_at(p), conn.values_at(p)));
  v.status = v.residual < tol ? MetricityStatus::pass : MetricityStatus::fail;
  v.witness = "max |LC(candidate) - connection| = " + std::to_string(v.residual);
  return v;
}

}  // namespace projcomp
