// Catalog registry, named checks and the manifest runner shared by the CLI
// and the acceptance binary.
#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <iomanip>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "projcomp/catalog.hpp"
#include "projcomp/compactify.hpp"
#include "projcomp/groundtruth.hpp"
#include "projcomp/paracx.hpp"
#include "projcomp/proj2d.hpp"
#include "projcomp/report.hpp"
#include "projcomp/tractor.hpp"

namespace projcomp {

struct CatalogEntry {
  std::string id;
  std::string description;
  std::string anchor;
  std::vector<std::string> params;
  std::vector<std::string> checks;
};

/// Alphabetical by id.
inline const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = {
      {"cone", "metric cone dr^2 + r^2 gamma and its compactification, gamma in {sphere, torus, split}",
       "\\ref{cone_metric} \\ref{theo1}", {"gamma", "seed"}, {"cone-compactification", "metricity"}},
      {"dm-flat", "neutral metric and 2-form of the flat projective structure", "\\ref{main_metric}", {"n"},
       {"cg-decomposition", "einstein", "full-compactification", "levi", "nijenhuis-tangential", "para-hermitian",
        "tractor"}},
      {"dm-random", "neutral metric of random polynomial projective structures (seeds seed..seed+count-1)",
       "\\ref{main_metric}", {"n", "degree", "seed", "bound", "count"},
       {"cg-decomposition", "einstein", "full-compactification", "levi", "nijenhuis-tangential", "para-hermitian",
        "path-ode", "projective-invariance", "tractor"}},
      {"eh", "Eguchi-Hanson metric and its T = 1/r compactification", "\\ref{Eguchi_Hanson}", {"a", "seed"},
       {"asymptotic-form", "connection-extension", "metricity", "ricci-flat"}},
      {"flat", "flat R^n in spherical coordinates, naive T = 1/r and the cone defining function", "\\ref{g_flat}",
       {"n", "seed"}, {"asymptotic-form", "beltrami-witness", "connection-extension"}},
      {"jets", "random composite functions for the jet engine", "artifact plumbing", {"seed", "count"},
       {"jet-ground-truth"}},
      {"warped", "warped pair g = dr^2 + f gamma, f = r^2 + c, and its kappa deformation", "\\ref{proplc}",
       {"c", "kappa", "gamma", "seed", "count"}, {"warped-equivalence"}},
  };
  return entries;
}

inline const CatalogEntry* find_catalog(const std::string& id) {
  for (const auto& e : catalog_entries())
    if (e.id == id) return &e;
  return nullptr;
}

struct CheckContext {
  const Scenario& sc;
  std::string check;
  double tol_scale = 1.0;

  double tol(double dflt) const {
    const auto it = sc.tolerances.find(check);
    return (it != sc.tolerances.end() ? it->second : dflt) * tol_scale;
  }
  int points(int dflt) const { return sc.points.value_or(dflt); }
  std::uint64_t seed() const { return sc.params.seed; }
};

struct CheckDef {
  std::string id;
  std::string anchor;
  std::string summary;
  std::function<void(const CheckContext&, CheckRecord&)> run;
};

namespace suite_detail {

inline MetricField gamma_metric(const std::string& name) {
  if (name == "sphere") return round_sphere(2);
  if (name == "torus") return flat_torus(2);
  if (name == "split") return split_flat_plane();
  throw std::invalid_argument("unknown gamma '" + name + "'");
}

inline std::vector<std::string> gamma_list(const std::string& g) {
  if (g == "all") return {"sphere", "torus", "split"};
  return {g};
}

/// LC(cone over γ) moved to T = (r²+1)^{-1/2} and changed by dT/T.
inline ConnectionField changed_cone_connection(const MetricField& gamma) {
  const MetricField g = cone(gamma), gbar = compactified_cone(gamma);
  const ChartMap m = cone_T_to_r(g, gbar);
  return projective_change(coordinate_transform(levi_civita(g), m),
                           upsilon_from_defining(m.source, [](Coords x) { return x[0]; }, 1.0));
}

/// Flat space in the T = 1/r chart, LC changed by dT/T.
struct NaiveFlat {
  ChartMap map;
  ConnectionField raw;
  ConnectionField changed;
};

inline NaiveFlat naive_flat(int n) {
  const MetricField g = flat_spherical(n);
  const ChartMap m = inverse_radius_map(g.chart());
  const ConnectionField raw = coordinate_transform(levi_civita(g), m);
  return {m, raw, projective_change(raw, upsilon_from_defining(m.source, [](Coords x) { return x[0]; }, 1.0))};
}

inline int structures(const Scenario& sc) { return sc.catalog == "dm-flat" ? 1 : sc.params.count; }

inline ProjectiveStructure structure(const Scenario& sc, int k) {
  if (sc.catalog == "dm-flat") return random_projective_structure(sc.params.n, 0, 0.0, 0);
  return random_projective_structure(sc.params.n, sc.params.degree, sc.params.bound,
                                     sc.params.seed + static_cast<std::uint64_t>(k));
}

inline CompactificationSpec spec_for(const Scenario& sc, const Chart& chart, double alpha, double C) {
  CompactificationSpec s;
  s.chart = chart;
  s.alpha = alpha;
  s.C = C;
  s.seed = sc.params.seed;
  if (!sc.ladder.empty()) s.ladder = sc.ladder;
  return s;
}

inline CompactificationSpec boundary_spec_for(const Scenario& sc, const BoundaryModel& bm, std::uint64_t seed, int samples) {
  CompactificationSpec s = boundary_spec(bm, seed, samples);
  if (!sc.ladder.empty()) s.ladder = sc.ladder;
  return s;
}

/// Status from residual vs tolerance plus any side conditions.
inline void finish(CheckRecord& rec, double residual, double tol, bool side_ok = true, const std::string& side = "") {
  rec.max_residual = residual;
  rec.tolerance = tol;
  rec.status = (residual <= tol && side_ok) ? CheckStatus::pass : CheckStatus::fail;
  if (!side_ok && !side.empty()) rec.detail = rec.detail.empty() ? side : rec.detail + "; " + side;
}

inline double inv_ratio(double r) { return std::isfinite(r) ? 1.0 / r : 0.0; }

inline std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(3) << x;
  return s.str();
}

// ---------------------------------------------------------------------------

inline void einstein(const CheckContext& ctx, CheckRecord& rec) {
  const int n = ctx.sc.params.n;
  const double lstar = dm_einstein_constant(n);
  double worst = 0.0, spread = 0.0, lsum = 0.0, lo = std::numeric_limits<double>::infinity(), hi = -lo;
  const int P = ctx.points(50), S = structures(ctx.sc);
  for (int k = 0; k < S; ++k) {
    const DMStructure dm = dm_metric(structure(ctx.sc, k));
    const EinsteinFit fit = einstein_residual(dm.g, sample_points(dm.chart, ctx.seed() + static_cast<std::uint64_t>(k), "einstein", P));
    worst = std::max({worst, fit.max_residual, std::abs(fit.lambda - lstar)});
    spread = std::max(spread, fit.lambda_spread);
    lsum += fit.lambda;
    lo = std::min(lo, fit.lambda);
    hi = std::max(hi, fit.lambda);
  }
  rec.samples = P * S;
  rec.constants = {{"lambda_star", lstar}, {"lambda_mean", lsum / S}, {"lambda_min", lo}, {"lambda_max", hi}, {"lambda_spread", spread}};
  rec.detail = "max over structures of |Ric - lambda g|/|g|, |lambda - lambda*| and the per-point lambda spread";
  finish(rec, std::max(worst, spread), ctx.tol(1e-7), lstar != 0.0, "lambda* vanishes");
}

inline void ricci_flat(const CheckContext& ctx, CheckRecord& rec) {
  const MetricField g = eguchi_hanson({ctx.sc.params.a});
  const ConnectionField lc = levi_civita(g);
  const auto pts = sample_points(g.chart(), ctx.seed(), "ricci-flat", ctx.points(100));
  double worst = 0.0;
  for (const auto& p : pts) worst = std::max(worst, max_abs(ricci_at(lc, p)));
  rec.samples = static_cast<int>(pts.size());
  rec.constants = {{"a", ctx.sc.params.a}};
  rec.detail = "max |Ric| of the Eguchi-Hanson metric";
  finish(rec, worst, ctx.tol(1e-8));
}

inline void cone_compactification(const CheckContext& ctx, CheckRecord& rec) {
  double diff = 0.0, cf = 0.0, ratio = std::numeric_limits<double>::infinity();
  bool ext = true;
  std::string witness;
  const int P = ctx.points(50);
  for (const auto& name : gamma_list(ctx.sc.params.gamma)) {
    const MetricField gm = gamma_metric(name);
    const MetricField gbar = compactified_cone(gm);
    const ConnectionField lcbar = levi_civita(gbar);
    const ConnectionField conn = changed_cone_connection(gm);
    for (const auto& p : sample_points(gbar.chart(), ctx.seed(), "cone", P))
      diff = std::max(diff, max_abs_diff(conn.values_at(p), lcbar.values_at(p)));
    const ExtensionVerdict v =
        connection_extension_check(conn, spec_for(ctx.sc, gbar.chart(), 1.0, 1.0), [&](const Point& p) { return lcbar.values_at(p); });
    ratio = std::min(ratio, v.min_ratio);
    cf = std::max(cf, v.closed_form_error);
    if (!v.pass) {
      ext = false;
      witness += name + ": " + v.witness + " ";
    }
    rec.samples += P;
  }
  rec.constants = {{"min_ratio", std::isfinite(ratio) ? ratio : -1.0}, {"boundary_closed_form_error", cf}};
  rec.detail = "max |changed LC(cone) - LC(compactified cone)|; extension on the ladder";
  finish(rec, diff, ctx.tol(1e-9), ext, "extension failed: " + witness);
}

inline void metricity(const CheckContext& ctx, CheckRecord& rec) {
  const int P = ctx.points(5);
  const double tol = ctx.tol(1e-7);
  MetricityVerdict v;
  if (ctx.sc.catalog == "cone") {
    const MetricField gm = gamma_metric(ctx.sc.params.gamma);
    v = metricity_check(changed_cone_connection(gm), true, sample_points(compactified_cone(gm).chart(), ctx.seed(), "metricity", P),
                        nullptr, tol);
  } else {
    const EHCompactified eh = eh_compactified({ctx.sc.params.a});
    const CompactificationSpec spec = spec_for(ctx.sc, eh.g.chart(), 1.0, eh.C);
    v = metricity_check(projective_change(levi_civita(eh.g), upsilon_from_defining(spec)), true,
                        sample_points(eh.g.chart(), ctx.seed(), "metricity", P), nullptr, tol);
  }
  rec.samples = P;
  rec.constants = {{"weyl", v.weyl}, {"ricci_antisymmetry", v.ricci_antisymmetry}, {"candidate_det", v.candidate_det}};
  rec.detail = v.witness;
  rec.max_residual = v.residual;
  rec.tolerance = tol;
  rec.status = v.status == MetricityStatus::pass ? CheckStatus::pass
               : v.status == MetricityStatus::fail ? CheckStatus::fail
                                                   : CheckStatus::inconclusive;
}

inline void beltrami_witness(const CheckContext& ctx, CheckRecord& rec) {
  const int n = ctx.sc.params.n, P = ctx.points(5);
  const double tol = ctx.tol(1e-7);
  const NaiveFlat nf = naive_flat(n);
  const MetricityVerdict naive = metricity_check(nf.changed, true, sample_points(nf.map.source, ctx.seed(), "metricity", P), nullptr, tol);
  const MetricField sphere = round_sphere(n - 1);
  const MetricityVerdict good = metricity_check(changed_cone_connection(sphere), true,
                                                sample_points(compactified_cone(sphere).chart(), ctx.seed(), "metricity", P), nullptr, tol);
  rec.samples = 2 * P;
  rec.constants = {{"naive_residual", naive.residual}, {"cone_residual", good.residual}};
  rec.detail = "naive T = 1/r: " + std::string(to_string(naive.status)) + " (" + naive.witness + "); cone T: " + to_string(good.status);
  const bool side = naive.status == MetricityStatus::fail && naive.residual > 1e-3 && good.status == MetricityStatus::pass;
  finish(rec, good.residual, tol, side, "expected the naive defining function to fail by more than 1e-3 and the cone one to pass");
}

inline void connection_extension(const CheckContext& ctx, CheckRecord& rec) {
  CompactificationSpec spec;
  ConnectionField raw, changed;
  if (ctx.sc.catalog == "eh") {
    const EHCompactified eh = eh_compactified({ctx.sc.params.a});
    spec = spec_for(ctx.sc, eh.g.chart(), 1.0, eh.C);
    raw = levi_civita(eh.g);
    changed = projective_change(raw, upsilon_from_defining(spec));
  } else {
    const NaiveFlat nf = naive_flat(ctx.sc.params.n);
    spec = spec_for(ctx.sc, nf.map.source, 1.0, 1.0);
    raw = nf.raw;
    changed = nf.changed;
  }
  if (ctx.sc.points) spec.samples = *ctx.sc.points;
  const ExtensionVerdict good = connection_extension_check(changed, spec);
  const ExtensionVerdict bad = connection_extension_check(raw, spec);
  rec.samples = spec.samples * static_cast<int>(spec.ladder.size());
  rec.constants = {{"min_ratio", std::isfinite(good.min_ratio) ? good.min_ratio : -1.0},
                   {"unchanged_min_ratio", std::isfinite(bad.min_ratio) ? bad.min_ratio : -1.0},
                   {"max_limit", good.max_limit}};
  rec.detail = "residual is 1/(smallest shrink ratio of successive slice differences)";
  if (!good.pass) rec.detail += "; " + good.witness;
  finish(rec, inv_ratio(good.min_ratio), 1.0 / spec.shrink, good.pass && !bad.pass,
         good.pass ? "the unchanged Levi-Civita connection also extended" : "changed connection does not extend");
}

inline void asymptotic_form(const CheckContext& ctx, CheckRecord& rec) {
  AsymptoticForm a;
  std::function<RealTensor(const Point&)> ref;
  MetricField gbar;
  if (ctx.sc.catalog == "eh") {
    const EHCompactified eh = eh_compactified({ctx.sc.params.a});
    CompactificationSpec spec = spec_for(ctx.sc, eh.g.chart(), 1.0, eh.C);
    if (ctx.sc.points) spec.samples = *ctx.sc.points;
    a = asymptotic_form_check(eh.g, spec);
    ref = [](const Point& y) {
      const auto x = seed_point(y, 0);
      const auto s = eh_sigma(x);
      JetTensor out = detail::zero_matrix(x);
      for (int k = 0; k < 3; ++k) detail::add_sym(out, Jet::constant(0.25, 4, 0), s[static_cast<std::size_t>(k)], s[static_cast<std::size_t>(k)]);
      return values(out);
    };
    rec.constants["C"] = eh.C;
  } else {
    const int n = ctx.sc.params.n;
    const MetricField g = flat_spherical(n);
    gbar = compactified_flat(n);
    CompactificationSpec spec = spec_for(ctx.sc, gbar.chart(), 1.0, 1.0);
    if (ctx.sc.points) spec.samples = *ctx.sc.points;
    a = asymptotic_form_check(coordinate_transform(g, cone_T_to_r(g, gbar)), spec);
    ref = [&gbar](const Point& y) { return gbar.values_at(y); };
    rec.constants["C"] = 1.0;
  }
  double err = 0.0;
  for (std::size_t i = 0; i < a.verdict.limits.size(); ++i)
    err = std::max(err, max_abs_diff(a.verdict.limits[i], ref(a.verdict.boundary_points[i])));
  rec.samples = static_cast<int>(a.verdict.limits.size());
  rec.constants["recovered_C_error"] = a.recovered_C_error;
  rec.constants["boundary_det"] = a.boundary_det;
  rec.detail = "max |h at T=0 - closed form|";
  const bool side = a.pass && a.recovered_C_error < ctx.tol_scale * 1e-9;
  finish(rec, err, ctx.tol(1e-7), side, "h does not extend or C is not recovered: " + a.verdict.witness);
}

inline void warped_equivalence(const CheckContext& ctx, CheckRecord& rec) {
  const auto& p = ctx.sc.params;
  const int triples = p.kappa ? 1 : p.count, P = ctx.points(10);
  static const char* cycle[] = {"sphere", "torus", "split"};
  double worst = 0.0;
  for (int t = 0; t < triples; ++t) {
    double c = p.c, kappa = p.kappa.value_or(0.0);
    std::string gname = p.gamma == "all" ? cycle[t % 3] : p.gamma;
    if (!p.kappa) {
      Stream s(p.seed, "warped", static_cast<std::uint64_t>(t));
      c = s.uniform(0.0, 2.0);
      kappa = s.uniform(-0.1, 1.0);
    }
    const WarpedMetrics w = warped(WarpedPair{[c](const Jet& r) { return r * r + c; }, gamma_metric(gname), kappa, {0.5, 3.0}});
    const ConnectionField changed = projective_change(levi_civita(w.g), w.upsilon);
    const ConnectionField lcbar = levi_civita(w.gbar);
    for (const auto& q : sample_points(w.g.chart(), p.seed + static_cast<std::uint64_t>(t), "warped", P))
      worst = std::max(worst, max_abs_diff(changed.values_at(q), lcbar.values_at(q)));
  }
  rec.samples = triples * P;
  rec.constants = {{"triples", triples}};
  rec.detail = "max |LC(gbar) - changed LC(g)| over (f, kappa, gamma) triples";
  finish(rec, worst, ctx.tol(1e-9));
}

inline void cg_decomposition(const CheckContext& ctx, CheckRecord& rec) {
  const bool flat = ctx.sc.catalog == "dm-flat";
  const int P = ctx.points(10), S = structures(ctx.sc);
  double recon = 0.0, closed = 0.0, boundary = 0.0;
  bool ext = true;
  std::string witness;
  for (int k = 0; k < S; ++k) {
    const ProjectiveStructure ps = structure(ctx.sc, k);
    const BoundaryModel bm = boundary_model(ps);
    const TensorField h = boundary_h(bm);
    const TensorField th = theta_field(bm.J, [](Coords y) { return y[0]; });
    const int d = bm.layout.dim();
    const std::uint64_t seed = ctx.seed() + static_cast<std::uint64_t>(k);
    for (const auto& y : sample_points(bm.chart, seed, "cg-interior", P)) {
      const RealTensor g = bm.g.values_at(y), hv = h.values_at(y), tv = th.values_at(y);
      const double T = y[0];
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          const double dT2 = (a == 0 && b == 0) ? 1.0 : 0.0;
          const double r = (tv(a) * tv(b) - dT2) / (4 * T * T) + hv(a, b) / T;
          recon = std::max(recon, std::abs(r - g(a, b)) / std::max(1.0, std::abs(g(a, b))));
        }
      closed = std::max(closed, max_abs_diff(hv, flat ? h_display(ps, y) : h_closed_form(ps, y)));
    }
    const ExtensionVerdict v = ladder_extension(boundary_spec_for(ctx.sc, bm, seed, 4), [&](const Point& y) { return h.values_at(y); });
    if (!v.pass) {
      ext = false;
      witness = v.witness;
    }
    for (std::size_t i = 0; i < v.limits.size(); ++i) {
      const Point& y = v.boundary_points[i];
      if (flat) {
        const RealTensor ref = h0_model(y, ps.n);
        for (int a = 1; a < d; ++a)
          for (int b = 1; b < d; ++b) boundary = std::max(boundary, std::abs(v.limits[i](a, b) - ref(a, b)));
      } else {
        const Eigen::MatrixXd B = distribution_basis(bm.layout, y);
        const Eigen::MatrixXd hd = B.transpose() * to_matrix(boundary_data(ps, y).hD) * B;
        const Eigen::MatrixXd hl = boundary_K(y, bm.layout) * (B.transpose() * to_matrix(v.limits[i]) * B);
        boundary = std::max(boundary, (hd - hl).cwiseAbs().maxCoeff());
      }
    }
    rec.samples += P;
  }
  rec.constants = {{"C", kParaC}, {"reconstruction", recon}, {"closed_form", closed}, {"boundary_error", boundary}};
  rec.detail = flat ? "g = (theta^2 - dT^2)/(4T^2) + h/T; h at T=0 vs the model closed form"
                    : "g = (theta^2 - dT^2)/(4T^2) + h/T; K h|_D vs h_D at T=0";
  const bool side = ext && boundary < ctx.tol_scale * 1e-6;
  finish(rec, std::max(recon, closed), ctx.tol(1e-9), side,
         ext ? "boundary value off by " + fmt(boundary) : "h does not extend: " + witness);
}

inline void para_hermitian_check(const CheckContext& ctx, CheckRecord& rec) {
  const int P = ctx.points(100), S = structures(ctx.sc);
  TripleResiduals worst;
  double dO = 0.0;
  for (int k = 0; k < S; ++k) {
    const DMStructure dm = dm_metric(structure(ctx.sc, k));
    const ParaHermitianTriple t = para_hermitian(dm);
    for (const auto& p : sample_points(dm.chart, ctx.seed() + static_cast<std::uint64_t>(k), "para-hermitian", P)) {
      const TripleResiduals r = triple_residuals(t, p);
      worst.j_squared = std::max(worst.j_squared, r.j_squared);
      worst.omega_antisym = std::max(worst.omega_antisym, r.omega_antisym);
      worst.anti_isometry = std::max(worst.anti_isometry, r.anti_isometry);
      worst.compatibility = std::max(worst.compatibility, r.compatibility);
      const auto x = seed_point(p, 1);
      dO = std::max(dO, max_abs(values(exterior_derivative(dm.omega(x), CoordinateDerivative(x)))));
    }
  }
  rec.samples = P * S;
  rec.constants = {{"j_squared", worst.j_squared}, {"anti_isometry", worst.anti_isometry},
                   {"compatibility", worst.compatibility}, {"d_omega", dO}};
  rec.detail = "J^2 = Id, g(J.,J.) = -g, Omega = g(., J.) in index form, d Omega = 0";
  finish(rec, std::max(worst.max(), dO), ctx.tol(1e-10));
}

inline void nijenhuis_tangential(const CheckContext& ctx, CheckRecord& rec) {
  const bool flat = ctx.sc.catalog == "dm-flat";
  const int S = structures(ctx.sc), samples = ctx.points(4);
  double worst = 0.0, ratio = std::numeric_limits<double>::infinity();
  bool ext = true;
  std::string witness;
  for (int k = 0; k < S; ++k) {
    const BoundaryModel bm = boundary_model(structure(ctx.sc, k));
    const CompactificationSpec spec = boundary_spec_for(ctx.sc, bm, ctx.seed() + static_cast<std::uint64_t>(k), samples);
    const ExtensionVerdict v = ladder_extension(spec, [&](const Point& y) { return nijenhuis_T_row(bm, y); });
    worst = std::max(worst, v.max_limit);
    ratio = std::min(ratio, v.min_ratio);
    if (!v.pass) {
      ext = false;
      witness = v.witness;
    }
    if (flat)
      for (auto y : spec.tangent_samples())
        for (double T : {1e-1, 1e-2, 1e-3}) {
          y[0] = T;
          worst = std::max(worst, max_abs(nijenhuis_T_row(bm, y)));
        }
  }
  rec.samples = S * samples;
  rec.constants = {{"min_ratio", std::isfinite(ratio) ? ratio : -1.0}};
  rec.detail = flat ? "N(dT) on slices and extrapolated" : "extrapolated boundary value of N(dT)";
  finish(rec, worst, ctx.tol(flat ? 1e-10 : 1e-6), ext, "N(dT) does not converge: " + witness);
}

inline void levi(const CheckContext& ctx, CheckRecord& rec) {
  const int P = ctx.points(30), S = structures(ctx.sc);
  double worst = 0.0, contact = std::numeric_limits<double>::infinity(), jcf = 0.0;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int k = 0; k < S; ++k) {
    const BoundaryModel bm = boundary_model(structure(ctx.sc, k));
    const auto pts = sample_points(bm.chart, ctx.seed() + static_cast<std::uint64_t>(k), "levi", P);
    const LeviReport r = levi_compatibility_check(bm, pts);
    worst = std::max({worst, r.residual, r.d_invariance});
    contact = std::min(contact, r.min_contact);
    jcf = std::max(jcf, r.j_closed_form);
    lo = std::min(lo, r.fitted_constant);
    hi = std::max(hi, r.fitted_constant);
  }
  rec.samples = P * S;
  rec.constants = {{"levi_constant", kLeviConstant}, {"fitted_constant_min", lo}, {"fitted_constant_max", hi},
                   {"min_contact_volume", contact}, {"j_closed_form", jcf}};
  rec.detail = "max |h_D - c dtheta0(J.,.)| on D and |theta0(JU)| + |dT(JU)|, boundary points";
  finish(rec, worst, ctx.tol(1e-8), contact > 1e-6, "contact form degenerates");
}

inline void projective_invariance(const CheckContext& ctx, CheckRecord& rec) {
  constexpr int kUpsilons = 20;
  const int P = ctx.points(10), S = structures(ctx.sc), n = ctx.sc.params.n;
  const BoundaryLayout L{n};
  double numeric = 0.0, coeff = 0.0;
  for (int k = 0; k < S; ++k) {
    const ProjectiveStructure ps = structure(ctx.sc, k);
    auto pts = sample_points(boundary_chart(n), ctx.seed() + static_cast<std::uint64_t>(k), "invariance", P);
    for (auto& y : pts) y[0] = 0.0;
    std::vector<BoundaryData> base;
    for (const auto& y : pts) base.push_back(boundary_data(ps, y));
    for (int u = 0; u < kUpsilons; ++u) {
      const auto ups = random_covector(n, 2, 0.5, ctx.seed() * 7919 + static_cast<std::uint64_t>(k * kUpsilons + u) + 1);
      const ProjectiveStructure pc = projective_change(ps, ups);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const BoundaryData bc = boundary_data(pc, pts[i]);
        numeric = std::max({numeric, max_abs_diff(base[i].hD, bc.hD), max_abs_diff(base[i].theta0, bc.theta0)});
        const RealTensor& t0 = base[i].Theta;
        const RealTensor& t1 = bc.Theta;
        for (int A = 0; A < n - 1; ++A)
          for (int B = 0; B < n - 1; ++B)
            numeric = std::max(numeric, std::abs(0.5 * (t0(A, B) + t0(B, A)) - 0.5 * (t1(A, B) + t1(B, A))));
      }
      if (n == 2) {
        const PathGeometry2D a = ode_from_projective(ps), b = ode_from_projective(pc);
        for (std::size_t c = 0; c < 4; ++c) coeff = std::max(coeff, max_coeff_diff(a.A[c], b.A[c]));
        for (const auto& y : pts) {
          const auto ca = a.coefficients(y[L.X(0)], y[L.Y()]), cb = b.coefficients(y[L.X(0)], y[L.Y()]);
          for (std::size_t c = 0; c < 4; ++c) numeric = std::max(numeric, std::abs(ca[c] - cb[c]));
        }
      }
    }
    rec.samples += P * kUpsilons;
  }
  rec.constants = {{"upsilons", kUpsilons}, {"coefficient_diff", coeff}};
  rec.detail = n == 2 ? "h_D, theta0, Theta_(AB) and ODE coefficients; coefficient_diff is the polynomial-level gap"
                      : "h_D, theta0 and Theta_(AB) at boundary points";
  // Polynomial arithmetic reorders additions, so "exact" means rounding level.
  finish(rec, numeric, ctx.tol(1e-9), coeff <= ctx.tol_scale * 1e-14, "ODE coefficient polynomials differ by " + fmt(coeff));
}

inline void tractor(const CheckContext& ctx, CheckRecord& rec) {
  const bool flat = ctx.sc.catalog == "dm-flat";
  const int P = ctx.points(20), S = structures(ctx.sc);
  double split = 0.0, curv = 0.0, witness = std::numeric_limits<double>::infinity();
  for (int k = 0; k < S; ++k) {
    const ProjectiveStructure ps = structure(ctx.sc, k);
    const std::uint64_t seed = ctx.seed() + static_cast<std::uint64_t>(k);
    for (const auto& p : sample_points(dm_chart(ps), seed, "splitting", P)) split = std::max(split, splitting_metric_crosscheck(ps, p).max());
    const CotractorConnection tc{ps};
    double f = 0.0;
    for (const auto& x : sample_points(ps.chart, seed, "tractor", 5)) f = std::max(f, max_abs(tractor_curvature_at(tc, x)));
    curv = std::max(curv, f);
    witness = std::min(witness, f);
  }
  rec.samples = P * S;
  rec.constants = {{"splitting", split}, {"curvature_max", curv}, {"curvature_witness_min", witness}};
  if (flat) {
    rec.detail = "splitting pairing vs the neutral metric; tractor curvature of the flat structure";
    finish(rec, std::max(split, curv), ctx.tol(1e-9));
  } else {
    rec.detail = "splitting pairing vs the neutral metric; curvature witness above 1e-3";
    finish(rec, split, ctx.tol(1e-9), witness > 1e-3, "tractor curvature witness " + fmt(witness) + " is not above 1e-3");
  }
}

inline void path_ode(const CheckContext& ctx, CheckRecord& rec) {
  const int S = structures(ctx.sc), steps = 400;
  double curve = 0.0, geo = 0.0;
  for (int k = 0; k < S; ++k) {
    const PathGeometry2D pg = ode_from_projective(structure(ctx.sc, k));
    curve = std::max(curve, integral_curve_check(pg, -0.5, 0.0, 0.3, 0.5, steps).residual());
    geo = std::max(geo, geodesic_projection_residual(pg, {-0.4, 0.1}, {1.0, 0.3}, steps, 0.002));
  }
  rec.samples = S * steps;
  rec.constants = {{"geodesic_projection", geo}};
  rec.detail = "lift Z = -dY/dX annihilates theta0 and theta1; projected geodesics solve the ODE";
  finish(rec, curve, ctx.tol(1e-7), geo < ctx.tol_scale * 1e-6, "projected geodesics deviate by " + fmt(geo));
}

inline void full_compactification(const CheckContext& ctx, CheckRecord& rec) {
  const int S = structures(ctx.sc), samples = ctx.points(4);
  int failed = 0;
  std::string names;
  for (int k = 0; k < S; ++k) {
    const CompactificationReport r = full_compactification_check(structure(ctx.sc, k), ctx.seed() + static_cast<std::uint64_t>(k), samples);
    for (const auto& c : r.checks) {
      double& slot = rec.constants[c.id];
      slot = std::max(slot, c.residual);
      if (!c.pass) {
        ++failed;
        names += c.id + " ";
      }
    }
  }
  rec.samples = S * samples;
  rec.detail = "residual counts failing sub-checks; constants hold each sub-check's worst residual";
  if (failed) rec.detail += "; failing: " + names;
  finish(rec, failed, 0.0);
}

inline void jet_ground_truth(const CheckContext& ctx, CheckRecord& rec) {
  const int count = ctx.sc.params.given.count("count") ? ctx.sc.params.count : 1000;
  const double tol = ctx.tol(1e-5);
  const fdcheck::GroundTruthReport r = fdcheck::jet_ground_truth(count, ctx.seed(), 3, tol);
  rec.samples = r.partials;
  rec.constants = {{"functions", r.functions}, {"failures", r.failures}};
  rec.detail = "all partials to order 3 vs Richardson-extrapolated central differences, relative error";
  finish(rec, r.max_rel_error, tol);
}

}  // namespace suite_detail

/// Alphabetical by id.
inline const std::vector<CheckDef>& check_registry() {
  namespace d = suite_detail;
  static const std::vector<CheckDef> defs = {
      {"asymptotic-form", "\\ref{project_comp}", "h = T(g - C dT^2/T^2) extends and matches its closed form at T=0", d::asymptotic_form},
      {"beltrami-witness", "Beltrami theorem", "naive T = 1/r fails metricity, the cone defining function passes", d::beltrami_witness},
      {"cg-decomposition", "\\ref{CG_Form} \\ref{h000}", "g from theta and h with C = 1/4; h extends; boundary value", d::cg_decomposition},
      {"cone-compactification", "\\ref{theo1}", "changed LC of the cone is LC of the compactified cone and extends", d::cone_compactification},
      {"connection-extension", "\\ref{defi1}", "Upsilon = dT/T changed connection extends, unchanged does not", d::connection_extension},
      {"einstein", "\\ref{metric}", "Ric = lambda* g with lambda* = 2(n+1)", d::einstein},
      {"full-compactification", "\\ref{our_thm}", "bundle of boundary checks on one structure", d::full_compactification},
      {"jet-ground-truth", "artifact plumbing", "jets vs finite differences on random composite functions", d::jet_ground_truth},
      {"levi", "\\ref{boundary_compatibility}", "h_D = c dtheta0(J.,.) on D and contact nondegeneracy", d::levi},
      {"metricity", "Beltrami theorem", "Beltrami witness: pass, fail or inconclusive", d::metricity},
      {"nijenhuis-tangential", "\\ref{Nijenhuis_condition}", "N(dT) tends to zero at the boundary", d::nijenhuis_tangential},
      {"para-hermitian", "\\ref{main_metric}", "J^2 = Id, anti-isometry, compatibility, d Omega = 0", d::para_hermitian_check},
      {"path-ode", "\\ref{ODE}", "integral curves of the boundary Pfaffian system solve the ODE", d::path_ode},
      {"projective-invariance", "\\ref{met_th} \\ref{ODE}", "boundary data and ODE coefficients under 20 random Upsilon", d::projective_invariance},
      {"ricci-flat", "\\ref{Eguchi_Hanson}", "Ric = 0 for Eguchi-Hanson", d::ricci_flat},
      {"tractor", "\\ref{tractor_con}", "splitting pairing is the neutral metric; curvature flat vs generic", d::tractor},
      {"warped-equivalence", "\\ref{proplc}", "LC(gbar) is the Upsilon-change of LC(g)", d::warped_equivalence},
  };
  return defs;
}

inline const CheckDef* find_check(const std::string& id) {
  for (const auto& d : check_registry())
    if (d.id == id) return &d;
  return nullptr;
}

/// Catalog-dependent validation. Throws ManifestError naming the key.
inline void validate_manifest(const Manifest& m) {
  for (std::size_t i = 0; i < m.scenarios.size(); ++i) {
    const Scenario& s = m.scenarios[i];
    const std::string where = "scenarios[" + std::to_string(i) + "]";
    const CatalogEntry* e = find_catalog(s.catalog);
    if (!e) throw ManifestError(where + ".catalog", "unknown catalog id '" + s.catalog + "'");
    for (const auto& k : s.params.given)
      if (std::find(e->params.begin(), e->params.end(), k) == e->params.end())
        throw ManifestError(where + ".params." + k, "not a parameter of catalog '" + s.catalog + "'");
    std::set<std::string> seen;
    for (std::size_t j = 0; j < s.checks.size(); ++j) {
      const std::string k = where + ".checks[" + std::to_string(j) + "]";
      if (!find_check(s.checks[j])) throw ManifestError(k, "unknown check '" + s.checks[j] + "'");
      if (std::find(e->checks.begin(), e->checks.end(), s.checks[j]) == e->checks.end())
        throw ManifestError(k, "check '" + s.checks[j] + "' does not apply to catalog '" + s.catalog + "'");
      if (!seen.insert(s.checks[j]).second) throw ManifestError(k, "duplicate check '" + s.checks[j] + "'");
    }
    for (const auto& [k, v] : s.tolerances)
      if (!seen.count(k)) throw ManifestError(where + ".tolerances." + k, "no such check in this scenario");
    if (seen.count("path-ode") && s.params.n != 2) throw ManifestError(where + ".params.n", "path-ode needs n = 2");
    if (seen.count("metricity") && s.params.gamma == "all") throw ManifestError(where + ".params.gamma", "metricity needs a single gamma");
    if (s.catalog == "dm-random" && s.params.n > 3 && s.params.count > 5)
      throw ManifestError(where + ".params.count", "at most 5 structures for n = 4");
  }
}

inline Manifest parse_manifest(const std::string& text) {
  Manifest m = parse_manifest_text(text);
  validate_manifest(m);
  return m;
}

inline CheckRecord run_check(const Scenario& sc, const std::string& check, double tol_scale) {
  const CheckDef* def = find_check(check);
  if (!def) throw std::invalid_argument("unknown check '" + check + "'");
  CheckRecord rec;
  rec.scenario = sc.id;
  rec.check = check;
  rec.anchor = def->anchor;
  rec.seed = sc.params.seed;
  const CheckContext ctx{sc, check, tol_scale};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    def->run(ctx, rec);
  } catch (const std::exception& e) {
    rec.status = CheckStatus::fail;
    rec.max_residual = std::numeric_limits<double>::quiet_NaN();
    rec.detail = std::string("error: ") + e.what();
  }
  rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

inline std::vector<std::string> report_notes() {
  return {
      "curvature: lambda* = 2(n+1) for the neutral metric, pinned by a finite-difference oracle on the flat model",
      "eh: h is computed by direct substitution of T = 1/r (C = 1, h at T=0 is (1/4)(s1^2 + s2^2 + s3^2)); "
      "the reference display of h differs by constant factors and is not used",
      "para-c-projective change: symmetrized reading Upsilon(JX)JY + Upsilon(JY)JX",
      "wedge and symmetric products carry a factor 1/2",
      "extension checks certify finitely many jet orders on the epsilon ladder, not smoothness to all orders",
      "projective-invariance: polynomial coefficients agree to rounding (<= 1e-14), not bit-for-bit",
  };
}

struct RunOptions {
  int jobs = 1;
  double tol_scale = 1.0;
};

/// Every (scenario, check) pair is a task; records come back in manifest
/// order whatever the thread count.
inline Report run_manifest(const Manifest& m, const RunOptions& opt, const std::string& label) {
  validate_manifest(m);
  if (!(opt.tol_scale > 0)) throw std::invalid_argument("tol-scale must be positive");
  std::vector<std::pair<std::size_t, std::size_t>> tasks;
  for (std::size_t i = 0; i < m.scenarios.size(); ++i)
    for (std::size_t j = 0; j < m.scenarios[i].checks.size(); ++j) tasks.emplace_back(i, j);
  Report rep;
  rep.manifest = label;
  rep.manifest_hash = manifest_hash(m.source);
  rep.notes = report_notes();
  rep.records.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      const Scenario& sc = m.scenarios[tasks[t].first];
      rep.records[t] = run_check(sc, sc.checks[tasks[t].second], opt.tol_scale);
    }
  };
  const int jobs = std::max(1, std::min<int>(opt.jobs, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int k = 1; k < jobs; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return rep;
}

/// The built-in manifest covering the acceptance criteria.
inline Json builtin_suite_json() {
  auto sc = [](std::string id, std::string cat, Json params, std::vector<std::string> checks, Json extra = Json::object()) {
    Json j{{"id", std::move(id)}, {"catalog", std::move(cat)}, {"params", std::move(params)}, {"checks", checks}};
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    return j;
  };
  Json s = Json::array();
  s.push_back(sc("einstein-n2", "dm-random", {{"n", 2}, {"degree", 2}, {"bound", 1.0}, {"seed", 0}, {"count", 20}}, {"einstein"}, {{"points", 50}}));
  s.push_back(sc("einstein-n3", "dm-random", {{"n", 3}, {"degree", 2}, {"bound", 1.0}, {"seed", 0}, {"count", 5}}, {"einstein"}, {{"points", 50}}));
  s.push_back(sc("einstein-flat", "dm-flat", {{"n", 2}}, {"einstein"}, {{"points", 50}}));
  s.push_back(sc("eh-ricci", "eh", {{"a", 1.0}}, {"ricci-flat"}, {{"points", 100}}));
  s.push_back(sc("eh-boundary", "eh", {{"a", 1.0}}, {"asymptotic-form", "connection-extension", "metricity"}));
  s.push_back(sc("cone-sphere", "cone", {{"gamma", "sphere"}}, {"cone-compactification", "metricity"}));
  s.push_back(sc("cone-torus", "cone", {{"gamma", "torus"}}, {"cone-compactification"}));
  s.push_back(sc("cone-split", "cone", {{"gamma", "split"}}, {"cone-compactification"}));
  s.push_back(sc("warped-random", "warped", {{"gamma", "all"}, {"seed", 3}, {"count", 10}}, {"warped-equivalence"}));
  s.push_back(sc("flat-beltrami", "flat", {{"n", 3}}, {"beltrami-witness", "connection-extension", "asymptotic-form"}));
  s.push_back(sc("cg-flat-n2", "dm-flat", {{"n", 2}}, {"cg-decomposition"}));
  s.push_back(sc("cg-flat-n3", "dm-flat", {{"n", 3}}, {"cg-decomposition"}));
  s.push_back(sc("cg-random", "dm-random", {{"n", 2}, {"seed", 16}, {"count", 3}}, {"cg-decomposition"}));
  s.push_back(sc("para-n2", "dm-random", {{"n", 2}, {"seed", 0}, {"count", 5}}, {"para-hermitian"}, {{"points", 100}}));
  s.push_back(sc("para-n3", "dm-random", {{"n", 3}, {"seed", 5}, {"count", 5}}, {"para-hermitian"}, {{"points", 100}}));
  s.push_back(sc("boundary-flat-n2", "dm-flat", {{"n", 2}}, {"nijenhuis-tangential", "levi", "tractor"}));
  s.push_back(sc("boundary-flat-n3", "dm-flat", {{"n", 3}}, {"nijenhuis-tangential", "levi"}));
  s.push_back(sc("boundary-n2", "dm-random", {{"n", 2}, {"seed", 0}, {"count", 10}}, {"nijenhuis-tangential", "levi"}, {{"points", 30}}));
  s.push_back(sc("boundary-n3", "dm-random", {{"n", 3}, {"seed", 0}, {"count", 3}}, {"nijenhuis-tangential", "levi"}, {{"points", 30}}));
  s.push_back(sc("invariance-n2", "dm-random", {{"n", 2}, {"seed", 40}, {"count", 3}}, {"projective-invariance"}));
  s.push_back(sc("invariance-n3", "dm-random", {{"n", 3}, {"seed", 40}, {"count", 2}}, {"projective-invariance"}));
  s.push_back(sc("tractor-random", "dm-random", {{"n", 2}, {"bound", 0.8}, {"seed", 400}, {"count", 3}}, {"tractor"}));
  s.push_back(sc("tractor-random-n3", "dm-random", {{"n", 3}, {"bound", 0.8}, {"seed", 400}, {"count", 2}}, {"tractor"}));
  s.push_back(sc("jets", "jets", {{"seed", 12}, {"count", 1000}}, {"jet-ground-truth"}));
  s.push_back(sc("path-ode", "dm-random", {{"n", 2}, {"bound", 0.3}, {"seed", 0}, {"count", 5}}, {"path-ode"}));
  s.push_back(sc("full-n2", "dm-random", {{"n", 2}, {"seed", 0}, {"count", 2}}, {"full-compactification"}));
  return Json{{"name", "paper-suite"}, {"scenarios", s}};
}

inline Manifest builtin_suite() { return parse_manifest_json(builtin_suite_json()); }

inline std::string list_catalog() {
  std::ostringstream out;
  out << std::left << std::setw(10) << "id" << std::setw(34) << "parameters" << std::setw(30) << "anchor" << "checks\n";
  for (const auto& e : catalog_entries()) {
    std::string params, checks;
    for (const auto& p : e.params) params += (params.empty() ? "" : ",") + p;
    for (const auto& c : e.checks) checks += (checks.empty() ? "" : ",") + c;
    out << std::setw(10) << e.id << std::setw(34) << params << std::setw(30) << e.anchor << checks << "\n";
  }
  return out.str();
}

namespace suite_detail {

inline void print_matrix(std::ostream& out, const std::string& label, const RealTensor& m) {
  out << label << " =\n";
  const int d = m.dim(0);
  for (int a = 0; a < d; ++a) {
    out << "  [";
    for (int b = 0; b < d; ++b) out << (b ? " " : "") << std::setw(11) << std::setprecision(5) << m(a, b);
    out << " ]\n";
  }
}

inline void print_point(std::ostream& out, const Chart& chart, const Point& p) {
  out << "at";
  for (std::size_t i = 0; i < p.size(); ++i) out << " " << chart.names[i] << "=" << std::setprecision(4) << p[i];
  out << "\n";
}

}  // namespace suite_detail

/// A few sample evaluations for one catalog entry.
inline std::string demo(const std::string& id) {
  namespace d = suite_detail;
  const CatalogEntry* e = find_catalog(id);
  if (!e) throw ManifestError("catalog", "unknown catalog id '" + id + "'");
  std::ostringstream out;
  out << e->id << ": " << e->description << "\nanchor: " << e->anchor << "\n\n";
  if (id == "cone") {
    const MetricField gbar = compactified_cone(round_sphere(2));
    const Point p = sample_points(gbar.chart(), 0, "demo", 1)[0];
    d::print_point(out, gbar.chart(), p);
    d::print_matrix(out, "compactified cone metric (gamma = round S^2)", gbar.values_at(p));
    const ConnectionField c = d::changed_cone_connection(round_sphere(2));
    out << "max |changed LC(cone) - LC(compactified)| = " << max_abs_diff(c.values_at(p), levi_civita(gbar).values_at(p)) << "\n";
  } else if (id == "dm-flat" || id == "dm-random") {
    const ProjectiveStructure ps = random_projective_structure(2, id == "dm-flat" ? 0 : 2, id == "dm-flat" ? 0.0 : 0.5, 1);
    const DMStructure dm = dm_metric(ps);
    const Point p = sample_points(dm.chart, 0, "demo", 1)[0];
    d::print_point(out, dm.chart, p);
    d::print_matrix(out, "neutral metric g (n = 2)", dm.g.values_at(p));
    const EinsteinFit fit = einstein_residual(dm.g, sample_points(dm.chart, 0, "demo", 5));
    out << "fitted lambda = " << std::setprecision(12) << fit.lambda << " (lambda* = " << dm_einstein_constant(2)
        << "), residual " << std::setprecision(3) << fit.max_residual << "\n";
  } else if (id == "eh") {
    const MetricField g = eguchi_hanson({1.0});
    const Point p = sample_points(g.chart(), 0, "demo", 1)[0];
    d::print_point(out, g.chart(), p);
    d::print_matrix(out, "Eguchi-Hanson metric (a = 1)", g.values_at(p));
    out << "max |Ric| = " << max_abs(ricci_at(levi_civita(g), p)) << "\n";
  } else if (id == "flat") {
    const MetricField g = flat_spherical(3), gbar = compactified_flat(3);
    const Point p = sample_points(g.chart(), 0, "demo", 1)[0];
    d::print_point(out, g.chart(), p);
    d::print_matrix(out, "flat metric, spherical coordinates", g.values_at(p));
    const Point q = sample_points(gbar.chart(), 0, "demo", 1)[0];
    d::print_point(out, gbar.chart(), q);
    d::print_matrix(out, "compactified flat metric", gbar.values_at(q));
  } else if (id == "jets") {
    const Point p{0.3, -0.4};
    std::shared_ptr<fdcheck::Expr> ex;
    Jet j;
    // first generator whose function actually mixes both variables
    for (std::uint64_t s = 7;; ++s) {
      std::mt19937_64 rng(s);
      ex = fdcheck::random_expr(rng, 2, 4);
      j = ex->eval(seed_point(p, 2));
      if (std::abs(j.partial({1, 1})) > 1e-2) break;
    }
    const auto f = [&](const Point& q) { return ex->eval(q); };
    out << "random f(x, y) at (0.3, -0.4)\n";
    for (const auto& a : fdcheck::multi_indices(2, 2))
      out << "  d^(" << a[0] << "," << a[1] << ") f: jet " << std::setprecision(12) << j.partial(a) << "  fd "
          << fdcheck::fd_partial_richardson(f, p, a) << "\n";
  } else if (id == "warped") {
    const WarpedMetrics w = warped(WarpedPair{[](const Jet& r) { return r * r + 0.5; }, round_sphere(2), 0.3, {0.5, 3.0}});
    const Point p = sample_points(w.g.chart(), 0, "demo", 1)[0];
    d::print_point(out, w.g.chart(), p);
    d::print_matrix(out, "g = dr^2 + (r^2 + 0.5) gamma", w.g.values_at(p));
    d::print_matrix(out, "gbar (kappa = 0.3)", w.gbar.values_at(p));
    out << "max |LC(gbar) - changed LC(g)| = "
        << max_abs_diff(levi_civita(w.gbar).values_at(p), projective_change(levi_civita(w.g), w.upsilon).values_at(p)) << "\n";
  }
  return out.str();
}

}  // namespace projcomp
