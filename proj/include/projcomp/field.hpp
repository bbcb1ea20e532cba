// Charts and chart-local fields. A field is a pure function from seeded
// coordinate jets to jet-valued components, so evaluating it at a point with
// order k yields all partial derivatives up to k for free.
#pragma once

#include <functional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "projcomp/jet.hpp"
#include "projcomp/tensor.hpp"

namespace projcomp {

using Point = std::vector<double>;
using Coords = std::span<const Jet>;

/// ∂/∂x^a for jets that are functions of coordinate jets x. When every x^a is
/// a plain seeded variable this is Jet::derivative on that variable;
/// otherwise the chain rule through (∂x/∂z)⁻¹ is applied, which needs as many
/// coordinates as jet variables.
class CoordinateDerivative {
 public:
  CoordinateDerivative() = default;

  explicit CoordinateDerivative(Coords x) {
    dim_ = static_cast<int>(x.size());
    bool plain = true;
    for (const auto& c : x) {
      const int v = seed_variable(c);
      if (v < 0) {
        plain = false;
        break;
      }
      vars_.push_back(v);
    }
    if (plain) return;
    vars_.clear();
    const int nv = x[0].num_vars();
    if (nv != dim_) throw JetError("coordinate derivative: composite coordinates must match the jet variable count");
    if (x[0].order() < 1) throw JetError("coordinate derivative: jet order exhausted");
    JetTensor Jy({dim_, nv}, Jet());
    for (int i = 0; i < dim_; ++i)
      for (int z = 0; z < nv; ++z) Jy(i, z) = x[static_cast<std::size_t>(i)].derivative(z);
    try {
      inv_ = inverse(Jy);  // inv_(z, a) = ∂z/∂x^a
    } catch (const GeometryError&) {
      throw GeometryError("coordinate derivative: singular coordinate Jacobian");
    }
    general_ = true;
  }

  bool identity() const { return !general_ && vars_.empty(); }

  Jet operator()(const Jet& f, int a) const {
    if (!general_) return f.derivative(vars_.empty() ? a : vars_[static_cast<std::size_t>(a)]);
    const int k = std::min(f.order() - 1, inv_(0, 0).order());
    Jet out = Jet::constant(0.0, f.num_vars(), k);
    for (int z = 0; z < dim_; ++z) out += f.derivative(z).truncated(k) * inv_(z, a).truncated(k);
    return out;
  }

  JetTensor operator()(const JetTensor& t, int a) const {
    return t.map([&](const Jet& j) { return (*this)(j, a); });
  }

 private:
  static int seed_variable(const Jet& c) {
    const auto co = c.coeffs();
    const int nv = c.num_vars();
    if (c.order() < 1) return -1;
    int var = -1;
    for (std::size_t i = 1; i < co.size(); ++i) {
      if (co[i] == 0.0) continue;
      if (co[i] == 1.0 && i <= static_cast<std::size_t>(nv) && var < 0)
        var = static_cast<int>(i) - 1;
      else
        return -1;
    }
    return var;
  }

  int dim_ = 0;
  std::vector<int> vars_;
  bool general_ = false;
  JetTensor inv_;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct Chart {
  std::vector<std::string> names;
  std::vector<Interval> box;
  /// Distance-like measure to the nearest coordinate singularity; samplers
  /// reject points where it falls below kSingularMargin.
  std::function<double(const Point&)> singular_distance;

  static constexpr double kSingularMargin = 0.05;

  Chart() = default;
  Chart(std::vector<std::string> n, std::vector<Interval> b,
        std::function<double(const Point&)> singular = nullptr)
      : names(std::move(n)), box(std::move(b)), singular_distance(std::move(singular)) {
    validate();
  }

  int dim() const { return static_cast<int>(names.size()); }

  void validate() const {
    if (names.empty()) throw std::invalid_argument("chart: dimension must be at least 1");
    if (box.size() != names.size()) throw std::invalid_argument("chart: box and names disagree in size");
    std::set<std::string> seen(names.begin(), names.end());
    if (seen.size() != names.size()) throw std::invalid_argument("chart: coordinate names must be distinct");
    for (const auto& iv : box)
      if (!(iv.lo <= iv.hi)) throw std::invalid_argument("chart: empty sampling interval");
  }

  bool contains(const Point& p) const {
    if (static_cast<int>(p.size()) != dim()) return false;
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i] < box[i].lo || p[i] > box[i].hi) return false;
    return true;
  }

  bool admissible(const Point& p) const {
    return contains(p) && (!singular_distance || singular_distance(p) >= kSingularMargin);
  }
};

struct Valence {
  int contra = 0;
  int co = 0;
  int rank() const { return contra + co; }
};

/// Declared symmetry of the covariant slots.
enum class Symmetry { none, symmetric, antisymmetric };

/// Components are stored with all contravariant slots first.
class TensorField {
 public:
  using Eval = std::function<JetTensor(Coords)>;

  TensorField() = default;
  /// `depth` is the number of derivative orders the evaluation consumes
  /// (components come back with order seed − depth).
  TensorField(Chart chart, Valence valence, Eval eval, Symmetry symmetry = Symmetry::none, int depth = 0)
      : chart_(std::move(chart)), valence_(valence), eval_(std::move(eval)), symmetry_(symmetry), depth_(depth) {}

  const Chart& chart() const { return chart_; }
  Valence valence() const { return valence_; }
  Symmetry symmetry() const { return symmetry_; }
  int dim() const { return chart_.dim(); }
  int depth() const { return depth_; }

  JetTensor operator()(Coords x) const {
    JetTensor t = eval_(x);
#ifndef NDEBUG
    check_symmetry(t);
#endif
    return t;
  }

  JetTensor at(const Point& p, int order) const {
    const auto x = seed_point(p, order);
    return (*this)(x);
  }

  RealTensor values_at(const Point& p) const { return values(at(p, depth_)); }

  /// Throws if the declared symmetry fails by more than tol (absolute).
  void check_symmetry(const JetTensor& t, double tol = 1e-12) const {
    if (symmetry_ == Symmetry::none || valence_.co < 2) return;
    const double sign = symmetry_ == Symmetry::symmetric ? 1.0 : -1.0;
    const int last = t.rank() - 1;
    for (std::size_t f = 0; f < t.size(); ++f) {
      auto idx = t.unflatten(f);
      auto swapped = idx;
      std::swap(swapped[static_cast<std::size_t>(last)], swapped[static_cast<std::size_t>(last - 1)]);
      const double a = t.data()[f].value();
      const double b = t.at(swapped).value();
      if (std::abs(a - sign * b) > tol * std::max(1.0, std::abs(a)))
        throw GeometryError("tensor field violates its declared symmetry");
    }
  }

 private:
  Chart chart_;
  Valence valence_;
  Eval eval_;
  Symmetry symmetry_ = Symmetry::none;
  int depth_ = 0;
};

/// Symmetric (0,2) field with a nondegeneracy contract.
class MetricField : public TensorField {
 public:
  static constexpr double kMinAbsDeterminant = 1e-10;

  MetricField() = default;
  MetricField(Chart chart, Eval eval, int depth = 0)
      : TensorField(std::move(chart), {0, 2}, std::move(eval), Symmetry::symmetric, depth) {}

  /// Throws GeometryError at the first sampled point with |det g| <= 1e-10.
  void check_nondegenerate(std::span<const Point> points) const {
    for (const auto& p : points) {
      const double det = determinant(values_at(p));
      if (!(std::abs(det) > kMinAbsDeterminant)) throw GeometryError("metric is degenerate at a sampled point");
    }
  }
};

/// Γ^k_ij stored as (k, i, j) with ∇_{∂_i} ∂_j = Γ^k_ij ∂_k.
class ConnectionField {
 public:
  using Eval = std::function<JetTensor(Coords)>;

  ConnectionField() = default;
  ConnectionField(Chart chart, Eval eval, bool torsion_free = true, int depth = 0)
      : chart_(std::move(chart)), eval_(std::move(eval)), torsion_free_(torsion_free), depth_(depth) {}

  const Chart& chart() const { return chart_; }
  int dim() const { return chart_.dim(); }
  bool torsion_free() const { return torsion_free_; }
  int depth() const { return depth_; }

  JetTensor operator()(Coords x) const { return eval_(x); }
  JetTensor at(const Point& p, int order) const {
    const auto x = seed_point(p, order);
    return eval_(x);
  }
  RealTensor values_at(const Point& p) const { return values(at(p, depth_)); }

 private:
  Chart chart_;
  Eval eval_;
  bool torsion_free_ = true;
  int depth_ = 0;
};

using ScalarFunction = std::function<Jet(Coords)>;

/// A smooth map from a source chart into the coordinates of a target chart.
struct ChartMap {
  Chart source;
  Chart target;
  std::function<std::vector<Jet>(Coords)> eval;
};

/// dT of a scalar as a covector field (order drops by one).
inline TensorField differential(const Chart& chart, ScalarFunction f) {
  return TensorField(chart, {0, 1}, [f = std::move(f)](Coords x) {
    const Jet v = f(x);
    const CoordinateDerivative D(x);
    JetTensor out({static_cast<int>(x.size())}, Jet());
    for (int i = 0; i < static_cast<int>(x.size()); ++i) out(i) = D(v, i);
    return out;
  }, Symmetry::none, 1);
}

inline Jet zero_jet(const Jet& like) { return Jet::constant(0.0, like.num_vars(), like.order()); }

}  // namespace projcomp
