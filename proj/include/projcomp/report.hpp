// Manifest and report types with their JSON forms. Parsing here is purely
// syntactic (types, ranges, unknown keys); catalog-dependent validation lives
// in suite.hpp.
#pragma once

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "projcomp/random.hpp"

namespace projcomp {

using Json = nlohmann::ordered_json;

#ifndef PROJCOMP_VERSION
#define PROJCOMP_VERSION "0.0.0"
#endif

/// Configuration problems; `key()` is the dotted path of the offending entry.
class ManifestError : public std::runtime_error {
 public:
  ManifestError(std::string key, const std::string& msg)
      : std::runtime_error("manifest error at '" + key + "': " + msg), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

enum class CheckStatus { pass, fail, inconclusive };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::inconclusive: return "inconclusive";
  }
  return "fail";
}

inline CheckStatus status_from_string(const std::string& s) {
  if (s == "pass") return CheckStatus::pass;
  if (s == "fail") return CheckStatus::fail;
  if (s == "inconclusive") return CheckStatus::inconclusive;
  throw std::invalid_argument("unknown status '" + s + "'");
}

struct ScenarioParams {
  int n = 2;
  int degree = 2;
  std::uint64_t seed = 0;
  double bound = 0.5;
  double a = 1.0;
  std::optional<double> kappa;
  double c = 0.0;
  std::string gamma = "sphere";
  int count = 1;
  std::set<std::string> given;  // keys present in the manifest
};

struct Scenario {
  std::string id;
  std::string catalog;
  ScenarioParams params;
  std::vector<std::string> checks;
  std::map<std::string, double> tolerances;
  std::optional<int> points;
  std::vector<double> ladder;  // empty: the check's default
};

struct Manifest {
  std::string name;
  std::vector<Scenario> scenarios;
  Json source;  // canonical JSON, hashed into the report
};

struct CheckRecord {
  std::string scenario;
  std::string check;
  std::string anchor;
  CheckStatus status = CheckStatus::fail;
  double max_residual = 0.0;
  double tolerance = 0.0;
  std::map<std::string, double> constants;
  int samples = 0;
  std::uint64_t seed = 0;
  double wall_time = 0.0;  // seconds; the only nondeterministic field
  std::string detail;
};

struct Report {
  std::string tool = "projcomp";
  std::string version = PROJCOMP_VERSION;
  std::string manifest;
  std::string manifest_hash;
  std::vector<std::string> notes;  // conventions and readings the numbers depend on
  std::vector<CheckRecord> records;

  int count(CheckStatus s) const {
    int k = 0;
    for (const auto& r : records) k += r.status == s;
    return k;
  }
  bool ok() const { return count(CheckStatus::fail) == 0; }
};

// ---------------------------------------------------------------------------
// Manifest parsing

namespace detail {

inline void reject_unknown(const Json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || it.key() == k;
    if (!ok) throw ManifestError(where.empty() ? it.key() : where + "." + it.key(), "unknown key");
  }
}

inline double get_number(const Json& v, const std::string& key, double lo, double hi) {
  if (!v.is_number()) throw ManifestError(key, "expected a number");
  const double x = v.get<double>();
  if (!(x >= lo && x <= hi)) {
    std::ostringstream m;
    m << "value " << x << " outside [" << lo << ", " << hi << "]";
    throw ManifestError(key, m.str());
  }
  return x;
}

inline int get_int(const Json& v, const std::string& key, int lo, int hi) {
  if (!v.is_number_integer()) throw ManifestError(key, "expected an integer");
  const auto x = v.get<std::int64_t>();
  if (x < lo || x > hi) throw ManifestError(key, "value " + std::to_string(x) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(x);
}

inline std::string get_string(const Json& v, const std::string& key) {
  if (!v.is_string()) throw ManifestError(key, "expected a string");
  return v.get<std::string>();
}

inline ScenarioParams parse_params(const Json& j, const std::string& where) {
  if (!j.is_object()) throw ManifestError(where, "expected an object");
  reject_unknown(j, where, {"n", "degree", "seed", "bound", "a", "kappa", "c", "gamma", "count"});
  ScenarioParams p;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string k = where + "." + it.key();
    const Json& v = it.value();
    if (it.key() == "n") p.n = get_int(v, k, 2, 4);
    if (it.key() == "degree") p.degree = get_int(v, k, 0, 3);
    if (it.key() == "seed") {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        throw ManifestError(k, "expected a non-negative integer");
      p.seed = v.get<std::uint64_t>();
    }
    if (it.key() == "bound") p.bound = get_number(v, k, 0.0, 1.0);
    if (it.key() == "a") p.a = get_number(v, k, 0.1, 10.0);
    if (it.key() == "kappa") p.kappa = get_number(v, k, -0.1, 2.0);
    if (it.key() == "c") p.c = get_number(v, k, -0.2, 2.0);
    if (it.key() == "gamma") {
      p.gamma = get_string(v, k);
      if (p.gamma != "sphere" && p.gamma != "torus" && p.gamma != "split" && p.gamma != "all")
        throw ManifestError(k, "expected one of sphere, torus, split, all");
    }
    if (it.key() == "count") p.count = get_int(v, k, 1, 10000);
    p.given.insert(it.key());
  }
  return p;
}

inline Scenario parse_scenario(const Json& j, const std::string& where) {
  if (!j.is_object()) throw ManifestError(where, "expected an object");
  reject_unknown(j, where, {"id", "catalog", "params", "checks", "tolerances", "points", "ladder"});
  Scenario s;
  if (!j.contains("id")) throw ManifestError(where + ".id", "missing");
  if (!j.contains("catalog")) throw ManifestError(where + ".catalog", "missing");
  if (!j.contains("checks")) throw ManifestError(where + ".checks", "missing");
  s.id = get_string(j.at("id"), where + ".id");
  if (s.id.empty()) throw ManifestError(where + ".id", "empty id");
  s.catalog = get_string(j.at("catalog"), where + ".catalog");
  if (j.contains("params")) s.params = parse_params(j.at("params"), where + ".params");
  const Json& checks = j.at("checks");
  if (!checks.is_array() || checks.empty()) throw ManifestError(where + ".checks", "expected a non-empty array");
  for (std::size_t i = 0; i < checks.size(); ++i)
    s.checks.push_back(get_string(checks[i], where + ".checks[" + std::to_string(i) + "]"));
  if (j.contains("tolerances")) {
    const Json& t = j.at("tolerances");
    if (!t.is_object()) throw ManifestError(where + ".tolerances", "expected an object");
    for (auto it = t.begin(); it != t.end(); ++it)
      s.tolerances[it.key()] = get_number(it.value(), where + ".tolerances." + it.key(), 1e-300, 1.0);
  }
  if (j.contains("points")) s.points = get_int(j.at("points"), where + ".points", 2, 1000);
  if (j.contains("ladder")) {
    const Json& l = j.at("ladder");
    const std::string k = where + ".ladder";
    if (!l.is_array() || l.size() < 3) throw ManifestError(k, "expected at least three values");
    for (std::size_t i = 0; i < l.size(); ++i) {
      const double e = get_number(l[i], k + "[" + std::to_string(i) + "]", 1e-12, 0.5);
      if (!s.ladder.empty() && !(e < s.ladder.back())) throw ManifestError(k + "[" + std::to_string(i) + "]", "ladder must decrease");
      s.ladder.push_back(e);
    }
  }
  return s;
}

}  // namespace detail

/// Syntactic parse. Throws ManifestError.
inline Manifest parse_manifest_json(const Json& j) {
  if (!j.is_object()) throw ManifestError("$", "manifest must be a JSON object");
  detail::reject_unknown(j, "", {"name", "scenarios"});
  Manifest m;
  if (j.contains("name")) m.name = detail::get_string(j.at("name"), "name");
  if (!j.contains("scenarios")) throw ManifestError("scenarios", "no scenarios");
  const Json& sc = j.at("scenarios");
  if (!sc.is_array()) throw ManifestError("scenarios", "expected an array");
  if (sc.empty()) throw ManifestError("scenarios", "no scenarios");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < sc.size(); ++i) {
    const std::string where = "scenarios[" + std::to_string(i) + "]";
    Scenario s = detail::parse_scenario(sc[i], where);
    if (!ids.insert(s.id).second) throw ManifestError(where + ".id", "duplicate id '" + s.id + "'");
    m.scenarios.push_back(std::move(s));
  }
  m.source = j;
  return m;
}

inline Manifest parse_manifest_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ManifestError("$", std::string("invalid JSON: ") + e.what());
  }
  return parse_manifest_json(j);
}

inline std::string manifest_hash(const Json& j) {
  std::ostringstream h;
  h << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << fnv1a(j.dump());
  return h.str();
}

// ---------------------------------------------------------------------------
// Report JSON

namespace detail {

inline Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }
inline double number_from(const Json& v) { return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>(); }

}  // namespace detail

inline Json to_json(const CheckRecord& r) {
  Json c = Json::object();
  for (const auto& [k, v] : r.constants) c[k] = detail::number_or_null(v);
  return Json{{"scenario", r.scenario},
              {"check", r.check},
              {"anchor", r.anchor},
              {"status", to_string(r.status)},
              {"max_residual", detail::number_or_null(r.max_residual)},
              {"tolerance", detail::number_or_null(r.tolerance)},
              {"constants", c},
              {"samples", r.samples},
              {"seed", r.seed},
              {"wall_time", r.wall_time},
              {"detail", r.detail}};
}

inline CheckRecord record_from_json(const Json& j) {
  CheckRecord r;
  r.scenario = j.at("scenario").get<std::string>();
  r.check = j.at("check").get<std::string>();
  r.anchor = j.at("anchor").get<std::string>();
  r.status = status_from_string(j.at("status").get<std::string>());
  r.max_residual = detail::number_from(j.at("max_residual"));
  r.tolerance = detail::number_from(j.at("tolerance"));
  for (auto it = j.at("constants").begin(); it != j.at("constants").end(); ++it) r.constants[it.key()] = detail::number_from(it.value());
  r.samples = j.at("samples").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.wall_time = j.at("wall_time").get<double>();
  r.detail = j.at("detail").get<std::string>();
  return r;
}

inline Json to_json(const Report& rep) {
  Json recs = Json::array();
  for (const auto& r : rep.records) recs.push_back(to_json(r));
  return Json{{"tool", rep.tool},
              {"version", rep.version},
              {"manifest", rep.manifest},
              {"manifest_hash", rep.manifest_hash},
              {"summary",
               {{"total", rep.records.size()},
                {"pass", rep.count(CheckStatus::pass)},
                {"fail", rep.count(CheckStatus::fail)},
                {"inconclusive", rep.count(CheckStatus::inconclusive)}}},
              {"notes", rep.notes},
              {"records", recs}};
}

inline Report report_from_json(const Json& j) {
  Report rep;
  rep.tool = j.at("tool").get<std::string>();
  rep.version = j.at("version").get<std::string>();
  rep.manifest = j.at("manifest").get<std::string>();
  rep.manifest_hash = j.at("manifest_hash").get<std::string>();
  rep.notes = j.at("notes").get<std::vector<std::string>>();
  for (const auto& r : j.at("records")) rep.records.push_back(record_from_json(r));
  const Json& s = j.at("summary");
  if (s.at("total").get<std::size_t>() != rep.records.size() || s.at("pass").get<int>() != rep.count(CheckStatus::pass) ||
      s.at("fail").get<int>() != rep.count(CheckStatus::fail) ||
      s.at("inconclusive").get<int>() != rep.count(CheckStatus::inconclusive))
    throw std::invalid_argument("report summary does not match its records");
  return rep;
}

inline std::string dump_report(const Report& rep) { return to_json(rep).dump(2) + "\n"; }

/// Records whose status contradicts residual vs tolerance: a pass must have
/// a finite residual within tolerance, and only metricity may be
/// inconclusive.
inline std::vector<std::string> report_inconsistencies(const Report& rep) {
  std::vector<std::string> out;
  for (const auto& r : rep.records) {
    const std::string tag = r.scenario + "/" + r.check;
    if (r.status == CheckStatus::pass && !(r.max_residual <= r.tolerance)) out.push_back(tag + ": pass with residual above tolerance");
    if (r.status == CheckStatus::inconclusive && r.check != "metricity") out.push_back(tag + ": inconclusive outside metricity");
    if (r.anchor.empty()) out.push_back(tag + ": missing anchor");
  }
  return out;
}

/// Everything except wall times, for determinism comparisons.
inline Json residual_fields(const Report& rep) {
  Json out = Json::array();
  for (const auto& r : rep.records) {
    Json j = to_json(r);
    j.erase("wall_time");
    out.push_back(j);
  }
  return out;
}

}  // namespace projcomp
