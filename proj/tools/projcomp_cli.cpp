#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "projcomp/suite.hpp"

using namespace projcomp;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

int default_jobs() {
  if (const char* env = std::getenv("PROJCOMP_JOBS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 256) return static_cast<int>(v);
    throw ManifestError("PROJCOMP_JOBS", "must be an integer in [1, 256]");
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

Manifest load(const std::string& source) {
  if (source == "paper-suite") return builtin_suite();
  std::ifstream in(source);
  if (!in) throw ManifestError("$", "cannot read manifest file '" + source + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str());
}

const char* tag(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "PASS";
    case CheckStatus::fail: return "FAIL";
    case CheckStatus::inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

int run(const std::string& source, const std::string& report_path, std::optional<int> jobs, double tol_scale) {
  const int j = jobs ? *jobs : default_jobs();
  if (j < 1) throw ManifestError("--jobs", "must be at least 1");
  if (!(tol_scale > 0) || !std::isfinite(tol_scale)) throw ManifestError("--tol-scale", "must be a positive number");
  const Manifest m = load(source);
  const Report rep = run_manifest(m, {j, tol_scale}, source);
  for (const auto& r : rep.records) {
    std::printf("%-13s %-22s %-22s residual=%-11.3e tol=%-9.2e %s\n", tag(r.status), r.scenario.c_str(), r.check.c_str(),
                r.max_residual, r.tolerance, r.anchor.c_str());
    if (r.status == CheckStatus::fail && !r.detail.empty()) std::printf("    %s\n", r.detail.c_str());
  }
  std::printf("%d checks: %d pass, %d fail, %d inconclusive\n", static_cast<int>(rep.records.size()), rep.count(CheckStatus::pass),
              rep.count(CheckStatus::fail), rep.count(CheckStatus::inconclusive));
  std::ofstream out(report_path);
  if (!out) throw ManifestError("--report", "cannot write '" + report_path + "'");
  out << dump_report(rep);
  std::printf("report: %s\n", report_path.c_str());
  return rep.ok() ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"projective compactification checks"};
  app.set_version_flag("--version", PROJCOMP_VERSION);
  app.require_subcommand(1);

  std::string manifest, report = "projcomp-report.json", demo_id;
  std::optional<int> jobs;
  double tol_scale = 1.0;

  auto* run_cmd = app.add_subcommand("run", "run a manifest (or the built-in 'paper-suite') and write a JSON report");
  run_cmd->add_option("manifest", manifest, "manifest JSON path or 'paper-suite'")->required();
  run_cmd->add_option("--report", report, "report path")->capture_default_str();
  run_cmd->add_option("--jobs", jobs, "worker threads (default: $PROJCOMP_JOBS or hardware threads)");
  run_cmd->add_option("--tol-scale", tol_scale, "multiplies every tolerance")->capture_default_str();

  auto* list_cmd = app.add_subcommand("list", "catalog ids, parameters and anchors");
  auto* demo_cmd = app.add_subcommand("demo", "sample evaluations of one catalog entry");
  demo_cmd->add_option("catalog-id", demo_id)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run_cmd) return run(manifest, report, jobs, tol_scale);
    if (*list_cmd) {
      std::cout << list_catalog();
      return 0;
    }
    if (*demo_cmd) {
      std::cout << demo(demo_id);
      return 0;
    }
  } catch (const ManifestError& e) {
    std::cerr << "projcomp: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "projcomp: " << e.what() << "\n";
    return kExitFail;
  }
  return 0;
}
