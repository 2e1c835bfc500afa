// rmframe: run experiment suites, list the metric catalog, or check one
// criterion from flags. Exit codes: 0 consistent, 1 violations or
// inconclusive, 2 errors.

#include <rmframe/experiment.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

using namespace rmframe;

int exit_code(const SuiteReport& rep) {
  if (rep.stats.failed_inputs > 0) return 2;
  return rep.verdict == Verdict::consistent ? 0 : 1;
}

void print_summary(const SuiteReport& rep, std::ostream& os) {
  os << "suite " << rep.config.suite_id << " on " << rep.metric_label << "\n";
  // Per criterion: verdict counts and the worst value of each residual.
  for (const auto& name : rep.config.criteria) {
    std::map<std::string, int> counts;
    std::vector<std::pair<std::string, double>> worst;
    for (const auto& e : rep.entries) {
      if (e.criterion != name) continue;
      ++counts[e.failed() ? "error" : to_string(e.report.verdict)];
      for (const auto& r : e.report.residuals) {
        auto it = std::find_if(worst.begin(), worst.end(), [&](const auto& w) { return w.first == r.name; });
        if (it == worst.end())
          worst.emplace_back(r.name, r.value);
        else if (std::isnan(it->second) || r.value > it->second)
          it->second = r.value;
      }
    }
    os << "  " << name << ":";
    for (const auto& [v, n] : counts) os << " " << v << "=" << n;
    for (const auto& [r, v] : worst) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.3e", v);
      os << " | max " << r << " " << buf;
    }
    os << "\n";
  }
  for (const auto& e : rep.entries)
    if (e.failed()) os << "  error [" << e.criterion << ", sphere " << e.sphere_index << "]: " << e.error << "\n";
  os << "summary: " << rep.summary << "\n";
}

int finish(const SuiteReport& rep, const std::string& csv, const std::string& json, const std::string& out_dir,
           bool quiet) {
  SuiteReport r = rep;
  if (!csv.empty()) r.config.output.csv = csv;
  if (!json.empty()) r.config.output.json = json;
  for (const auto& path : emit_configured(r, out_dir))
    if (!quiet) std::cerr << "wrote " << path << "\n";
  if (!quiet) print_summary(rep, std::cout);
  return exit_code(rep);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constant-curvature evidence from rotation-minimizing frames on geodesic spheres"};
  app.require_subcommand(1);

  std::string config_path, csv, json, out_dir = ".";
  bool quiet = false, print_config = false;
  auto* run = app.add_subcommand("run", "Run the suite described by a config file");
  run->add_option("config", config_path, "Config file (key = value lines)")->required();
  run->add_option("--csv", csv, "CSV report path (overrides output.csv)");
  run->add_option("--json", json, "JSON report path (overrides output.json)");
  run->add_option("--out-dir", out_dir, "Directory for formats listed without a path");
  run->add_flag("--print-config", print_config, "Echo the canonical config before running");
  run->add_flag("-q,--quiet", quiet, "Only set the exit code");

  auto* list = app.add_subcommand("list-catalog", "List catalog metrics, parameters and radius bounds");

  SuiteConfig chk;
  chk.suite_id = "check";
  std::string criterion, center, normal = "spacelike";
  double radius = 0.0;
  std::uint64_t seed = 0;
  auto* check = app.add_subcommand("check", "Evaluate one criterion from inline flags");
  check->add_option("--metric", chk.metric.name, "Catalog metric name")->required();
  check->add_option("--radius", radius, "Geodesic sphere radius")->required();
  check->add_option("--seed", seed, "Seed for centers, sample points and curves")->required();
  check->add_option("--criterion", criterion, "Criterion name")->required();
  check->add_option("--dim", chk.metric.dim, "Manifold dimension");
  check->add_option("--r", chk.metric.r, "Curvature radius r");
  check->add_option("--nu", chk.metric.nu, "Metric index");
  check->add_option("--amplitude", chk.metric.amplitude, "conformal_perturbed amplitude A");
  check->add_option("--frequency", chk.metric.frequency, "conformal_perturbed frequency omega");
  check->add_option("--coords", chk.metric.coords, "sphere chart: stereographic | polar");
  check->add_option("--center", center, "Sphere center as comma-separated coordinates (default: one seeded center)");
  check->add_option("--normal", normal, "Radial normal for semi metrics: spacelike | timelike");
  check->add_option("--curves", chk.curves.count, "Number of seeded curves");
  check->add_option("--order", chk.curves.order, "Fourier order of the direction curves");
  check->add_option("--min-speed", chk.curves.min_speed, "Speed floor of the direction curves");
  check->add_option("--csv", csv, "CSV report path");
  check->add_option("--json", json, "JSON report path");
  check->add_flag("-q,--quiet", quiet, "Only set the exit code");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*list) {
      std::cout << list_catalog();
      return 0;
    }
    if (*run) {
      const SuiteConfig c = load_config(config_path);
      if (print_config) std::cout << serialize_config(c);
      return finish(run_suite(c), csv, json, out_dir, quiet);
    }
    if (*check) {
      // Round-trip through the config text so flags get the same validation.
      chk.seed = seed;
      chk.sphere.radii = {radius};
      chk.sphere.normal = normal;
      chk.criteria = {criterion};
      std::string body = serialize_config(chk);
      if (!center.empty()) body += "sphere.centers = " + center + "\n";
      ParseResult parsed = parse_config(body);
      if (!parsed.ok()) {
        for (const auto& e : parsed.errors) std::cerr << "config error: " << e << "\n";
        return 2;
      }
      return finish(run_suite(*parsed.config), csv, json, ".", quiet);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
