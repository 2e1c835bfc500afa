#pragma once

// Configuration-driven experiment suites: a flat key = value config picks a
// metric, geodesic spheres, seeded curves and criteria; run_suite evaluates
// them (optionally in parallel) into an order-deterministic report that
// serializes to CSV and JSON.

#include <rmframe/catalog.hpp>
#include <rmframe/criteria.hpp>
#include <rmframe/philox.hpp>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <thread>

namespace rmframe {

inline const std::vector<std::string>& known_criteria() {
  static const std::vector<std::string> names = {"umbilicity",   "linear_rm",          "inequality", "total_torsion",
                                                 "sphere_ode",   "sectional_estimate", "semi_linear", "semi_inequality"};
  return names;
}

inline bool is_sphere_criterion(const std::string& c) { return c == "umbilicity" || c == "sectional_estimate"; }
inline bool is_semi_criterion(const std::string& c) { return c == "semi_linear" || c == "semi_inequality"; }

struct MetricSpec {
  std::string name = "euclidean";
  int dim = 3;
  double r = 1.0;
  int nu = 0;
  double amplitude = 0.1;
  double frequency = 3.0;
  std::string coords = "stereographic";
  std::optional<double> radius_bound;
  bool operator==(const MetricSpec&) const = default;
};

struct SphereSpec {
  std::vector<std::vector<double>> centers;
  int random_centers = 0;  // extra centers drawn from the chart's sample box
  std::vector<double> radii;
  std::string normal = "spacelike";  // causal character of the radial normal (semi metrics)
  bool operator==(const SphereSpec&) const = default;
};

struct CurveSpec {
  int count = 3;
  int order = 3;
  std::optional<std::uint64_t> seed;  // defaults to the suite seed
  double min_speed = 0.1;
  double samples_per_length = 500.0;
  bool operator==(const CurveSpec&) const = default;
};

struct ToleranceSpec {
  double integrator = 1e-11;
  double residual = 1e-4;
  double violation = 1e-2;
  double total_torsion = 1e-3;
  double sphere_ode = 1e-3;
  double first_integral = 1e-4;
  double sectional = 5e-3;          // estimate vs known constant curvature / spread
  double sectional_tensor = 1e-2;   // estimate vs curvature tensor
  bool operator==(const ToleranceSpec&) const = default;
};

struct OutputSpec {
  std::string csv;
  std::string json;
  std::vector<std::string> formats;
  bool operator==(const OutputSpec&) const = default;
};

struct SuiteConfig {
  std::string suite_id = "suite";
  std::optional<std::uint64_t> seed;
  MetricSpec metric;
  SphereSpec sphere;
  CurveSpec curves;
  std::vector<std::string> criteria;
  ToleranceSpec tolerance;
  int umbilicity_samples = 20;
  double sectional_h = 0.01;
  int sectional_samples = 5;
  double sphere_ode_density = 4000.0;
  OutputSpec output;
  bool operator==(const SuiteConfig&) const = default;

  CatalogParams catalog_params() const {
    CatalogParams p;
    p.dim = metric.dim;
    p.r = metric.r;
    p.nu = metric.nu;
    p.amplitude = metric.amplitude;
    p.frequency = metric.frequency;
    p.coords = metric.coords;
    p.radius_bound = metric.radius_bound;
    return p;
  }
  std::uint64_t curve_seed(int j) const { return curves.seed.value_or(seed.value_or(0)) + static_cast<std::uint64_t>(j); }
};

struct ParseResult {
  std::optional<SuiteConfig> config;
  std::vector<std::string> errors;
  bool ok() const { return config.has_value(); }
};

namespace detail {

inline std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

inline std::optional<double> to_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline std::optional<long long> to_int(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || errno != 0) return std::nullopt;
  return v;
}

inline std::optional<std::uint64_t> to_u64(const std::string& s) {
  if (s.empty() || s[0] == '-' || s[0] == '+') return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || errno != 0) return std::nullopt;
  return v;
}

inline std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

inline std::string join_nums(const std::vector<double>& v) {
  std::vector<std::string> s;
  for (double x : v) s.push_back(num(x));
  return join(s, ", ");
}

/// Setter returns an error message or empty; getter returns nullopt to omit.
struct KeyDef {
  std::string key;
  std::function<std::string(const std::string&, SuiteConfig&)> set;
  std::function<std::optional<std::string>(const SuiteConfig&)> get;
};

template <class T>
KeyDef real_key(const std::string& key, T SuiteConfig::*outer, double T::*field) {
  return {key,
          [=](const std::string& v, SuiteConfig& c) -> std::string {
            auto d = to_double(v);
            if (!d) return "expected a finite number, got '" + v + "'";
            c.*outer.*field = *d;
            return "";
          },
          [=](const SuiteConfig& c) -> std::optional<std::string> { return num(c.*outer.*field); }};
}

template <class T>
KeyDef int_key(const std::string& key, T SuiteConfig::*outer, int T::*field) {
  return {key,
          [=](const std::string& v, SuiteConfig& c) -> std::string {
            auto d = to_int(v);
            if (!d || *d < std::numeric_limits<int>::min() || *d > std::numeric_limits<int>::max())
              return "expected an integer, got '" + v + "'";
            c.*outer.*field = static_cast<int>(*d);
            return "";
          },
          [=](const SuiteConfig& c) -> std::optional<std::string> { return std::to_string(c.*outer.*field); }};
}

template <class T>
KeyDef string_key(const std::string& key, T SuiteConfig::*outer, std::string T::*field) {
  return {key,
          [=](const std::string& v, SuiteConfig& c) -> std::string {
            c.*outer.*field = v;
            return "";
          },
          [=](const SuiteConfig& c) -> std::optional<std::string> {
            const std::string& s = c.*outer.*field;
            if (s.empty()) return std::nullopt;
            return s;
          }};
}

inline KeyDef top_real(const std::string& key, double SuiteConfig::*field) {
  return {key,
          [=](const std::string& v, SuiteConfig& c) -> std::string {
            auto d = to_double(v);
            if (!d) return "expected a finite number, got '" + v + "'";
            c.*field = *d;
            return "";
          },
          [=](const SuiteConfig& c) -> std::optional<std::string> { return num(c.*field); }};
}

inline KeyDef top_int(const std::string& key, int SuiteConfig::*field) {
  return {key,
          [=](const std::string& v, SuiteConfig& c) -> std::string {
            auto d = to_int(v);
            if (!d || *d < std::numeric_limits<int>::min() || *d > std::numeric_limits<int>::max())
              return "expected an integer, got '" + v + "'";
            c.*field = static_cast<int>(*d);
            return "";
          },
          [=](const SuiteConfig& c) -> std::optional<std::string> { return std::to_string(c.*field); }};
}

inline const std::vector<KeyDef>& key_table() {
  static const std::vector<KeyDef> keys = [] {
    std::vector<KeyDef> k;
    k.push_back({"suite.id",
                 [](const std::string& v, SuiteConfig& c) -> std::string {
                   if (v.empty() || v.find_first_of(" \t,\"") != std::string::npos)
                     return "suite id must be a non-empty word without spaces, commas or quotes";
                   c.suite_id = v;
                   return "";
                 },
                 [](const SuiteConfig& c) -> std::optional<std::string> { return c.suite_id; }});
    k.push_back({"seed",
                 [](const std::string& v, SuiteConfig& c) -> std::string {
                   auto s = to_u64(v);
                   if (!s) return "expected an unsigned 64-bit integer, got '" + v + "'";
                   c.seed = *s;
                   return "";
                 },
                 [](const SuiteConfig& c) -> std::optional<std::string> {
                   if (!c.seed) return std::nullopt;
                   return std::to_string(*c.seed);
                 }});
    k.push_back(string_key("metric.name", &SuiteConfig::metric, &MetricSpec::name));
    k.push_back(int_key("metric.dim", &SuiteConfig::metric, &MetricSpec::dim));
    k.push_back(real_key("metric.r", &SuiteConfig::metric, &MetricSpec::r));
    k.push_back(int_key("metric.nu", &SuiteConfig::metric, &MetricSpec::nu));
    k.push_back(real_key("metric.amplitude", &SuiteConfig::metric, &MetricSpec::amplitude));
    k.push_back(real_key("metric.frequency", &SuiteConfig::metric, &MetricSpec::frequency));
    k.push_back(string_key("metric.coords", &SuiteConfig::metric, &MetricSpec::coords));
    k.push_back({"metric.radius_bound",
                 [](const std::string& v, SuiteConfig& c) -> std::string {
                   auto d = to_double(v);
                   if (!d || *d <= 0.0) return "expected a positive number, got '" + v + "'";
                   c.metric.radius_bound = *d;
                   return "";
                 },
                 [](const SuiteConfig& c) -> std::optional<std::string> {
                   if (!c.metric.radius_bound) return std::nullopt;
                   return num(*c.metric.radius_bound);
                 }});
    k.push_back({"sphere.centers",
                 [](const std::string& v, SuiteConfig& c) -> std::string {
                   c.sphere.centers.clear();
                   for (const auto& item : split(v, ';')) {
                     std::vector<double> x;
                     for (const auto& comp : split(item, ',')) {
                       auto d = to_double(comp);
                       if (!d) return "bad center '" + item + "' (expected comma-separated numbers)";
                       x.push_back(*d);
                     }
                     c.sphere.centers.push_back(x);
                   }
                   return "";
                 },
                 [](const SuiteConfig& c) -> std::optional<std::string> {
                   if (c.sphere.centers.empty()) return std::nullopt;
                   std::vector<std::string> items;
                   for (const auto& x : c.sphere.centers) items.push_back(join_nums(x));
                   return join(items, "; ");
                 }});
    k.push_back(int_key("sphere.random_centers", &SuiteConfig::sphere, &SphereSpec::random_centers));
    k.push_back({"sphere.radii",
                 [](const std::string& v, SuiteConfig& c) -> std::string {
                   c.sphere.radii.clear();
                   for (const auto& item : split(v, ',')) {
                     auto d = to_double(item);
                     if (!d) return "bad radius '" + item + "'";
                     c.sphere.radii.push_back(*d);
                   }
                   return "";
                 },
                 [](const SuiteConfig& c) -> std::optional<std::string> {
                   if (c.sphere.radii.empty()) return std::nullopt;
                   return join_nums(c.sphere.radii);
                 }});
    k.push_back(string_key("sphere.normal", &SuiteConfig::sphere, &SphereSpec::normal));
    k.push_back(int_key("curves.count", &SuiteConfig::curves, &CurveSpec::count));
    k.push_back(int_key("curves.order", &SuiteConfig::curves, &CurveSpec::order));
    k.push_back({"curves.seed",
                 [](const std::string& v, SuiteConfig& c) -> std::string {
                   auto s = to_u64(v);
                   if (!s) return "expected an unsigned 64-bit integer, got '" + v + "'";
                   c.curves.seed = *s;
                   return "";
                 },
                 [](const SuiteConfig& c) -> std::optional<std::string> {
                   if (!c.curves.seed) return std::nullopt;
                   return std::to_string(*c.curves.seed);
                 }});
    k.push_back(real_key("curves.min_speed", &SuiteConfig::curves, &CurveSpec::min_speed));
    k.push_back(real_key("curves.samples_per_length", &SuiteConfig::curves, &CurveSpec::samples_per_length));
    k.push_back({"criteria",
                 [](const std::string& v, SuiteConfig& c) -> std::string {
                   c.criteria.clear();
                   if (v.empty()) return "";
                   for (const auto& item : split(v, ',')) c.criteria.push_back(item);
                   return "";
                 },
                 [](const SuiteConfig& c) -> std::optional<std::string> { return join(c.criteria, ", "); }});
    k.push_back(real_key("tolerance.integrator", &SuiteConfig::tolerance, &ToleranceSpec::integrator));
    k.push_back(real_key("tolerance.residual", &SuiteConfig::tolerance, &ToleranceSpec::residual));
    k.push_back(real_key("tolerance.violation", &SuiteConfig::tolerance, &ToleranceSpec::violation));
    k.push_back(real_key("tolerance.total_torsion", &SuiteConfig::tolerance, &ToleranceSpec::total_torsion));
    k.push_back(real_key("tolerance.sphere_ode", &SuiteConfig::tolerance, &ToleranceSpec::sphere_ode));
    k.push_back(real_key("tolerance.first_integral", &SuiteConfig::tolerance, &ToleranceSpec::first_integral));
    k.push_back(real_key("tolerance.sectional", &SuiteConfig::tolerance, &ToleranceSpec::sectional));
    k.push_back(real_key("tolerance.sectional_tensor", &SuiteConfig::tolerance, &ToleranceSpec::sectional_tensor));
    k.push_back(top_int("umbilicity.samples", &SuiteConfig::umbilicity_samples));
    k.push_back(top_real("sectional.h", &SuiteConfig::sectional_h));
    k.push_back(top_int("sectional.samples", &SuiteConfig::sectional_samples));
    k.push_back(top_real("sphere_ode.samples_per_length", &SuiteConfig::sphere_ode_density));
    k.push_back(string_key("output.csv", &SuiteConfig::output, &OutputSpec::csv));
    k.push_back(string_key("output.json", &SuiteConfig::output, &OutputSpec::json));
    k.push_back({"output.formats",
                 [](const std::string& v, SuiteConfig& c) -> std::string {
                   c.output.formats.clear();
                   if (v.empty()) return "";
                   for (const auto& item : split(v, ',')) c.output.formats.push_back(item);
                   return "";
                 },
                 [](const SuiteConfig& c) -> std::optional<std::string> {
                   if (c.output.formats.empty()) return std::nullopt;
                   return join(c.output.formats, ", ");
                 }});
    return k;
  }();
  return keys;
}

/// Checks that need the whole config; appends messages to errors.
inline void validate(const SuiteConfig& c, std::vector<std::string>& errors) {
  auto err = [&](const std::string& m) { errors.push_back(m); };
  if (!c.seed) err("missing required key 'seed' (unseeded runs are not allowed)");
  if (c.curves.count < 1) err("curves.count must be at least 1");
  if (c.curves.order < 1) err("curves.order must be at least 1");
  if (c.curves.min_speed < 0.0) err("curves.min_speed must be non-negative");
  if (c.curves.samples_per_length <= 0.0) err("curves.samples_per_length must be positive");
  if (c.sphere.random_centers < 0) err("sphere.random_centers must be non-negative");
  if (c.umbilicity_samples < 10) err("umbilicity.samples must be at least 10");
  if (c.sectional_samples < 1) err("sectional.samples must be at least 1");
  if (c.sectional_h <= 0.0) err("sectional.h must be positive");
  if (c.sphere_ode_density <= 0.0) err("sphere_ode.samples_per_length must be positive");
  const ToleranceSpec& t = c.tolerance;
  for (auto [name, v] : std::vector<std::pair<std::string, double>>{{"integrator", t.integrator},
                                                                    {"residual", t.residual},
                                                                    {"violation", t.violation},
                                                                    {"total_torsion", t.total_torsion},
                                                                    {"sphere_ode", t.sphere_ode},
                                                                    {"first_integral", t.first_integral},
                                                                    {"sectional", t.sectional},
                                                                    {"sectional_tensor", t.sectional_tensor}})
    if (v <= 0.0) err("tolerance." + name + " must be positive");
  if (c.sphere.normal != "spacelike" && c.sphere.normal != "timelike")
    err("sphere.normal must be 'spacelike' or 'timelike', got '" + c.sphere.normal + "'");
  for (const auto& f : c.output.formats)
    if (f != "csv" && f != "json") err("output.formats: unknown format '" + f + "' (expected csv or json)");

  std::set<std::string> seen;
  for (const auto& name : c.criteria) {
    if (std::find(known_criteria().begin(), known_criteria().end(), name) == known_criteria().end())
      err("criteria: unknown criterion '" + name + "' (known: " + join(known_criteria(), ", ") + ")");
    else if (!seen.insert(name).second)
      err("criteria: '" + name + "' listed twice");
  }

  if (c.sphere.radii.empty()) err("sphere.radii must list at least one radius");
  for (double R : c.sphere.radii)
    if (R <= 0.0) err("sphere.radii: radius " + num(R) + " is not positive");

  std::optional<MetricChart> chart;
  try {
    chart = catalog(c.metric.name, c.catalog_params());
  } catch (const std::exception& e) {
    err(std::string("metric: ") + e.what());
  }
  if (!chart) return;
  const int dim = chart->dim();
  for (double R : c.sphere.radii)
    if (R > chart->radius_bound)
      err("sphere.radii: radius " + num(R) + " exceeds the radius bound " + num(chart->radius_bound) + " of metric '" +
          c.metric.name + "'");
  for (const auto& x : c.sphere.centers) {
    if (static_cast<int>(x.size()) != dim) {
      err("sphere.centers: center has " + std::to_string(x.size()) + " coordinates, metric dimension is " +
          std::to_string(dim));
      continue;
    }
    if (!chart->in_domain(Eigen::Map<const Vec>(x.data(), dim)))
      err("sphere.centers: center (" + join_nums(x) + ") lies outside the chart domain");
  }
  if (c.sphere.normal == "timelike" && chart->riemannian())
    err("sphere.normal = timelike needs a semi-Riemannian metric");
  for (const auto& name : c.criteria) {
    const bool semi = is_semi_criterion(name);
    if (semi && chart->riemannian()) err("criteria: '" + name + "' needs a semi-Riemannian metric (metric.nu > 0)");
    if (semi && (dim != 3 || chart->index() != 1))
      err("criteria: '" + name + "' is implemented for Lorentzian 3-manifolds (dim 3, nu 1)");
    if (!semi && name != "umbilicity" && !chart->riemannian())
      err("criteria: '" + name + "' needs a Riemannian metric; use semi_linear / semi_inequality");
    if ((name == "total_torsion" || name == "sphere_ode") && dim != 3)
      err("criteria: '" + name + "' needs dimension 3");
    if (name == "sectional_estimate")
      for (double R : c.sphere.radii)
        if (c.sectional_h >= R) err("sectional.h must be smaller than every radius (radius " + num(R) + ")");
  }
}

}  // namespace detail

/// Parses and validates; collects every error instead of stopping at the first.
inline ParseResult parse_config(const std::string& text) {
  ParseResult out;
  SuiteConfig c;
  std::map<std::string, int> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (eq == std::string::npos) {
      out.errors.push_back(where + "expected 'key = value'");
      continue;
    }
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    const auto& keys = detail::key_table();
    auto it = std::find_if(keys.begin(), keys.end(), [&](const detail::KeyDef& k) { return k.key == key; });
    if (it == keys.end()) {
      out.errors.push_back(where + "unknown key '" + key + "'");
      continue;
    }
    if (auto [pos, fresh] = seen.emplace(key, lineno); !fresh) {
      out.errors.push_back(where + "duplicate key '" + key + "' (first set on line " + std::to_string(pos->second) + ")");
      continue;
    }
    if (std::string e = it->set(value, c); !e.empty()) out.errors.push_back(where + key + ": " + e);
  }
  detail::validate(c, out.errors);
  if (out.errors.empty()) out.config = c;
  return out;
}

inline SuiteConfig parse_config_or_throw(const std::string& text) {
  ParseResult r = parse_config(text);
  if (!r.ok()) throw Error(ErrorKind::config, detail::join(r.errors, "; "));
  return *r.config;
}

inline SuiteConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::io, "cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config_or_throw(ss.str());
}

/// Canonical text form; parse_config(serialize_config(c)) reproduces c.
inline std::string serialize_config(const SuiteConfig& c) {
  std::string out;
  for (const auto& k : detail::key_table())
    if (auto v = k.get(c)) out += k.key + " = " + *v + "\n";
  return out;
}

// ---------------------------------------------------------------------------

struct SuiteEntry {
  std::string criterion;
  int sphere_index = 0;
  std::vector<double> center;
  double radius = 0.0;
  std::optional<std::uint64_t> curve_seed;
  CriterionReport report;
  std::string error;  // non-empty when the input failed
  bool failed() const { return !error.empty(); }
};

struct RuntimeStats {
  double wall_seconds = 0.0;
  int threads = 1;
  int tasks = 0;
  int curves_built = 0;
  int failed_inputs = 0;
};

struct SuiteReport {
  SuiteConfig config;
  std::string metric_label;
  std::vector<SuiteEntry> entries;
  Verdict verdict = Verdict::consistent;
  std::string summary;
  RuntimeStats stats;
};

inline constexpr const char* kSummaryConsistent = "consistent with constant curvature";
inline constexpr const char* kSummaryViolations = "violations detected";
inline constexpr const char* kSummaryInconclusive = "inconclusive";

/// Worker count: RMFRAME_THREADS if set (integer ≥ 1), else the hardware
/// concurrency, never more than the number of tasks.
inline int suite_threads(int tasks) {
  int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("RMFRAME_THREADS")) {
    auto v = detail::to_int(detail::trim(env));
    if (!v || *v < 1 || *v > 4096)
      throw Error(ErrorKind::config, std::string("RMFRAME_THREADS must be an integer >= 1, got '") + env + "'");
    n = static_cast<int>(*v);
  }
  return std::max(1, std::min(n, tasks));
}

namespace detail {

enum SeedStream : std::uint64_t { kCenterStream = 1, kUmbilicityStream = 2, kSectionalStream = 3 };

/// Sub-seed for a (stream, index) pair, independent of the curve seeds.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return Philox4x64::block({index, stream, 0, 0}, {seed, 0x726d6672616d65ULL})[0];
}

inline CriterionReport umbilicity_criterion(const GeodesicSphere& gs, int eta, const SuiteConfig& c, std::uint64_t seed) {
  const UmbilicityReport u =
      umbilicity_report(geodesic_sphere_patch(gs, eta), c.umbilicity_samples, seed, c.tolerance.residual, c.tolerance.violation);
  CriterionReport r;
  r.criterion = "umbilicity";
  r.add("umbilicity_deviation", u.deviation, c.tolerance.residual, c.tolerance.violation);
  double lam = 0.0;
  for (const auto& s : u.samples) lam += s.mean_lambda();
  r.fitted.emplace_back("mean_lambda", lam / static_cast<double>(u.samples.size()));
  r.fitted.emplace_back("samples", static_cast<double>(u.samples.size()));
  if (!u.all_diagonalizable) r.note("shape operator not diagonalizable at some samples");
  r.finalize();
  return r;
}

inline Vec random_unit(const MetricChart& chart, const Vec& p, CounterRng& rng) {
  const Mat E = orthonormal_frame(chart, p);
  Vec a(chart.dim());
  do {
    for (int k = 0; k < chart.dim(); ++k) a(k) = rng.normal();
  } while (a.norm() < 1e-3);
  return E * a.normalized();
}

inline CriterionReport sectional_criterion(const GeodesicSphere& gs, const SuiteConfig& c, std::uint64_t seed) {
  const MetricChart& chart = gs.chart;
  const Vec& p = gs.center.coords;
  double tensor_mismatch = 0.0, known_mismatch = 0.0, lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
  for (int k = 0; k < c.sectional_samples; ++k) {
    CounterRng rng(seed, static_cast<std::uint64_t>(k));
    const Vec V = random_unit(chart, p, rng);
    const Vec X = random_unit(chart, p, rng);
    const SectionalEstimate e = sectional_estimate_detail(chart, {p}, {{p}, V}, {{p}, X}, gs.radius, c.sectional_h,
                                                          c.tolerance.integrator);
    tensor_mismatch = std::max(tensor_mismatch, std::abs(e.estimate - e.tensor_value));
    if (chart.constant_curvature) known_mismatch = std::max(known_mismatch, std::abs(e.estimate - *chart.constant_curvature));
    lo = std::min(lo, e.estimate);
    hi = std::max(hi, e.estimate);
    sum += e.estimate;
  }
  CriterionReport r;
  r.criterion = "sectional_estimate";
  r.add("tensor_mismatch", tensor_mismatch, c.tolerance.sectional_tensor, c.tolerance.violation);
  if (chart.constant_curvature)
    r.add("space_form_mismatch", known_mismatch, c.tolerance.sectional, c.tolerance.violation);
  else
    r.add("estimate_spread", hi - lo, c.tolerance.sectional, c.tolerance.violation);
  r.fitted.emplace_back("mean_estimate", sum / c.sectional_samples);
  r.fitted.emplace_back("configurations", c.sectional_samples);
  r.finalize();
  return r;
}

/// All curve criteria on one sphere curve, in config order.
inline std::vector<SuiteEntry> curve_criteria(const GeodesicSphere& gs, const SuiteConfig& c, std::uint64_t seed,
                                              const std::vector<std::string>& selected) {
  std::vector<SuiteEntry> out;
  for (const auto& name : selected) {
    SuiteEntry e;
    e.criterion = name;
    e.curve_seed = seed;
    out.push_back(e);
  }
  if (out.empty()) return out;
  auto fail_all = [&](const std::string& what) {
    for (auto& e : out)
      if (!e.failed() && e.report.criterion.empty()) e.error = what;
  };
  const Tolerances tol{c.tolerance.residual, c.tolerance.violation};
  std::optional<CurvePath> built;
  std::vector<double> H;
  try {
    DirectionCurve d;
    const bool semi = !gs.chart.riemannian();
    if (semi)
      d = c.sphere.normal == "timelike" ? random_timelike_direction_curve(seed, c.curves.order)
                                        : random_spacelike_direction_curve(seed, c.curves.order);
    else
      d = random_direction_curve(gs.chart.dim(), seed, c.curves.order, c.curves.min_speed);
    SphereCurveOptions opt;
    opt.samples_per_length = c.curves.samples_per_length;
    opt.node_tol = c.tolerance.integrator;
    built = geodesic_sphere_curve(gs, d, opt);
    H = mean_curvature_along(*built, stride_for(*built));
  } catch (const std::exception& ex) {
    fail_all(std::string("curve construction failed: ") + ex.what());
    return out;
  }
  const CurvePath& path = *built;
  std::optional<MovingFrame> rm;
  for (auto& e : out) {
    try {
      const std::string& name = e.criterion;
      if (name == "linear_rm" || name == "semi_linear") {
        if (!rm) rm = rm_frame(path);
        e.report = linear_rm_report(fit_linear_rm_criterion(path, *rm, H, tol), tol, name);
      } else if (name == "inequality") {
        e.report = check_curvature_inequality(path, H, tol);
      } else if (name == "semi_inequality") {
        e.report = check_semi_inequality(path, H, tol);
      } else if (name == "total_torsion") {
        try {
          e.report = total_torsion_report(path, c.tolerance.total_torsion, tol);
        } catch (const FrenetDegenerateError& fe) {
          CriterionReport r;
          r.criterion = name;
          r.add("total_torsion", std::numeric_limits<double>::quiet_NaN(), c.tolerance.total_torsion, tol);
          r.mark_inapplicable(fe.what());
          r.finalize();
          e.report = r;
        }
      } else if (name == "sphere_ode") {
        double lambda = std::numeric_limits<double>::quiet_NaN();
        for (double h : H)
          if (std::isfinite(h)) {
            lambda = std::abs(h);
            break;
          }
        e.report = check_sphere_ode(path, lambda, c.sphere_ode_density, 1e-3, c.tolerance.sphere_ode,
                                    c.tolerance.first_integral, tol);
      } else {
        throw Error(ErrorKind::usage, "'" + name + "' is not a curve criterion");
      }
      e.report.criterion = name;
    } catch (const std::exception& ex) {
      e.error = ex.what();
    }
  }
  return out;
}

}  // namespace detail

inline SuiteReport run_suite(const SuiteConfig& c) {
  const auto t0 = std::chrono::steady_clock::now();
  {
    std::vector<std::string> errors;
    detail::validate(c, errors);
    if (!errors.empty()) throw Error(ErrorKind::config, detail::join(errors, "; "));
  }
  SuiteReport rep;
  rep.config = c;
  const MetricChart chart = catalog(c.metric.name, c.catalog_params());
  rep.metric_label = chart.label();
  const std::uint64_t seed = *c.seed;
  const int eta = c.sphere.normal == "timelike" ? -1 : 1;

  std::vector<std::vector<double>> centers = c.sphere.centers;
  const int n_random = c.sphere.centers.empty() && c.sphere.random_centers == 0 ? 1 : c.sphere.random_centers;
  for (int k = 0; k < n_random; ++k) {
    CounterRng rng(detail::derive_seed(seed, detail::kCenterStream, k), 0);
    std::vector<double> x(chart.dim());
    for (int i = 0; i < chart.dim(); ++i) x[i] = rng.uniform(chart.sample_lo(i), chart.sample_hi(i));
    centers.push_back(x);
  }

  struct Input {
    int sphere_index;
    std::vector<double> center;
    double radius;
    std::shared_ptr<GeodesicSphere> sphere;
    std::string error;
  };
  std::vector<Input> inputs;
  for (const auto& x : centers)
    for (double R : c.sphere.radii) {
      Input in{static_cast<int>(inputs.size()), x, R, nullptr, ""};
      try {
        in.sphere = std::make_shared<GeodesicSphere>(chart, Point{Eigen::Map<const Vec>(x.data(), chart.dim())}, R);
      } catch (const std::exception& e) {
        in.error = e.what();
      }
      inputs.push_back(std::move(in));
    }

  std::vector<std::string> sphere_crit, curve_crit;
  for (const auto& name : c.criteria) (is_sphere_criterion(name) ? sphere_crit : curve_crit).push_back(name);

  // Result slots, filled by index so assembly order never depends on timing.
  const int ns = static_cast<int>(inputs.size()), nc = c.curves.count;
  std::vector<std::vector<SuiteEntry>> sphere_slots(ns * sphere_crit.size());
  std::vector<std::vector<SuiteEntry>> curve_slots(curve_crit.empty() ? 0 : ns * nc);
  std::vector<std::function<void()>> tasks;
  for (int q = 0; q < ns; ++q) {
    for (std::size_t k = 0; k < sphere_crit.size(); ++k)
      tasks.push_back([&, q, k] {
        SuiteEntry e;
        e.criterion = sphere_crit[k];
        try {
          if (!inputs[q].sphere) throw Error(ErrorKind::config, inputs[q].error);
          if (e.criterion == "umbilicity")
            e.report = detail::umbilicity_criterion(*inputs[q].sphere, eta, c,
                                                    detail::derive_seed(seed, detail::kUmbilicityStream, q));
          else
            e.report = detail::sectional_criterion(*inputs[q].sphere, c, detail::derive_seed(seed, detail::kSectionalStream, q));
        } catch (const std::exception& ex) {
          e.error = ex.what();
        }
        sphere_slots[q * sphere_crit.size() + k] = {e};
      });
    if (!curve_crit.empty())
      for (int j = 0; j < nc; ++j)
        tasks.push_back([&, q, j] {
          if (!inputs[q].sphere) {
            std::vector<SuiteEntry> v;
            for (const auto& name : curve_crit) {
              SuiteEntry e;
              e.criterion = name;
              e.curve_seed = c.curve_seed(j);
              e.error = inputs[q].error;
              v.push_back(e);
            }
            curve_slots[q * nc + j] = v;
            return;
          }
          curve_slots[q * nc + j] = detail::curve_criteria(*inputs[q].sphere, c, c.curve_seed(j), curve_crit);
        });
  }

  const int threads = suite_threads(static_cast<int>(std::max<std::size_t>(1, tasks.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) tasks[i]();
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Rows grouped by criterion (config order), then by sphere, then curve.
  for (const auto& name : c.criteria) {
    for (int q = 0; q < ns; ++q) {
      auto place = [&](SuiteEntry e) {
        e.sphere_index = inputs[q].sphere_index;
        e.center = inputs[q].center;
        e.radius = inputs[q].radius;
        e.report.criterion = name;
        e.report.metric = c.metric.name;
        e.report.sphere_radius = inputs[q].radius;
        e.report.curve_seed = e.curve_seed;
        rep.entries.push_back(std::move(e));
      };
      if (is_sphere_criterion(name)) {
        const auto k = std::find(sphere_crit.begin(), sphere_crit.end(), name) - sphere_crit.begin();
        for (auto& e : sphere_slots[q * sphere_crit.size() + k]) place(e);
      } else {
        const auto k = std::find(curve_crit.begin(), curve_crit.end(), name) - curve_crit.begin();
        for (int j = 0; j < nc; ++j) place(curve_slots[q * nc + j][k]);
      }
    }
  }

  bool any_violation = false, all_consistent = true;
  for (const auto& e : rep.entries) {
    if (e.failed()) {
      ++rep.stats.failed_inputs;
      all_consistent = false;
      continue;
    }
    if (e.report.verdict == Verdict::violated) any_violation = true;
    if (e.report.verdict != Verdict::consistent) all_consistent = false;
  }
  rep.verdict = any_violation ? Verdict::violated : all_consistent ? Verdict::consistent : Verdict::inconclusive;
  rep.summary = any_violation ? kSummaryViolations : all_consistent ? kSummaryConsistent : kSummaryInconclusive;
  rep.stats.threads = threads;
  rep.stats.tasks = static_cast<int>(tasks.size());
  rep.stats.curves_built = curve_crit.empty() ? 0 : ns * nc;
  rep.stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// ---------------------------------------------------------------------------
// Output

inline const char* kCsvHeader = "suite_id,metric,criterion,sphere_radius,curve_seed,residual_name,residual_value,tolerance,verdict";

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

inline std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (unsigned char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (ch < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += static_cast<char>(ch);
        }
    }
  }
  return out + "\"";
}

/// JSON has no NaN/Inf: those become null.
inline std::string json_num(double v) { return std::isfinite(v) ? num(v) : "null"; }

inline void json_report(std::ostream& os, const CriterionReport& r, const std::string& ind) {
  os << "{\n";
  os << ind << "  \"criterion\": " << json_string(r.criterion) << ",\n";
  os << ind << "  \"verdict\": " << json_string(to_string(r.verdict)) << ",\n";
  os << ind << "  \"residuals\": [";
  for (std::size_t i = 0; i < r.residuals.size(); ++i) {
    const Residual& x = r.residuals[i];
    os << (i ? ",\n" : "\n") << ind << "    {\"name\": " << json_string(x.name) << ", \"value\": " << json_num(x.value)
       << ", \"tolerance\": " << json_num(x.tolerance) << ", \"violation\": " << json_num(x.violation)
       << ", \"verdict\": " << json_string(to_string(x.verdict)) << "}";
  }
  os << (r.residuals.empty() ? "],\n" : "\n" + ind + "  ],\n");
  os << ind << "  \"fitted\": {";
  for (std::size_t i = 0; i < r.fitted.size(); ++i)
    os << (i ? ", " : "") << json_string(r.fitted[i].first) << ": " << json_num(r.fitted[i].second);
  os << "},\n";
  os << ind << "  \"parts\": [";
  for (std::size_t i = 0; i < r.parts.size(); ++i) {
    os << (i ? ",\n" : "\n") << ind << "    ";
    json_report(os, r.parts[i], ind + "    ");
  }
  os << (r.parts.empty() ? "],\n" : "\n" + ind + "  ],\n");
  os << ind << "  \"diagnostics\": " << json_string(r.diagnostics) << "\n";
  os << ind << "}";
}

}  // namespace detail

/// One row per residual; a failed input yields a single "error" row.
inline std::string to_csv(const SuiteReport& rep) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  const std::string& id = rep.config.suite_id;
  for (const auto& e : rep.entries) {
    const std::string seed = e.curve_seed ? std::to_string(*e.curve_seed) : "";
    const std::string head = detail::csv_field(id) + ',' + detail::csv_field(rep.config.metric.name) + ',' +
                             detail::csv_field(e.criterion) + ',' + detail::num(e.radius) + ',' + seed + ',';
    if (e.failed()) {
      os << head << "error,nan,nan,error\n";
      continue;
    }
    for (const auto& r : e.report.residuals)
      os << head << detail::csv_field(r.name) << ',' << detail::num(r.value) << ',' << detail::num(r.tolerance) << ','
         << to_string(r.verdict) << '\n';
  }
  return os.str();
}

inline std::string to_json(const SuiteReport& rep) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"suite_id\": " << detail::json_string(rep.config.suite_id) << ",\n";
  os << "  \"config\": " << detail::json_string(serialize_config(rep.config)) << ",\n";
  os << "  \"metric\": " << detail::json_string(rep.config.metric.name) << ",\n";
  os << "  \"metric_label\": " << detail::json_string(rep.metric_label) << ",\n";
  os << "  \"summary\": " << detail::json_string(rep.summary) << ",\n";
  os << "  \"verdict\": " << detail::json_string(to_string(rep.verdict)) << ",\n";
  os << "  \"entries\": [";
  for (std::size_t i = 0; i < rep.entries.size(); ++i) {
    const SuiteEntry& e = rep.entries[i];
    os << (i ? ",\n" : "\n") << "    {\n";
    os << "      \"criterion\": " << detail::json_string(e.criterion) << ",\n";
    os << "      \"sphere_index\": " << e.sphere_index << ",\n";
    os << "      \"center\": [";
    for (std::size_t k = 0; k < e.center.size(); ++k) os << (k ? ", " : "") << detail::json_num(e.center[k]);
    os << "],\n";
    os << "      \"sphere_radius\": " << detail::json_num(e.radius) << ",\n";
    os << "      \"curve_seed\": " << (e.curve_seed ? std::to_string(*e.curve_seed) : "null") << ",\n";
    os << "      \"error\": " << (e.failed() ? detail::json_string(e.error) : "null") << ",\n";
    os << "      \"report\": ";
    if (e.failed())
      os << "null";
    else
      detail::json_report(os, e.report, "      ");
    os << "\n    }";
  }
  os << (rep.entries.empty() ? "],\n" : "\n  ],\n");
  os << "  \"runtime\": {\"wall_seconds\": " << detail::json_num(rep.stats.wall_seconds)
     << ", \"threads\": " << rep.stats.threads << ", \"tasks\": " << rep.stats.tasks
     << ", \"curves_built\": " << rep.stats.curves_built << ", \"failed_inputs\": " << rep.stats.failed_inputs << "}\n";
  os << "}\n";
  return os.str();
}

/// Writes the report in `format` (csv or json) to `path`.
inline void emit_report(const SuiteReport& rep, const std::string& format, const std::string& path) {
  std::string text;
  if (format == "csv")
    text = to_csv(rep);
  else if (format == "json")
    text = to_json(rep);
  else
    throw Error(ErrorKind::usage, "unknown report format '" + format + "' (expected csv or json)");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::io, "cannot write report to '" + path + "'");
  f << text;
  f.flush();
  if (!f) throw Error(ErrorKind::io, "failed writing report to '" + path + "'");
}

/// Writes every configured output: output.csv / output.json paths, plus
/// <suite_id>.<fmt> in `dir` for formats listed without a path.
inline std::vector<std::string> emit_configured(const SuiteReport& rep, const std::string& dir = ".") {
  std::vector<std::string> written;
  const OutputSpec& o = rep.config.output;
  auto want = [&](const std::string& f) {
    return std::find(o.formats.begin(), o.formats.end(), f) != o.formats.end();
  };
  for (const std::string f : {"csv", "json"}) {
    std::string path = f == "csv" ? o.csv : o.json;
    if (path.empty() && want(f)) path = dir + "/" + rep.config.suite_id + "." + f;
    if (path.empty()) continue;
    emit_report(rep, f, path);
    written.push_back(path);
  }
  return written;
}

}  // namespace rmframe
