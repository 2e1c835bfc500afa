#include <rmframe/experiment.hpp>

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace rmframe;

namespace {

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

SuiteConfig parse_ok(const std::string& text) {
  const ParseResult r = parse_config(text);
  EXPECT_TRUE(r.ok()) << (r.errors.empty() ? "" : r.errors.front());
  return r.config.value_or(SuiteConfig{});
}

bool any_contains(const std::vector<std::string>& v, const std::string& needle) {
  return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

int rank(Verdict v) {
  switch (v) {
    case Verdict::consistent: return 0;
    case Verdict::inconclusive: return 1;
    case Verdict::violated: return 2;
    default: return -1;
  }
}

struct EnvGuard {
  explicit EnvGuard(const char* value) {
    if (const char* old = std::getenv("RMFRAME_THREADS")) saved = old;
    if (value)
      setenv("RMFRAME_THREADS", value, 1);
    else
      unsetenv("RMFRAME_THREADS");
  }
  ~EnvGuard() {
    if (saved)
      setenv("RMFRAME_THREADS", saved->c_str(), 1);
    else
      unsetenv("RMFRAME_THREADS");
  }
  std::optional<std::string> saved;
};

int run_cli(const std::string& args) {
  const std::string cmd = std::string(RMFRAME_CLI) + " " + args + " > /dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

const char* kSmall = R"(suite.id = small
seed = 9
metric.name = euclidean
sphere.centers = 0.1,-0.05,0.08
sphere.radii = 0.5
curves.count = 2
criteria = umbilicity, linear_rm
)";

}  // namespace

TEST(Config, MinimalConfigParses) {
  const SuiteConfig c = parse_ok("seed = 1\ncriteria = umbilicity\nsphere.radii = 0.5  # one sphere\n");
  EXPECT_EQ(c.seed, 1u);
  EXPECT_EQ(c.metric.name, "euclidean");
  EXPECT_EQ(c.criteria, std::vector<std::string>{"umbilicity"});
  EXPECT_EQ(c.sphere.radii, std::vector<double>{0.5});
}

TEST(Config, RadiusBeyondBoundNamesTheBound) {
  const ParseResult r = parse_config("seed = 1\nmetric.name = sphere\nsphere.radii = 2.0\ncriteria = umbilicity\n");
  ASSERT_FALSE(r.ok());
  EXPECT_TRUE(any_contains(r.errors, "radius 2 exceeds the radius bound 1.4137166941154069 of metric 'sphere'"))
      << r.errors.front();
}

TEST(Config, ErrorsAreCollectedWithLineNumbers) {
  const ParseResult r = parse_config("metric.name = euclidean\nbogus.key = 3\ncurves.count = zero\nmetric.name = sphere\n");
  ASSERT_FALSE(r.ok());
  EXPECT_TRUE(any_contains(r.errors, "line 2: unknown key 'bogus.key'"));
  EXPECT_TRUE(any_contains(r.errors, "line 3: curves.count"));
  EXPECT_TRUE(any_contains(r.errors, "line 4: duplicate key 'metric.name'"));
  EXPECT_TRUE(any_contains(r.errors, "seed"));
  EXPECT_GE(r.errors.size(), 4u);
}

TEST(Config, SemanticChecks) {
  auto errs = [](const std::string& t) { return parse_config(t).errors; };
  EXPECT_TRUE(any_contains(errs("seed = 1\nsphere.radii = 0.5\ncriteria = linear_rm, linear_rm\n"), "linear_rm"));
  EXPECT_TRUE(any_contains(errs("seed = 1\nsphere.radii = 0.5\ncriteria = nonsense\n"), "nonsense"));
  EXPECT_TRUE(any_contains(errs("seed = 1\nsphere.radii = 0.5\nsphere.normal = timelike\ncriteria = umbilicity\n"),
                           "timelike"));
  EXPECT_TRUE(any_contains(errs("seed = 1\nmetric.dim = 4\nsphere.radii = 0.5\ncriteria = total_torsion\n"),
                           "total_torsion"));
  EXPECT_TRUE(any_contains(errs("seed = 1\nsphere.radii = 0.005\ncriteria = sectional_estimate\n"), "sectional.h"));
  EXPECT_TRUE(any_contains(errs("seed = 1\nsphere.radii = 0.5\nsphere.centers = 0,0\ncriteria = umbilicity\n"),
                           "sphere.centers"));
  EXPECT_THROW(parse_config_or_throw("seed = x\n"), Error);
  EXPECT_THROW(load_config("/nonexistent/suite.conf"), Error);
}

TEST(Config, SerializeRoundTrip) {
  for (const char* f : {"minimal.conf", "euclidean.conf", "sphere_s3.conf", "hyperbolic.conf", "conformal.conf", "semi_e13.conf"}) {
    const SuiteConfig c = load_config(std::string(RMFRAME_CONFIGS) + "/" + f);
    const SuiteConfig back = parse_ok(serialize_config(c));
    EXPECT_EQ(back, c) << f;
    EXPECT_EQ(serialize_config(back), serialize_config(c)) << f;
  }
}

TEST(Suite, EmptyCriteriaGiveHeaderOnlyCsv) {
  const SuiteConfig c = parse_ok("seed = 1\nsphere.radii = 0.5\ncriteria =\n");
  const SuiteReport rep = run_suite(c);
  EXPECT_TRUE(rep.entries.empty());
  EXPECT_EQ(to_csv(rep), std::string(kCsvHeader) + "\n");
}

TEST(Suite, CsvRowsMatchJsonEntries) {
  const SuiteReport rep = run_suite(parse_ok(kSmall));
  const auto rows = lines(to_csv(rep));
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows.front(), kCsvHeader);
  // umbilicity: one row per sphere; linear_rm: three residuals per curve.
  EXPECT_EQ(rows.size(), 1u + 1u + 2u * 3u);
  const auto j = nlohmann::json::parse(to_json(rep));
  std::size_t residuals = 0;
  for (const auto& e : j["entries"]) residuals += e["report"]["residuals"].size();
  EXPECT_EQ(residuals + 1, rows.size());
  EXPECT_EQ(j["entries"].size(), rep.entries.size());
  EXPECT_EQ(j["runtime"]["failed_inputs"], 0);
  EXPECT_EQ(rep.summary, kSummaryConsistent);
  EXPECT_EQ(rep.verdict, Verdict::consistent);
  // Every CSV row carries the suite id, metric and a verdict word.
  for (std::size_t k = 1; k < rows.size(); ++k) {
    EXPECT_EQ(rows[k].rfind("small,euclidean,", 0), 0u) << rows[k];
    EXPECT_NE(rows[k].find(",consistent"), std::string::npos) << rows[k];
  }
}

TEST(Suite, DeterministicAcrossThreadCounts) {
  const SuiteConfig c = parse_ok(kSmall);
  std::string one, three;
  {
    EnvGuard g("1");
    one = to_csv(run_suite(c));
  }
  {
    EnvGuard g("3");
    three = to_csv(run_suite(c));
  }
  EXPECT_EQ(one, three);
  EXPECT_EQ(one, to_csv(run_suite(c)));
}

TEST(Suite, CurveSeedDoesNotMoveSphereSamples) {
  SuiteConfig a = parse_ok(kSmall);
  SuiteConfig b = a;
  b.curves.seed = 1234;
  const SuiteReport ra = run_suite(a), rb = run_suite(b);
  ASSERT_EQ(ra.entries.size(), rb.entries.size());
  for (std::size_t k = 0; k < ra.entries.size(); ++k) {
    const auto& ea = ra.entries[k];
    const auto& eb = rb.entries[k];
    if (ea.criterion == "umbilicity") {
      EXPECT_EQ(ea.report.value("umbilicity_deviation"), eb.report.value("umbilicity_deviation"));
    } else {
      EXPECT_NE(ea.curve_seed, eb.curve_seed);
      EXPECT_NE(ea.report.value("constancy_dev"), eb.report.value("constancy_dev"));
    }
  }
}

TEST(Suite, LooserTolerancesNeverWorsenVerdicts) {
  SuiteConfig c = parse_ok(R"(seed = 3
metric.name = conformal_perturbed
sphere.centers = 0.1,-0.05,0.08
sphere.radii = 0.5
curves.count = 2
criteria = umbilicity, linear_rm, inequality
)");
  const SuiteReport tight = run_suite(c);
  for (double* t : {&c.tolerance.residual, &c.tolerance.violation}) *t *= 10;
  const SuiteReport loose = run_suite(c);
  ASSERT_EQ(tight.entries.size(), loose.entries.size());
  for (std::size_t k = 0; k < tight.entries.size(); ++k)
    EXPECT_LE(rank(loose.entries[k].report.verdict), rank(tight.entries[k].report.verdict)) << tight.entries[k].criterion;
  EXPECT_EQ(tight.summary, kSummaryViolations);
}

TEST(Suite, ThreadVariableIsValidated) {
  {
    EnvGuard g("0");
    EXPECT_THROW(suite_threads(4), Error);
  }
  {
    EnvGuard g("two");
    EXPECT_THROW(suite_threads(4), Error);
  }
  {
    EnvGuard g("8");
    EXPECT_EQ(suite_threads(3), 3);
  }
}

TEST(Suite, SemiMinkowskiSuite) {
  const SuiteReport rep = run_suite(parse_ok(R"(seed = 5
metric.name = semi_euclidean
metric.nu = 1
sphere.centers = 0,0,0
sphere.radii = 0.7
sphere.normal = timelike
curves.count = 1
criteria = umbilicity, semi_linear, semi_inequality
)"));
  EXPECT_EQ(rep.stats.failed_inputs, 0);
  EXPECT_EQ(rep.verdict, Verdict::consistent) << rep.summary;
}

TEST(Cli, ExitCodes) {
  const std::string dir = ::testing::TempDir();
  EXPECT_EQ(run_cli("list-catalog"), 0);
  EXPECT_EQ(run_cli("run " + std::string(RMFRAME_CONFIGS) + "/minimal.conf --out-dir " + dir), 0);
  EXPECT_EQ(run_cli("run /nonexistent.conf"), 2);
  EXPECT_EQ(run_cli("check --metric sphere --radius 2.0 --seed 1 --criterion umbilicity"), 2);
  EXPECT_EQ(run_cli("check --metric conformal_perturbed --radius 0.5 --seed 3 --criterion umbilicity --center 0.1,-0.05,0.08"), 1);
  const std::string csv = dir + "/check.csv";
  EXPECT_EQ(run_cli("check --metric hyperbolic_ball --radius 0.4 --seed 2 --criterion umbilicity --csv " + csv), 0);
  std::ifstream f(csv);
  std::string header;
  std::getline(f, header);
  EXPECT_EQ(header, kCsvHeader);
  EXPECT_EQ(run_cli("no-such-command"), 2);
}
