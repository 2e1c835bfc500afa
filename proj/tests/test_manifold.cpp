#include <rmframe/catalog.hpp>
#include <rmframe/philox.hpp>

#include <gtest/gtest.h>

using namespace rmframe;

namespace {

Vec v3(double a, double b, double c) { return Vec(Eigen::Vector3d(a, b, c)); }

double plane_curvature(const MetricChart& chart, const Vec& p, const Vec& X, const Vec& Y) {
  return sectional_curvature(chart, {p}, {{p}, X}, {{p}, Y});
}

}  // namespace

TEST(Catalog, SpaceFormSectionalCurvatures) {
  const Vec p = v3(0.1, -0.2, 0.15), X = v3(1, 0.3, 0), Y = v3(0, 1, -0.5);
  for (double r : {1.0, 2.0}) {
    CatalogParams cp;
    cp.r = r;
    EXPECT_NEAR(plane_curvature(catalog("sphere", cp), p, X, Y), 1 / (r * r), 1e-6);
    EXPECT_NEAR(plane_curvature(catalog("hyperbolic_ball", cp), p, X, Y), -1 / (r * r), 1e-6);
  }
  EXPECT_NEAR(plane_curvature(catalog("euclidean"), p, X, Y), 0.0, 1e-14);
  CatalogParams polar;
  polar.coords = "polar";
  const Vec q = v3(1.4, 1.5, 1.7);
  EXPECT_NEAR(plane_curvature(catalog("sphere", polar), q, X, Y), 1.0, 1e-6);
}

TEST(Catalog, PseudoQuadricsHaveConstantCurvature) {
  CatalogParams cp;
  cp.nu = 1;
  const Vec p = v3(0.05, 0.1, -0.08);
  // Nondegenerate planes of each causal type.
  const Vec T = v3(1, 0, 0), S1 = v3(0, 1, 0), S2 = v3(0, 0, 1);
  for (const auto& [name, K] : {std::pair<std::string, double>{"pseudo_sphere", 1.0},
                                std::pair<std::string, double>{"pseudo_hyperbolic", -1.0}}) {
    const MetricChart c = catalog(name, cp);
    EXPECT_EQ(c.index(), 1);
    EXPECT_NEAR(plane_curvature(c, p, T, S1), K, 1e-6) << name;
    EXPECT_NEAR(plane_curvature(c, p, S1, S2), K, 1e-6) << name;
  }
  EXPECT_NEAR(plane_curvature(catalog("semi_euclidean", cp), p, T, S1), 0.0, 1e-14);
}

TEST(Catalog, ConformalWithZeroAmplitudeIsEuclidean) {
  CatalogParams cp;
  cp.amplitude = 0.0;
  const MetricChart c = catalog("conformal_perturbed", cp), e = catalog("euclidean");
  CounterRng rng(3, 0);
  for (int k = 0; k < 10; ++k) {
    const Vec x = v3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    EXPECT_EQ((c.metric(x) - e.metric(x)).norm(), 0.0);
    const Christoffel G = christoffel(c, x);
    for (const auto& m : G.k) EXPECT_EQ(m.norm(), 0.0);
  }
  EXPECT_EQ(*c.constant_curvature, 0.0);
}

TEST(Catalog, ConformalPerturbationHasVaryingCurvature) {
  const MetricChart c = catalog("conformal_perturbed");
  EXPECT_FALSE(c.constant_curvature.has_value());
  const double k1 = plane_curvature(c, v3(0.4, 0.5, 0.6), v3(1, 0, 0), v3(0, 1, 0));
  const double k2 = plane_curvature(c, v3(-0.7, 0.2, 0.9), v3(1, 0, 0), v3(0, 1, 0));
  EXPECT_GT(std::abs(k1 - k2), 1e-2);
}

TEST(Catalog, AnalyticPartialsMatchDifferences) {
  const Vec x = v3(0.2, -0.1, 0.3);
  for (const auto& name : {"sphere", "hyperbolic_ball", "conformal_perturbed", "pseudo_sphere"}) {
    CatalogParams cp;
    if (std::string(name) == "pseudo_sphere") cp.nu = 1;
    const MetricChart c = catalog(name, cp);
    ASSERT_TRUE(c.has_partials());
    const auto dg = c.metric_partials(x);
    for (int k = 0; k < 3; ++k) {
      Vec xp = x, xm = x;
      const double h = 1e-5;
      xp(k) += h;
      xm(k) -= h;
      const Mat fd = (c.metric(xp) - c.metric(xm)) / (2 * h);
      EXPECT_LT((dg[k] - fd).cwiseAbs().maxCoeff(), 1e-8) << name << " k=" << k;
    }
  }
}

TEST(Manifold, ChristoffelSymmetricAndOrthonormalFrame) {
  CatalogParams cp;
  cp.nu = 1;
  const Vec x = v3(0.1, 0.05, -0.1);
  for (const auto& c : {catalog("sphere"), catalog("pseudo_sphere", cp)}) {
    const Christoffel G = christoffel(c, x);
    for (const auto& m : G.k) EXPECT_LT((m - m.transpose()).norm(), 1e-14);
    const Mat E = orthonormal_frame(c, x);
    const Mat gram = E.transpose() * c.metric(x) * E;
    Mat signs = Mat::Identity(3, 3);
    for (int i = 0; i < c.index(); ++i) signs(i, i) = -1;
    EXPECT_LT((gram - signs).norm(), 1e-12);
  }
}

TEST(Manifold, CausalCharacter) {
  CatalogParams cp;
  cp.nu = 1;
  const MetricChart c = catalog("semi_euclidean", cp);
  const Vec o = Vec::Zero(3);
  EXPECT_EQ(causal_character(c, {o}, {{o}, v3(1, 0, 0)}).kind, Causal::timelike);
  EXPECT_EQ(causal_character(c, {o}, {{o}, v3(0, 1, 0)}).kind, Causal::spacelike);
  EXPECT_EQ(causal_character(c, {o}, {{o}, v3(1, 1, 0)}).kind, Causal::lightlike);
}

TEST(Manifold, DomainAndUsageErrors) {
  const MetricChart h = catalog("hyperbolic_ball");
  EXPECT_THROW(h.check_domain(v3(1.0, 0.5, 0.0)), Error);
  EXPECT_THROW(catalog("no_such_metric"), Error);
  CatalogParams bad;
  bad.amplitude = 0.7;
  EXPECT_THROW(catalog("conformal_perturbed", bad), Error);
  const Vec p = v3(0, 0, 0);
  EXPECT_THROW(sectional_curvature(catalog("euclidean"), {p}, {{p}, v3(1, 0, 0)}, {{p}, v3(2, 0, 0)}), Error);
}

TEST(Manifold, MetricDiagnostics) {
  CatalogParams cp;
  cp.nu = 1;
  const auto d = diagnose_metric(catalog("pseudo_sphere", cp), v3(0.1, 0.1, 0.1));
  EXPECT_LT(d.asymmetry, 1e-15);
  EXPECT_EQ(d.negative_eigenvalues, 1);
}

TEST(ListCatalog, RowsBoundsAndOrder) {
  const auto entries = catalog_entries();
  ASSERT_FALSE(entries.empty());
  for (std::size_t i = 1; i < entries.size(); ++i) EXPECT_LT(entries[i - 1].name, entries[i].name);
  bool pseudo = false;
  for (const auto& e : entries) {
    EXPECT_FALSE(e.bound.empty()) << e.name;
    if (e.name == "pseudo_sphere") pseudo = e.params.find("nu") != std::string::npos;
  }
  EXPECT_TRUE(pseudo);
  const std::string text = list_catalog();
  EXPECT_NE(text.find("pseudo_sphere"), std::string::npos);
  EXPECT_NEAR(catalog("sphere").radius_bound, 0.45 * kPi, 1e-15);
}
