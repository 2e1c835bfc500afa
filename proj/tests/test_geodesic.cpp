#include <rmframe/catalog.hpp>
#include <rmframe/geodesic.hpp>

#include <gtest/gtest.h>

using namespace rmframe;

namespace {

Vec v3(double a, double b, double c) { return Vec(Eigen::Vector3d(a, b, c)); }

Vec unit_at(const MetricChart& c, const Vec& p, const Vec& a) { return orthonormal_frame(c, p) * a.normalized(); }

}  // namespace

TEST(Geodesic, EuclideanLinesAreStraight) {
  const MetricChart e = catalog("euclidean");
  const Vec p = v3(0.1, 0.2, 0.3), V = v3(0.6, 0, 0.8);
  EXPECT_LT((exp_map(e, {p}, {{p}, V}, 1.7).coords - (p + 1.7 * V)).norm(), 1e-12);
}

TEST(Geodesic, ExpMapRealizesDistance) {
  for (const auto& name : {"sphere", "hyperbolic_ball"}) {
    const MetricChart c = catalog(name);
    CounterRng rng(5, 0);
    for (int k = 0; k < 5; ++k) {
      const Vec p = v3(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3));
      const Vec V = unit_at(c, p, v3(rng.normal(), rng.normal(), rng.normal()));
      const double u = rng.uniform(0.1, 1.0);
      const Point q = exp_map(c, {p}, {{p}, V}, u, 1e-12);
      EXPECT_NEAR(c.distance(p, q.coords), u, 1e-9) << name;
    }
  }
}

TEST(Geodesic, EnergyIsConserved) {
  const MetricChart c = catalog("conformal_perturbed");
  const Vec p = v3(0.3, -0.4, 0.2);
  const Vec V = unit_at(c, p, v3(1, 2, -1));
  const CurvePath g = integrate_geodesic(c, {p}, {{p}, V}, 1.5, 1e-10);
  EXPECT_LT(energy_drift(g), 1e-9);
}

TEST(Geodesic, PseudoSphereClosedFormMatchesIntegration) {
  CatalogParams cp;
  cp.nu = 1;
  const MetricChart c = catalog("pseudo_sphere", cp);
  const Embedding& emb = *c.embedding;
  const Vec y = v3(0.05, -0.1, 0.08);
  const Mat E = orthonormal_frame(c, y);  // timelike column first
  ASSERT_LT(inner_raw(c.metric(y), E.col(0), E.col(0)), 0.0);
  for (const auto& [V, causal] :
       {std::pair<Vec, Causal>{std::cosh(0.5) * E.col(0) + std::sinh(0.5) * E.col(1), Causal::timelike},
        std::pair<Vec, Causal>{std::cosh(0.5) * E.col(2) + std::sinh(0.5) * E.col(0), Causal::spacelike}}) {
    ASSERT_EQ(causal_character(c, {y}, {{y}, V}).kind, causal);
    for (double u : {0.2, 0.5}) {
      const Point q = exp_map(c, {y}, {{y}, V}, u, 1e-12);
      const Vec cf = pseudosphere_geodesic_closed_form(emb.point(y), emb.jacobian(y) * V, u, 1.0, causal, emb.ambient_signs);
      EXPECT_LT((emb.point(q.coords) - cf).norm(), 1e-8);
    }
  }
}

TEST(Geodesic, ClosedFormRejectsBadInput) {
  const Vec signs = v3(-1, 1, 1);
  EXPECT_THROW(pseudosphere_geodesic_closed_form(v3(0, 2, 0), v3(1, 0, 0), 0.1, 1.0, Causal::timelike, signs), Error);
  EXPECT_THROW(pseudosphere_geodesic_closed_form(v3(0, 1, 0), v3(1, 0, 1), 0.1, 1.0, Causal::lightlike, signs), Error);
}

TEST(Geodesic, JacobiFieldsInTheUnitSphere) {
  // In S³(1), |J(u)| = sin u for J(0) = 0, |J′(0)| = 1 normal to β′.
  const MetricChart c = catalog("sphere");
  const Vec p = v3(0.1, 0, -0.1);
  const Mat E = orthonormal_frame(c, p);
  const auto js = integrate_jacobi(c, p, E.col(0), {E.col(1)}, {0.4, 1.0});
  for (const auto& s : js) {
    const double n = std::sqrt(inner_raw(c.metric(s.x), s.J[0], s.J[0]));
    EXPECT_NEAR(n, std::sin(s.u), 1e-9);
  }
}

TEST(GeodesicSphere, RadiusBoundIsEnforced) {
  const MetricChart c = catalog("sphere");
  EXPECT_THROW(GeodesicSphere(c, {Vec::Zero(3)}, 1.5), Error);
  EXPECT_NO_THROW(GeodesicSphere(c, {Vec::Zero(3)}, 1.4));
  CatalogParams cp;
  cp.radius_bound = 2.0;
  EXPECT_NO_THROW(GeodesicSphere(catalog("sphere", cp), {Vec::Zero(3)}, 1.5));
}

TEST(DirectionCurves, SeededAndUnit) {
  const DirectionCurve a = random_direction_curve(3, 11), b = random_direction_curve(3, 11), c = random_direction_curve(3, 12);
  for (double s : {0.0, 1.0, 4.0}) {
    EXPECT_EQ(a.v(s), b.v(s));
    EXPECT_NEAR(a.v(s).norm(), 1.0, 1e-14);
  }
  EXPECT_GT((a.v(1.0) - c.v(1.0)).norm(), 1e-6);
  const DirectionCurve slow = random_direction_curve(3, 11, 2, 0.3);
  EXPECT_GT(detail::min_direction_speed(slow), 0.3);
  const DirectionCurve t = random_timelike_direction_curve(4);
  const Vec v = t.v(0.7);
  EXPECT_NEAR(-v(0) * v(0) + v(1) * v(1) + v(2) * v(2), -1.0, 1e-12);
}

TEST(SphereCurve, LiesOnTheGeodesicSphere) {
  const MetricChart c = catalog("hyperbolic_ball");
  const Vec p = v3(0.1, -0.05, 0.08);
  GeodesicSphere gs(c, {p}, 0.5);
  SphereCurveInfo info;
  const CurvePath path = sphere_curve(gs, random_direction_curve(3, 3), {}, &info);
  EXPECT_TRUE(path.closed);
  EXPECT_LT(info.tail_ratio, 1e-10);
  for (int k = 0; k < path.size(); k += 37) EXPECT_NEAR(c.distance(p, path.samples[k].x), 0.5, 1e-9);
  // Unit speed and radial normal orthogonal to the tangent.
  for (int k = 0; k < path.size(); k += 53) {
    const Mat g = c.metric(path.samples[k].x);
    const Vec& t = path.samples[k].t;
    EXPECT_NEAR(inner_raw(g, t, t), 1.0, 1e-9);
    EXPECT_NEAR(inner_raw(g, t, radial_normal(path, k).v), 0.0, 1e-9);
  }
}
