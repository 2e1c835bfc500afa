#include <rmframe/surfaces.hpp>

#include <gtest/gtest.h>

using namespace rmframe;

namespace {

constexpr double kRho = 0.8, kBeta = 0.6;

const CurvePath& helix() {
  static const CurvePath h = cylinder_helix(kRho, kBeta, 1.0, 2048);
  return h;
}

}  // namespace

TEST(Frenet, CircularHelix) {
  const FrenetData f = frenet_frame(helix());
  const double kappa = std::cos(kBeta) * std::cos(kBeta) / kRho, tau = std::sin(kBeta) * std::cos(kBeta) / kRho;
  for (std::size_t k = 0; k < f.s.size(); k += 97) {
    EXPECT_NEAR(f.kappa[k], kappa, 1e-10);
    EXPECT_NEAR(f.tau[k], tau, 1e-9);
  }
  EXPECT_TRUE(f.all_valid());
  EXPECT_LT(f.residual, 1e-10);
}

TEST(Frenet, StraightLineIsDegenerate) {
  auto pos = [](const Jet<3>& s) { return std::vector<Jet<3>>{s, 2.0 * s, Jet<3>(0.5)}; };
  const CurvePath line = arc_length_reparam(make_euclidean(3), analytic_source(pos, 0.0, 1.0, false), 64);
  EXPECT_THROW(frenet_frame(line), FrenetDegenerateError);
  EXPECT_FALSE(frenet_frame(line, false).all_valid());
}

TEST(Darboux, HelixOnCylinder) {
  const DarbouxData d = darboux_frame(helix());
  const double tg = std::sin(kBeta) * std::cos(kBeta) / kRho;
  const double kn = -std::cos(kBeta) * std::cos(kBeta) / kRho;
  for (std::size_t k = 0; k < d.s.size(); k += 101) {
    EXPECT_NEAR(d.tau_g[k], tg, 1e-9);
    EXPECT_NEAR(std::abs(d.kappa_n[k]), std::abs(kn), 1e-9);
    EXPECT_NEAR(d.kappa_g[k], 0.0, 1e-9);  // helices are cylinder geodesics
  }
  EXPECT_LT(d.orthonormality, 1e-12);
  EXPECT_LT(d.residual, 1e-8);
}

TEST(Darboux, AngleRelationOnEllipsoidCurve) {
  const CurvePath c = ellipsoid_random_curve(Ellipsoid{}, 7);
  const AngleRelation a = frame_angle_relation(c, frenet_frame(c), darboux_frame(c));
  EXPECT_LT(a.max_residual, 1e-5);
}

TEST(RotationMinimizing, HelixFrame) {
  const MovingFrame rm = rm_frame(helix());
  EXPECT_LT(rm.orthonormality_defect, 1e-12);
  EXPECT_LT(rm.rm_residual, 1e-8);
  EXPECT_TRUE(rm.causal_constant);
  const FrenetData f = frenet_frame(helix());
  for (int k = 0; k < rm.count(); k += 131) EXPECT_NEAR(rm.kappa[k].norm(), f.kappa[k], 1e-9);
  // φ′ = τ: the principal normal turns at rate τ relative to the RM frame.
  const auto phi = rm_frenet_angle(helix(), rm, f);
  const double slope = (phi.back() - phi.front()) / helix().length;
  EXPECT_NEAR(slope, f.tau[0], 1e-8);
}

TEST(RotationMinimizing, FrameOnSphereCurveInCurvedChart) {
  GeodesicSphere gs(catalog("sphere"), {Vec::Zero(3)}, 0.6);
  const CurvePath c = geodesic_sphere_curve(gs, random_direction_curve(3, 2));
  const MovingFrame rm = rm_frame(c);
  EXPECT_LT(rm.orthonormality_defect, 1e-10);
  EXPECT_EQ(rm.normal_count(), 2);
  // The residual is measured by 6th-order differences, so on this sharply
  // turning curve it is resolution-limited; it must shrink at that order.
  const double coarse = rm_frame(arc_length_reparam_density(c.chart, c.source, 2000.0, 64)).rm_residual;
  const double fine = rm_frame(arc_length_reparam_density(c.chart, c.source, 4000.0, 64)).rm_residual;
  EXPECT_GT(std::log2(coarse / fine), 5.0) << coarse << " " << fine;
  EXPECT_LT(fine, 2e-5);
}

TEST(ParallelTransport, PreservesInnerProducts) {
  GeodesicSphere gs(catalog("hyperbolic_ball"), {Vec::Zero(3)}, 0.5);
  const CurvePath c = geodesic_sphere_curve(gs, random_direction_curve(3, 4));
  const Vec X0 = Vec(Eigen::Vector3d(0.3, -0.2, 0.5)), Y0 = Vec(Eigen::Vector3d(-0.1, 0.4, 0.2));
  const auto X = parallel_transport(c, X0), Y = parallel_transport(c, Y0);
  const Mat g0 = c.chart.metric(c.samples[0].x);
  const double xx = inner_raw(g0, X0, X0), xy = inner_raw(g0, X0, Y0);
  for (int k = 0; k < c.size(); k += 113) {
    const Mat g = c.chart.metric(c.samples[k].x);
    EXPECT_NEAR(inner_raw(g, X[k], X[k]), xx, 1e-9);
    EXPECT_NEAR(inner_raw(g, X[k], Y[k]), xy, 1e-9);
  }
}

TEST(Angles, UnwrapAndWinding) {
  std::vector<double> raw;
  for (int k = 0; k < 200; ++k) raw.push_back(std::remainder(2 * kPi * 3 * k / 200.0, 2 * kPi));
  const auto th = unwrap_angles(raw);
  for (std::size_t k = 1; k < th.size(); ++k) EXPECT_NEAR(th[k] - th[k - 1], 2 * kPi * 3 / 200.0, 1e-12);
  EXPECT_NEAR(closing_winding(th), 6 * kPi, 1e-9);
}
