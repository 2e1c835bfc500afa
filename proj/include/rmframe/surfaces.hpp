#pragma once

// Reference surfaces in Euclidean 3-space with closed-form geometry, plus
// analytic curves on them carrying normals and mean curvature. They serve as
// oracles (round sphere, plane) and non-umbilical controls (ellipsoid,
// cylinder). Normals point outward; with S = −dξ a round sphere of radius R
// then has λ = −1/R.

#include <rmframe/catalog.hpp>
#include <rmframe/criteria.hpp>

namespace rmframe {

using J3 = Jet<3>;
using J3Vec = std::vector<J3>;

/// Ellipsoid x²/a² + y²/b² + z²/c² = 1, parameters (θ, φ) with
/// x = (a sinθ cosφ, b sinθ sinφ, c cosθ).
struct Ellipsoid {
  double a = 1.0, b = 1.0, c = 1.5;

  Vec position(double th, double ph) const {
    return Vec(Eigen::Vector3d(a * std::sin(th) * std::cos(ph), b * std::sin(th) * std::sin(ph), c * std::cos(th)));
  }
  Vec normal_at(const Vec& x) const {
    return Vec(Eigen::Vector3d(x(0) / (a * a), x(1) / (b * b), x(2) / (c * c))).normalized();
  }
  /// (θ, φ) of a point on the surface.
  Vec params_of(const Vec& x) const {
    return Vec(Eigen::Vector2d(std::acos(std::clamp(x(2) / c, -1.0, 1.0)), std::atan2(x(1) / b, x(0) / a)));
  }
  /// Closed-form mean curvature for the outward normal,
  /// H = (|x|² − a² − b² − c²) / (2 a²b²c² h³), h² = Σ x_i²/a_i⁴.
  double mean_curvature(const Vec& x) const {
    const double h = std::sqrt(x(0) * x(0) / std::pow(a, 4) + x(1) * x(1) / std::pow(b, 4) + x(2) * x(2) / std::pow(c, 4));
    return (x.squaredNorm() - a * a - b * b - c * c) / (2 * a * a * b * b * c * c * h * h * h);
  }
  /// Closed-form Gaussian curvature 1 / (a²b²c² h⁴).
  double gaussian_curvature(const Vec& x) const {
    const double h2 = x(0) * x(0) / std::pow(a, 4) + x(1) * x(1) / std::pow(b, 4) + x(2) * x(2) / std::pow(c, 4);
    return 1.0 / (a * a * b * b * c * c * h2 * h2);
  }
  /// Principal curvatures (outward convention, both negative), ascending.
  std::pair<double, double> principal_curvatures(const Vec& x) const {
    const double H = mean_curvature(x), K = gaussian_curvature(x);
    const double d = std::sqrt(std::max(0.0, H * H - K));
    return {H - d, H + d};
  }
};

inline HypersurfacePatch ellipsoid_patch(const Ellipsoid& e) {
  HypersurfacePatch P{make_euclidean(3)};
  P.kind = PatchKind::parametric;
  P.params = 2;
  P.position = [e](const Vec& u) { return e.position(u(0), u(1)); };
  P.normal = [e](const Vec& u) { return e.normal_at(e.position(u(0), u(1))); };
  P.lo = Vec(Eigen::Vector2d(0.15, 0.0));
  P.hi = Vec(Eigen::Vector2d(kPi - 0.15, 2 * kPi));
  P.label = "ellipsoid(" + detail::fmt(e.a) + "," + detail::fmt(e.b) + "," + detail::fmt(e.c) + ")";
  return P;
}

/// Shape operator at a surface point from the implicit description
/// F = Σ x_i²/a_i²: ∇_X ξ = (I − ξξᵀ) D²F X / |∇F|. Unlike the (θ, φ)
/// patch this has no pole singularity.
inline ShapeSpectrum ellipsoid_shape(const Ellipsoid& e, const Vec& x) {
  const Vec grad = 2.0 * Vec(Eigen::Vector3d(x(0) / (e.a * e.a), x(1) / (e.b * e.b), x(2) / (e.c * e.c)));
  const Vec xi = grad.normalized();
  const Mat hess = 2.0 * Vec(Eigen::Vector3d(1 / (e.a * e.a), 1 / (e.b * e.b), 1 / (e.c * e.c))).asDiagonal().toDenseMatrix();
  const Mat dxi = (Mat::Identity(3, 3) - xi * xi.transpose()) * hess / grad.norm();
  Eigen::Index imin;
  xi.cwiseAbs().minCoeff(&imin);
  Mat T(3, 2);
  T.col(0) = Eigen::Vector3d(xi(0), xi(1), xi(2)).cross(Eigen::Vector3d::Unit(imin)).normalized();
  T.col(1) = Eigen::Vector3d(xi(0), xi(1), xi(2)).cross(Eigen::Vector3d(T(0, 0), T(1, 0), T(2, 0)));
  const Mat B = -T.transpose() * dxi * T;
  return shape_from_basis(Mat::Identity(3, 3), x, xi, T, B, true);
}

inline HypersurfacePatch round_sphere_patch(double R) { return ellipsoid_patch({R, R, R}); }

namespace detail {

inline J3Vec normalize(J3Vec v) {
  J3 q(0.0);
  for (const auto& c : v) q += c * c;
  const J3 r = 1.0 / sqrt(q);
  for (auto& c : v) c = c * r;
  return v;
}

inline CurvePath finish_surface_curve(std::shared_ptr<CurveSource> src, int n, double density) {
  const MetricChart chart = make_euclidean(3);
  if (!src->periodic || density <= 0.0) return arc_length_reparam(chart, src, n);
  const SphereCurveOptions opt;
  return refine_for_turning(arc_length_reparam_density(chart, src, density, n), opt.max_turn,
                            opt.max_samples_per_length);
}

}  // namespace detail

/// Curve on an ellipsoid from a parameterized generator: pos(σ) returns the
/// surface point as jets. H along the curve comes from ellipsoid_shape.
template <class Pos>
CurvePath ellipsoid_curve(const Ellipsoid& e, Pos pos, double t0, double t1, bool periodic, int n = 512,
                          double density = 500.0) {
  auto src = analytic_source(pos, t0, t1, periodic);
  attach_analytic_normal(*src, [e, pos](const J3& s) {
    const J3Vec x = pos(s);
    return detail::normalize({x[0] / (e.a * e.a), x[1] / (e.b * e.b), x[2] / (e.c * e.c)});
  });
  src->mean_curvature = [e, src_jet = src->jet](double s) { return ellipsoid_shape(e, src_jet(s).x).H; };
  return detail::finish_surface_curve(src, n, density);
}

/// Closed curve x = (a v₁, b v₂, c v₃) for a seeded unit direction curve v on S².
inline CurvePath ellipsoid_random_curve(const Ellipsoid& e, std::uint64_t seed, int order = 3, double density = 500.0) {
  const DirectionCurve d = random_direction_curve(3, seed, order);
  auto vj = d.jet;
  auto pos = [e, vj](const J3& s) {
    const J3Vec v = vj(s);
    return J3Vec{e.a * v[0], e.b * v[1], e.c * v[2]};
  };
  return ellipsoid_curve(e, pos, 0.0, 2 * kPi, true, 256, density);
}

/// Full meridian ellipse through φ = φ0 and φ0 + π (a closed geodesic).
inline CurvePath ellipsoid_meridian(const Ellipsoid& e, double phi0 = 0.0, double density = 500.0) {
  auto pos = [e, phi0](const J3& s) {
    return J3Vec{e.a * std::cos(phi0) * sin(s), e.b * std::sin(phi0) * sin(s), e.c * cos(s)};
  };
  return ellipsoid_curve(e, pos, 0.0, 2 * kPi, true, 256, density);
}

/// Parallel θ = θ0.
inline CurvePath ellipsoid_parallel(const Ellipsoid& e, double theta0, double density = 500.0) {
  auto pos = [e, theta0](const J3& s) {
    return J3Vec{e.a * std::sin(theta0) * cos(s), e.b * std::sin(theta0) * sin(s), J3(e.c * std::cos(theta0))};
  };
  return ellipsoid_curve(e, pos, 0.0, 2 * kPi, true, 256, density);
}

inline CurveFactory ellipsoid_curve_factory(const Ellipsoid& e, int order = 3) {
  return [e, order](std::uint64_t seed) { return ellipsoid_random_curve(e, seed, order); };
}

/// Circle of latitude θ0 on the round sphere of radius R.
inline CurvePath sphere_latitude(double R, double theta0, double density = 500.0) {
  return ellipsoid_parallel({R, R, R}, theta0, density);
}

// ---------------------------------------------------------------------------

/// Cylinder of radius ρ around the z-axis; outward normal (cos φ, sin φ, 0),
/// principal curvatures −1/ρ (around) and 0 (along), H = −1/(2ρ).
/// Helix x = (ρ cos σ, ρ sin σ, ρ σ tan β) climbing at angle β from the
/// horizontal; its geodesic torsion is τ_g = sin β cos β / ρ
/// for the Darboux orientation h = ξ × t.
inline CurvePath cylinder_helix(double rho, double beta, double turns = 1.0, int n = 1024) {
  const double k = std::tan(beta);
  auto pos = [rho, k](const J3& s) { return J3Vec{rho * cos(s), rho * sin(s), rho * k * s}; };
  auto src = analytic_source(pos, 0.0, 2 * kPi * turns, false);
  attach_analytic_normal(*src, [](const J3& s) { return J3Vec{cos(s), sin(s), J3(0.0)}; });
  src->mean_curvature = [rho](double) { return -1.0 / (2 * rho); };
  return arc_length_reparam(make_euclidean(3), src, n);
}

/// Closed planar curve in the plane z = z0 (normal e_z, H = 0): a smooth
/// convex trigonometric loop (convex for wobble < 0.1).
inline CurvePath plane_loop(double z0 = 0.0, double wobble = 0.05, int n = 1024) {
  auto pos = [z0, wobble](const J3& s) {
    const J3 r = 1.0 + wobble * cos(3.0 * s);
    return J3Vec{r * cos(s), r * sin(s), J3(z0)};
  };
  auto src = analytic_source(pos, 0.0, 2 * kPi, true);
  attach_analytic_normal(*src, [](const J3&) { return J3Vec{J3(0.0), J3(0.0), J3(1.0)}; });
  src->mean_curvature = [](double) { return 0.0; };
  return arc_length_reparam(make_euclidean(3), src, n);
}

}  // namespace rmframe
