#pragma once

// Shape operators of hypersurfaces. Geodesic spheres get theirs from Jacobi
// fields along the radial geodesics; other patches differentiate the normal.
//
// Conventions: S(X) = −∇_X ξ, λ_i its eigenvalues, H = η Σλ_i / m with
// η = ⟨ξ,ξ⟩. On geodesic spheres ξ = β_V′(R) points outward, so in Euclidean
// space λ = −1/R.

#include <rmframe/frames.hpp>
#include <rmframe/geodesic.hpp>
#include <rmframe/philox.hpp>

#include <Eigen/Eigenvalues>

namespace rmframe {

struct ShapeSpectrum {
  Point point;
  Vec xi;                      // unit normal at the point
  int eta = 1;                 // ⟨ξ,ξ⟩
  std::vector<double> lambda;  // principal curvatures (real parts), ascending
  double H = 0.0;
  Mat op;                      // S in an orthonormal tangent basis
  Mat basis;                   // that basis, chart components (columns)
  std::vector<int> basis_signs;
  bool diagonalizable = true;  // false: non-real spectrum (semi-Riemannian only)
  double max_imag = 0.0;
  double symmetry_defect = 0.0;  // max |⟨SX,Y⟩ − ⟨X,SY⟩| over basis pairs

  double mean_lambda() const {
    double s = 0.0;
    for (double l : lambda) s += l;
    return s / static_cast<double>(lambda.size());
  }
  /// max_i |λ_i − λ̄| / (1 + |λ̄|); λ̄ = H in the Riemannian case.
  double umbilicity_deviation() const {
    const double mu = mean_lambda();
    double d = 0.0;
    for (double l : lambda) d = std::max(d, std::abs(l - mu));
    return d / (1.0 + std::abs(mu));
  }
};

/// Spectrum from a tangent basis T (columns, chart components) and
/// B_ab = ⟨T_a, S T_b⟩.
inline ShapeSpectrum shape_from_basis(const Mat& g, const Vec& x, const Vec& xi, const Mat& T, const Mat& B,
                                      bool riemannian) {
  const int m = static_cast<int>(T.cols());
  ShapeSpectrum sp;
  sp.point = {x};
  sp.xi = xi;
  sp.eta = inner_raw(g, xi, xi) < 0 ? -1 : 1;
  const Mat G = T.transpose() * g * T;

  // orthonormalize T by sign-aware Gram–Schmidt: E = T C
  Mat C = Mat::Identity(m, m);
  sp.basis_signs.assign(m, 1);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < a; ++b) {
      const double proj = sp.basis_signs[b] * C.col(a).dot(G * C.col(b));
      C.col(a) -= proj * C.col(b);
    }
    const double nn = C.col(a).dot(G * C.col(a));
    if (!(std::abs(nn) > 1e-14 * std::max(1.0, G.cwiseAbs().maxCoeff())))
      throw Error(ErrorKind::numerical, "tangent basis is degenerate (rank-deficient parameterization)");
    sp.basis_signs[a] = nn < 0 ? -1 : 1;
    C.col(a) /= std::sqrt(std::abs(nn));
  }
  sp.basis = T * C;
  // ⟨E_a, S E_b⟩ and the matrix of S: S E_b = Σ_a ε_a⟨E_a, S E_b⟩ E_a
  const Mat Bo = C.transpose() * B * C;
  sp.symmetry_defect = (Bo - Bo.transpose()).cwiseAbs().maxCoeff();
  sp.op = Bo;
  for (int a = 0; a < m; ++a) sp.op.row(a) *= sp.basis_signs[a];

  if (riemannian) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (sp.op + sp.op.transpose()));
    for (int i = 0; i < m; ++i) sp.lambda.push_back(es.eigenvalues()(i));
  } else {
    Eigen::EigenSolver<Mat> es(sp.op);
    for (int i = 0; i < m; ++i) {
      sp.lambda.push_back(es.eigenvalues()(i).real());
      sp.max_imag = std::max(sp.max_imag, std::abs(es.eigenvalues()(i).imag()));
    }
    sp.diagonalizable = sp.max_imag < 1e-8;
    std::sort(sp.lambda.begin(), sp.lambda.end());
  }
  double tr = 0.0;
  for (double l : sp.lambda) tr += l;
  sp.H = sp.eta * tr / m;
  return sp;
}

// ---------------------------------------------------------------------------
// Geodesic spheres

/// Shape spectra of the geodesic spheres G(p, u) at exp_p(uV), u ∈ radii,
/// from Jacobi fields with J(0) = 0, J′(0) running over an orthonormal
/// complement of V: T_a = J_a(u), ⟨T_a, S T_b⟩ = −⟨J_a, J_b′⟩.
inline std::vector<ShapeSpectrum> geodesic_sphere_spectra(const MetricChart& chart, const Vec& p, const Vec& V,
                                                          const std::vector<double>& radii, double tol = 1e-11) {
  const int n = chart.dim();
  detail::check_unit_direction(chart, p, V);
  const Mat E = orthonormal_frame(chart, p);
  const Mat g0 = chart.metric(p);
  Vec eta(n);
  for (int i = 0; i < n; ++i) eta(i) = inner_raw(g0, E.col(i), E.col(i)) < 0 ? -1.0 : 1.0;
  const Vec vf = E.partialPivLu().solve(V);
  std::vector<Vec> W;
  for (const Vec& w : orthonormal_complement(vf, eta)) W.push_back(E * w);
  const auto js = integrate_jacobi(chart, p, V, W, radii, tol);
  std::vector<ShapeSpectrum> out;
  for (const auto& s : js) {
    const int m = n - 1;
    Mat T(n, m), B(m, m);
    for (int a = 0; a < m; ++a) T.col(a) = s.J[a];
    const Mat g = chart.metric(s.x);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) B(a, b) = -inner_raw(g, s.J[a], s.dJ[b]);
    out.push_back(shape_from_basis(g, s.x, s.xi, T, B, chart.riemannian()));
  }
  return out;
}

inline ShapeSpectrum geodesic_sphere_shape(const GeodesicSphere& sphere, const Vec& V, double tol = 1e-11) {
  return geodesic_sphere_spectra(sphere.chart, sphere.center.coords, V, {sphere.radius}, tol).front();
}

/// Parameters → unit direction (frame coordinates) for the unit sphere of
/// T_pM: hyperspherical angles (Riemannian), or (ρ, angles) on the unit
/// pseudo-sphere of a Lorentzian tangent space.
inline Vec direction_from_params(const Vec& u, int dim, int index, int eta) {
  const int m = dim - 1;
  require(u.size() == m, ErrorKind::usage, "wrong number of sphere parameters");
  auto sphere_point = [](const Vec& ang, int k) {  // point of S^{k-1} from k-1 angles
    Vec w(k);
    double prod = 1.0;
    for (int i = 0; i < k - 1; ++i) {
      w(i) = prod * std::cos(ang(i));
      prod *= std::sin(ang(i));
    }
    w(k - 1) = prod;
    return w;
  };
  if (index == 0) return sphere_point(u, dim);
  require(index == 1, ErrorKind::usage, "sphere parameterization is implemented for index 0 or 1");
  const double rho = u(0);
  Vec omega = m == 1 ? Vec::Ones(1) : sphere_point(u.tail(m - 1), m);
  Vec v(dim);
  if (eta < 0) {
    v(0) = std::cosh(rho);
    v.tail(m) = std::sinh(rho) * omega;
  } else {
    v(0) = std::sinh(rho);
    v.tail(m) = std::cosh(rho) * omega;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Patches

enum class PatchKind { geodesic_sphere, level_set, parametric };

inline const char* to_string(PatchKind k) {
  switch (k) {
    case PatchKind::geodesic_sphere: return "geodesic_sphere";
    case PatchKind::level_set: return "level_set";
    case PatchKind::parametric: return "parametric";
  }
  return "?";
}

struct HypersurfacePatch {
  explicit HypersurfacePatch(MetricChart c) : chart(std::move(c)) {}

  MetricChart chart;
  PatchKind kind = PatchKind::parametric;
  int params = 0;                                   // m
  std::function<Vec(const Vec&)> position;          // parameters → coordinates
  std::function<Vec(const Vec&)> normal;            // parameters → unit ξ
  std::function<Mat(const Vec&)> position_jacobian; // optional, dim × m
  std::function<Mat(const Vec&)> normal_jacobian;   // optional, dim × m
  Vec lo, hi;                                       // sampling box in parameter space
  std::shared_ptr<const GeodesicSphere> sphere;     // geodesic_sphere kind
  std::function<Vec(const Vec&)> direction;         // geodesic_sphere: parameters → V (chart components)
  std::string label;
};

namespace detail {

inline Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& u) {
  const Vec f0 = f(u);
  Mat J(f0.size(), u.size());
  for (Eigen::Index a = 0; a < u.size(); ++a) {
    const double h = fd_step(u(a));
    Vec up = u, um = u;
    up(a) += h;
    um(a) -= h;
    J.col(a) = (f(up) - f(um)) / (2 * h);
  }
  return J;
}

}  // namespace detail

/// Geodesic sphere G(p, R) as a patch over direction parameters.
inline HypersurfacePatch geodesic_sphere_patch(const GeodesicSphere& sphere, int eta = 1) {
  HypersurfacePatch P{sphere.chart};
  P.kind = PatchKind::geodesic_sphere;
  const int n = sphere.chart.dim();
  const int nu = sphere.chart.index();
  P.params = n - 1;
  auto sp = std::make_shared<const GeodesicSphere>(sphere);
  P.sphere = sp;
  const Mat E = orthonormal_frame(sphere.chart, sphere.center.coords);
  P.direction = [E, n, nu, eta](const Vec& u) -> Vec { return E * direction_from_params(u, n, nu, eta); };
  auto dir = P.direction;
  P.position = [sp, dir](const Vec& u) {
    return exp_map(sp->chart, sp->center, {sp->center, dir(u)}, sp->radius).coords;
  };
  P.normal = [sp, dir](const Vec& u) { return radial_normal(*sp, {sp->center, dir(u)}).v; };
  P.lo = Vec::Zero(n - 1);
  P.hi = Vec::Zero(n - 1);
  if (nu == 0) {
    for (int i = 0; i < n - 2; ++i) {
      P.lo(i) = 0.1;
      P.hi(i) = kPi - 0.1;
    }
    P.hi(n - 2) = 2 * kPi;
  } else {
    P.lo(0) = -1.0;
    P.hi(0) = 1.0;
    for (int i = 1; i < n - 1; ++i) {
      P.lo(i) = i + 1 < n - 1 ? 0.1 : 0.0;
      P.hi(i) = i + 1 < n - 1 ? kPi - 0.1 : 2 * kPi;
    }
  }
  P.label = "geodesic_sphere(" + sphere.chart.label() + ")";
  return P;
}

/// S at a parameter point. Geodesic spheres use Jacobi fields along the
/// generating radial geodesic; other kinds differentiate ξ (analytically when
/// normal_jacobian is supplied, else by central differences).
inline ShapeSpectrum shape_operator(const HypersurfacePatch& P, const Vec& u) {
  require(u.size() == P.params, ErrorKind::usage, "parameter point has the wrong dimension");
  if (P.kind == PatchKind::geodesic_sphere && P.sphere) return geodesic_sphere_shape(*P.sphere, P.direction(u));
  const MetricChart& chart = P.chart;
  const Vec x = P.position(u);
  chart.check_domain(x);
  const Vec xi = P.normal(u);
  const Mat T = P.position_jacobian ? P.position_jacobian(u) : detail::fd_jacobian(P.position, u);
  const Mat dXi = P.normal_jacobian ? P.normal_jacobian(u) : detail::fd_jacobian(P.normal, u);
  Eigen::JacobiSVD<Mat> svd(T);
  const Vec sv = svd.singularValues();
  if (!(sv(sv.size() - 1) > 1e-10 * std::max(1.0, sv(0))))
    throw Error(ErrorKind::numerical, "patch parameterization is rank-deficient at this point");
  const Mat g = chart.metric(x);
  const Christoffel G = christoffel(chart, x);
  const int m = P.params;
  for (int a = 0; a < m; ++a)
    if (std::abs(inner_raw(g, xi, T.col(a))) > 1e-6 * std::max(1.0, std::sqrt(std::abs(inner_raw(g, T.col(a), T.col(a))))))
      throw Error(ErrorKind::usage, "patch normal is not orthogonal to the parameterization");
  require(std::abs(std::abs(inner_raw(g, xi, xi)) - 1.0) < 1e-6, ErrorKind::usage, "patch normal is not unit");
  Mat B(m, m);
  for (int b = 0; b < m; ++b) {
    const Vec cov = dXi.col(b) + G.contract(T.col(b), xi);  // ∇_{T_b} ξ
    for (int a = 0; a < m; ++a) B(a, b) = -inner_raw(g, T.col(a), cov);
  }
  return shape_from_basis(g, x, xi, T, B, chart.riemannian());
}

// ---------------------------------------------------------------------------

struct UmbilicityReport {
  std::vector<Vec> parameters;
  std::vector<ShapeSpectrum> samples;
  double deviation = 0.0;  // max over samples of max_i |λ_i − λ̄|/(1 + |λ̄|)
  double tolerance = 1e-4;
  bool all_diagonalizable = true;
  Verdict verdict = Verdict::consistent;
};

/// Shape spectra at sample_count parameter points drawn from the patch box
/// with the counter-based generator (seed, stream 0).
inline UmbilicityReport umbilicity_report(const HypersurfacePatch& P, int sample_count, std::uint64_t seed,
                                          double tolerance = 1e-4, double violation = 1e-2) {
  require(sample_count >= 10, ErrorKind::usage, "umbilicity_report needs at least 10 samples");
  require(P.lo.size() == P.params && P.hi.size() == P.params, ErrorKind::usage, "patch has no sampling box");
  CounterRng rng(seed, 0);
  UmbilicityReport r;
  r.tolerance = tolerance;
  for (int k = 0; k < sample_count; ++k) {
    Vec u(P.params);
    for (int a = 0; a < P.params; ++a) u(a) = rng.uniform(P.lo(a), P.hi(a));
    ShapeSpectrum sp = shape_operator(P, u);
    r.deviation = std::max(r.deviation, sp.umbilicity_deviation());
    r.all_diagonalizable = r.all_diagonalizable && sp.diagonalizable;
    r.parameters.push_back(u);
    r.samples.push_back(std::move(sp));
  }
  r.verdict = r.all_diagonalizable ? judge(r.deviation, tolerance, violation) : Verdict::violated;
  return r;
}

// ---------------------------------------------------------------------------
// Radial umbilicity factor and the curvature estimate built on it

struct RadialFactor {
  double u = 0.0;
  double lambda = 0.0;     // −⟨∇_X ξ, X⟩/⟨X,X⟩
  double deviation = 0.0;  // umbilicity deviation of G(p,u) at exp_p(uV)
  Vec x, xi, X;            // point, normal and the transported tangent X = J(u)
};

namespace detail {

inline std::vector<RadialFactor> radial_factors(const MetricChart& chart, const Vec& p, const Vec& V,
                                                const std::vector<double>& radii, const Vec* X0, double tol,
                                                double umbilic_limit) {
  const int n = chart.dim();
  detail::check_unit_direction(chart, p, V);
  const Mat E = orthonormal_frame(chart, p);
  const Mat g0 = chart.metric(p);
  Vec eta(n);
  for (int i = 0; i < n; ++i) eta(i) = inner_raw(g0, E.col(i), E.col(i)) < 0 ? -1.0 : 1.0;
  const Vec vf = E.partialPivLu().solve(V);
  std::vector<Vec> W;
  for (const Vec& w : orthonormal_complement(vf, eta)) W.push_back(E * w);
  const int m = n - 1;
  Vec X;
  if (X0) {
    const double vv = inner_raw(g0, V, V);
    X = *X0 - (inner_raw(g0, *X0, V) / vv) * V;
    const double xx = inner_raw(g0, X, X);
    if (!(std::abs(xx) > kPlaneTol * std::max(1.0, X0->squaredNorm())))
      throw Error(ErrorKind::plane_degenerate, "tangent X is (nearly) parallel to V or lightlike");
    X /= std::sqrt(std::abs(xx));
  } else {
    X = W.front();
  }
  W.push_back(X);
  const auto js = integrate_jacobi(chart, p, V, W, radii, tol);
  std::vector<RadialFactor> out;
  for (const auto& s : js) {
    const Mat g = chart.metric(s.x);
    Mat T(n, m), B(m, m);
    for (int a = 0; a < m; ++a) T.col(a) = s.J[a];
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) B(a, b) = -inner_raw(g, s.J[a], s.dJ[b]);
    const ShapeSpectrum sp = shape_from_basis(g, s.x, s.xi, T, B, chart.riemannian());
    RadialFactor f;
    f.u = s.u;
    f.x = s.x;
    f.xi = s.xi;
    f.X = s.J[m];
    f.lambda = -inner_raw(g, s.dJ[m], s.J[m]) / inner_raw(g, s.J[m], s.J[m]);
    f.deviation = sp.diagonalizable ? sp.umbilicity_deviation() : std::numeric_limits<double>::infinity();
    if (f.deviation > umbilic_limit)
      throw Error(ErrorKind::inapplicable, "geodesic sphere of radius " + std::to_string(s.u) +
                                               " is not umbilical (deviation " + std::to_string(f.deviation) +
                                               "); the radial factor is undefined");
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace detail

/// λ(u) with ∇_X ξ = −λX at exp_p(uV), X the Jacobi transport of a unit
/// tangent orthogonal to V. Throws `inapplicable` when a sphere is not
/// umbilical within 0.05.
inline std::vector<RadialFactor> radial_umbilicity_factor(const MetricChart& chart, const Point& p,
                                                          const Tangent& V, const std::vector<double>& radii,
                                                          double tol = 1e-11) {
  check_same_base(p, V);
  return detail::radial_factors(chart, p.coords, V.v, radii, nullptr, tol, 0.05);
}

struct SectionalEstimate {
  double estimate = 0.0;
  double lambda_minus = 0.0, lambda_center = 0.0, lambda_plus = 0.0;
  double max_deviation = 0.0;  // umbilicity deviation over the three spheres
  Vec q, X, xi;                // estimation point and plane span{X, ξ}
  double tensor_value = 0.0;   // sectional curvature of that plane from the curvature tensor
};

/// K̂ = [λ(R+h) − λ(R−h)]/(2h) − λ(R−h)λ(R+h). This is the central-difference
/// form of ∂λ/∂u − λ² with the square taken as the product of the outer
/// samples, which cancels the Riccati-equation truncation error of the flat
/// part exactly (λ = −1/u gives K̂ = 0 for every h).
inline SectionalEstimate sectional_estimate_detail(const MetricChart& chart, const Point& p, const Tangent& V,
                                                   const Tangent& X, double R, double h, double tol = 1e-12) {
  check_same_base(p, V);
  check_same_base(p, X);
  require(h > 0.0 && h < R, ErrorKind::usage, "need 0 < h < R");
  const auto f = detail::radial_factors(chart, p.coords, V.v, {R - h, R, R + h}, &X.v, tol, 0.05);
  SectionalEstimate e;
  e.lambda_minus = f[0].lambda;
  e.lambda_center = f[1].lambda;
  e.lambda_plus = f[2].lambda;
  e.max_deviation = std::max({f[0].deviation, f[1].deviation, f[2].deviation});
  e.estimate = (e.lambda_plus - e.lambda_minus) / (2 * h) - e.lambda_minus * e.lambda_plus;
  e.q = f[1].x;
  e.X = f[1].X;
  e.xi = f[1].xi;
  e.tensor_value = sectional_curvature(chart, {e.q}, {{e.q}, e.X}, {{e.q}, e.xi});
  return e;
}

inline double sectional_estimate_from_spheres(const MetricChart& chart, const Point& p, const Tangent& V,
                                              const Tangent& X, double R, double h) {
  return sectional_estimate_detail(chart, p, V, X, R, h).estimate;
}

// ---------------------------------------------------------------------------

/// Sphere curve whose source also reports H of G(p,R) at each parameter
/// value (one Jacobi solve per evaluation). Sampled at least
/// opt.samples_per_length, finer where the frame turns faster than
/// opt.max_turn per sample.
inline CurvePath geodesic_sphere_curve(const GeodesicSphere& sphere, const DirectionCurve& dir,
                                       const SphereCurveOptions& opt = {}, SphereCurveInfo* info = nullptr) {
  CurvePath path = refine_for_turning(sphere_curve(sphere, dir, opt, info), opt.max_turn, opt.max_samples_per_length);
  auto src = std::make_shared<CurveSource>(*path.source);
  auto sp = std::make_shared<const GeodesicSphere>(sphere);
  auto direction = src->direction;
  src->mean_curvature = [sp, direction](double sigma) { return geodesic_sphere_shape(*sp, direction(sigma)).H; };
  path.source = src;
  return path;
}

/// H at every `stride`-th sample (NaN elsewhere), from the source.
inline std::vector<double> mean_curvature_along(const CurvePath& path, int stride = 1) {
  require(path.source && path.source->mean_curvature, ErrorKind::usage, "curve carries no mean-curvature field");
  require(stride >= 1, ErrorKind::usage, "stride must be positive");
  std::vector<double> H(path.samples.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t k = 0; k < H.size(); k += static_cast<std::size_t>(stride))
    H[k] = path.source->mean_curvature(path.samples[k].param);
  return H;
}

/// Stride that keeps about `target` evaluations along a path.
inline int stride_for(const CurvePath& path, int target = 200) {
  return std::max(1, path.size() / std::max(1, target));
}

}  // namespace rmframe
