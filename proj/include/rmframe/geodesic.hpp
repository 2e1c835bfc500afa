#pragma once

// Geodesics, the exponential map, Jacobi fields along radial geodesics, and
// curves on geodesic spheres.

#include <rmframe/curve.hpp>
#include <rmframe/ode.hpp>
#include <rmframe/philox.hpp>
#include <rmframe/spectral.hpp>

#include <map>

namespace rmframe {

namespace detail {

inline Vec nan_vec(Eigen::Index n) { return Vec::Constant(n, std::numeric_limits<double>::quiet_NaN()); }

/// y = (x, v); y' = (v, −Γ(v,v)). Leaving the chart yields NaN so the
/// adaptive integrator backs off and eventually reports an underflow.
inline OdeRhs geodesic_rhs(const MetricChart& chart) {
  const int n = chart.dim();
  return [&chart, n](double, const Vec& y) -> Vec {
    const Vec x = y.head(n);
    if (!chart.in_domain(x)) return nan_vec(2 * n);
    const Vec v = y.tail(n);
    Vec f(2 * n);
    f.head(n) = v;
    f.tail(n) = -christoffel(chart, x).contract(v, v);
    return f;
  };
}

/// (∂_u Γ)(a, b) by a central difference of Γ along u.
inline Vec christoffel_derivative(const MetricChart& chart, const Vec& x, const Vec& u, const Vec& a,
                                  const Vec& b) {
  const double un = u.norm();
  if (un == 0.0) return Vec::Zero(x.size());
  const double h = fd_step(x.cwiseAbs().maxCoeff()) / un;
  const Vec xp = x + h * u, xm = x - h * u;
  return (christoffel(chart, xp).contract(a, b) - christoffel(chart, xm).contract(a, b)) / (2.0 * h);
}

inline void check_unit_direction(const MetricChart& chart, const Vec& x, const Vec& V) {
  const double vv = inner_raw(chart.metric(x), V, V);
  const CausalClass c = classify(vv, V.squaredNorm());
  if (c.kind == Causal::lightlike) throw Error(ErrorKind::causal, "lightlike initial direction");
  if (std::abs(std::abs(vv) - 1.0) > 1e-9)
    throw Error(ErrorKind::usage, "initial direction is not unit (|<V,V>| = " + std::to_string(std::abs(vv)) + ")");
}

}  // namespace detail

/// Source backed by an adaptive geodesic solution; jets at arbitrary σ are
/// obtained by one Dormand–Prince step from the nearest accepted point.
inline std::shared_ptr<CurveSource> geodesic_source(const MetricChart& chart, OdeSolution sol) {
  const int n = chart.dim();
  auto shared = std::make_shared<OdeSolution>(std::move(sol));
  auto src = std::make_shared<CurveSource>();
  src->t0 = shared->t.front();
  src->t1 = shared->t.back();
  src->jet = [chart, shared, n](double s) {
    const auto& T = shared->t;
    auto it = std::upper_bound(T.begin(), T.end(), s);
    std::size_t i = it == T.begin() ? 0 : static_cast<std::size_t>(std::distance(T.begin(), it) - 1);
    i = std::min(i, T.size() - 1);
    Vec y = shared->y[i];
    const double h = s - T[i];
    if (h != 0.0) {
      Vec k7;
      y = detail::DormandPrince::step(detail::geodesic_rhs(chart), T[i], shared->y[i], shared->f[i], h, k7,
                                      nullptr);
    }
    CurveJet cj;
    cj.x = y.head(n);
    cj.d1 = y.tail(n);
    const Christoffel G = christoffel(chart, cj.x);
    cj.d2 = -G.contract(cj.d1, cj.d1);
    cj.d3 = -detail::christoffel_derivative(chart, cj.x, cj.d1, cj.d1, cj.d1) - 2.0 * G.contract(cj.d2, cj.d1);
    return cj;
  };
  return src;
}

/// Solves x″ + Γ(x′,x′) = 0 from (p, V) for arc length L; samples are the
/// accepted integrator steps.
inline CurvePath integrate_geodesic(const MetricChart& chart, const Point& p, const Tangent& V, double L,
                                    double tol = 1e-9) {
  chart.check_domain(p.coords);
  check_same_base(p, V);
  require(L > 0.0, ErrorKind::usage, "geodesic length must be positive");
  detail::check_unit_direction(chart, p.coords, V.v);
  const int n = chart.dim();
  Vec y0(2 * n);
  y0 << p.coords, V.v;
  OdeOptions opt;
  opt.atol = opt.rtol = tol;
  OdeSolution sol = integrate_adaptive(detail::geodesic_rhs(chart), 0.0, y0, L, opt);

  auto src = geodesic_source(chart, sol);
  CurvePath path(chart, src);
  path.length = L;
  path.param_per_length = 1.0;
  for (std::size_t i = 0; i < sol.t.size(); ++i) {
    CurveSample smp;
    smp.s = sol.t[i];
    smp.param = sol.t[i];
    smp.x = sol.y[i].head(n);
    smp.t = sol.y[i].tail(n);
    path.samples.push_back(std::move(smp));
  }
  path.causal = classify(inner_raw(chart.metric(p.coords), V.v, V.v), V.v.squaredNorm());
  return path;
}

/// max_s |⟨α′,α′⟩(s) − ⟨α′,α′⟩(0)| over the samples.
inline double energy_drift(const CurvePath& path) {
  const double e0 = inner_raw(path.chart.metric(path.samples.front().x), path.samples.front().t,
                              path.samples.front().t);
  double worst = 0.0;
  for (const auto& s : path.samples)
    worst = std::max(worst, std::abs(inner_raw(path.chart.metric(s.x), s.t, s.t) - e0));
  return worst;
}

/// β_V(u) for unit V.
inline Point exp_map(const MetricChart& chart, const Point& p, const Tangent& V, double u,
                     double tol = 1e-10) {
  chart.check_domain(p.coords);
  check_same_base(p, V);
  detail::check_unit_direction(chart, p.coords, V.v);
  if (u == 0.0) return p;
  const int n = chart.dim();
  Vec y0(2 * n);
  y0 << p.coords, V.v;
  OdeOptions opt;
  opt.atol = opt.rtol = tol;
  const OdeSolution sol = integrate_adaptive(detail::geodesic_rhs(chart), 0.0, y0, u, opt);
  return {sol.y.back().head(n)};
}

/// Fixed-step exponential map returning (β(u), β′(u)); smooth in (x0, v0).
inline std::pair<Vec, Vec> exp_fixed(const MetricChart& chart, const Vec& x0, const Vec& v0, double u,
                                     int n_steps) {
  const int n = chart.dim();
  Vec y0(2 * n);
  y0 << x0, v0;
  const Vec y = integrate_fixed(detail::geodesic_rhs(chart), 0.0, y0, u, n_steps);
  if (!y.allFinite()) throw Error(ErrorKind::domain, "geodesic left the chart domain");
  return {y.head(n), y.tail(n)};
}

/// Geodesics of the hyperquadric {⟨x,x⟩ = ±r²} in ambient coordinates:
/// cos(u/r)p + r sin(u/r)V for spacelike V, cosh(u/r)p + r sinh(u/r)V for
/// timelike V (pseudo-sphere); the trigonometric and hyperbolic roles swap
/// on the pseudo-hyperbolic quadric (negative radius sign).
inline Vec pseudosphere_geodesic_closed_form(const Vec& p, const Vec& V, double u, double r, Causal causal,
                                             const Vec& signs, double radius_sign = 1.0) {
  auto ip = [&](const Vec& a, const Vec& b) { return (signs.array() * a.array() * b.array()).sum(); };
  const double pp = ip(p, p), pv = ip(p, V), vv = ip(V, V);
  if (std::abs(pp - radius_sign * r * r) > 1e-9 * std::max(1.0, r * r))
    throw Error(ErrorKind::usage, "base point is not on the hyperquadric");
  if (std::abs(pv) > 1e-9) throw Error(ErrorKind::usage, "direction is not tangent to the hyperquadric");
  if (causal == Causal::lightlike) throw Error(ErrorKind::causal, "lightlike geodesics are not supported");
  const double want = causal == Causal::spacelike ? 1.0 : -1.0;
  if (std::abs(vv - want) > 1e-9) throw Error(ErrorKind::usage, "direction has the wrong causal norm");
  // β″ = −(⟨V,V⟩/⟨p,p⟩) β along the quadric geodesic
  const bool trig = vv * radius_sign > 0;
  return trig ? Vec(std::cos(u / r) * p + r * std::sin(u / r) * V)
              : Vec(std::cosh(u / r) * p + r * std::sinh(u / r) * V);
}

struct GeodesicSphere {
  GeodesicSphere(MetricChart c, Point p, double R) : chart(std::move(c)), center(std::move(p)), radius(R) {
    chart.check_domain(center.coords);
    require(radius > 0.0, ErrorKind::usage, "sphere radius must be positive");
    require(chart.radius_bound > 0.0, ErrorKind::config, "chart '" + chart.label() + "' declares no radius bound");
    if (radius > chart.radius_bound)
      throw Error(ErrorKind::config, "sphere radius " + std::to_string(radius) + " exceeds the radius bound " +
                                         std::to_string(chart.radius_bound) + " of chart '" + chart.label() + "'");
  }
  MetricChart chart;
  Point center;
  double radius;
};

/// Jacobi fields J_a along β_V with J_a(0) = 0, J_a′(0) = W_a, evaluated at
/// the requested radii (ascending). dJ holds the covariant derivatives.
struct JacobiSample {
  double u = 0.0;
  Vec x, xi;
  std::vector<Vec> J, dJ;
};

inline std::vector<JacobiSample> integrate_jacobi(const MetricChart& chart, const Vec& p, const Vec& V,
                                                  const std::vector<Vec>& W, std::vector<double> radii,
                                                  double tol = 1e-11) {
  const int n = chart.dim();
  const int m = static_cast<int>(W.size());
  std::sort(radii.begin(), radii.end());
  require(!radii.empty() && radii.front() > 0.0, ErrorKind::usage, "Jacobi radii must be positive");
  Vec y0 = Vec::Zero(2 * n * (m + 1));
  y0.head(n) = p;
  y0.segment(n, n) = V;
  for (int a = 0; a < m; ++a) y0.segment(2 * n * (a + 1) + n, n) = W[a];

  auto rhs = [&chart, n, m](double, const Vec& y) -> Vec {
    const Vec x = y.head(n);
    if (!chart.in_domain(x)) return detail::nan_vec(y.size());
    const Vec v = y.segment(n, n);
    const Christoffel G = christoffel(chart, x);
    Vec f(y.size());
    f.head(n) = v;
    f.segment(n, n) = -G.contract(v, v);
    for (int a = 0; a < m; ++a) {
      const Eigen::Index o = 2 * n * (a + 1);
      const Vec dx = y.segment(o, n), dv = y.segment(o + n, n);
      f.segment(o, n) = dv;
      f.segment(o + n, n) = -detail::christoffel_derivative(chart, x, dx, v, v) - 2.0 * G.contract(v, dv);
    }
    return f;
  };
  OdeOptions opt;
  opt.atol = opt.rtol = tol;
  opt.stops = radii;
  const OdeSolution sol = integrate_adaptive(rhs, 0.0, y0, radii.back(), opt);

  std::vector<JacobiSample> out;
  for (double u : radii) {
    auto it = std::find(sol.t.begin(), sol.t.end(), u);
    require(it != sol.t.end(), ErrorKind::integration, "Jacobi integration missed a requested radius");
    const Vec& y = sol.y[static_cast<std::size_t>(std::distance(sol.t.begin(), it))];
    JacobiSample js;
    js.u = u;
    js.x = y.head(n);
    js.xi = y.segment(n, n);
    const Christoffel G = christoffel(chart, js.x);
    for (int a = 0; a < m; ++a) {
      const Eigen::Index o = 2 * n * (a + 1);
      const Vec dx = y.segment(o, n), dv = y.segment(o + n, n);
      js.J.push_back(dx);
      js.dJ.push_back(dv + G.contract(js.xi, dx));
    }
    out.push_back(std::move(js));
  }
  return out;
}

/// Orthonormal complement of a unit direction v (frame coordinates, signs η)
/// obtained by sign-aware Gram–Schmidt of the standard axes.
inline std::vector<Vec> orthonormal_complement(const Vec& v, const Vec& eta) {
  const int n = static_cast<int>(v.size());
  auto ip = [&](const Vec& a, const Vec& b) { return (eta.array() * a.array() * b.array()).sum(); };
  std::vector<Vec> basis{v};
  std::vector<Vec> out;
  for (int i = 0; i < n && static_cast<int>(basis.size()) < n; ++i) {
    Vec e = unit(n, i);
    for (const Vec& b : basis) e -= (ip(e, b) / ip(b, b)) * b;
    const double ee = ip(e, e);
    if (std::abs(ee) < 1e-6) continue;
    e /= std::sqrt(std::abs(ee));
    basis.push_back(e);
    out.push_back(e);
  }
  require(static_cast<int>(out.size()) == n - 1, ErrorKind::numerical, "could not complete the direction to a frame");
  return out;
}

// ---------------------------------------------------------------------------
// Direction curves: closed curves on the unit (pseudo-)sphere of T_pM,
// expressed in the orthonormal frame of orthonormal_frame().

struct DirectionCurve {
  std::function<Vec(double)> v;  // σ ∈ [0, 2π)
  std::function<std::vector<Jet<3>>(const Jet<3>&)> jet;  // same curve on Taylor jets, when available
  int dim = 0;
  std::string kind;
  int attempts = 1;  // draws consumed by rejection sampling
};

namespace detail {

inline double min_direction_speed(const DirectionCurve& d) {
  double mn = std::numeric_limits<double>::infinity();
  const double h = 1e-5;
  for (int k = 0; k < 720; ++k) {
    const double s = 2 * kPi * k / 720;
    mn = std::min(mn, ((d.v(s + h) - d.v(s - h)) / (2 * h)).norm());
  }
  return mn;
}

struct TrigPoly {
  std::vector<Vec> a, b;  // a[0..K], b[1..K] (b[0] unused)
  Vec operator()(double s) const {
    Vec out = a[0];
    for (std::size_t k = 1; k < a.size(); ++k) out += std::cos(k * s) * a[k] + std::sin(k * s) * b[k];
    return out;
  }
  std::vector<Jet<3>> operator()(const Jet<3>& s) const {
    const int n = static_cast<int>(a[0].size());
    std::vector<Jet<3>> out(n);
    for (int i = 0; i < n; ++i) out[i] = Jet<3>(a[0](i));
    for (std::size_t k = 1; k < a.size(); ++k) {
      const Jet<3> c = cos(static_cast<double>(k) * s), sn = sin(static_cast<double>(k) * s);
      for (int i = 0; i < n; ++i) out[i] += a[k](i) * c + b[k](i) * sn;
    }
    return out;
  }
};

inline std::vector<Jet<3>> normalized(std::vector<Jet<3>> v) {
  Jet<3> q(0.0);
  for (const auto& c : v) q += c * c;
  const Jet<3> r = 1.0 / sqrt(q);
  for (auto& c : v) c = c * r;
  return v;
}

inline TrigPoly draw_trig(CounterRng& rng, int dim, int order, double lo, double hi) {
  TrigPoly p;
  p.a.assign(order + 1, Vec::Zero(dim));
  p.b.assign(order + 1, Vec::Zero(dim));
  for (int i = 0; i < dim; ++i) p.a[0](i) = rng.uniform(lo, hi);
  for (int k = 1; k <= order; ++k) {
    for (int i = 0; i < dim; ++i) p.a[k](i) = rng.uniform(lo, hi);
    for (int i = 0; i < dim; ++i) p.b[k](i) = rng.uniform(lo, hi);
  }
  return p;
}

}  // namespace detail

/// V(σ) = normalize(Σ_{k≤order} a_k cos kσ + b_k sin kσ), coefficients
/// uniform in [−1, 1], rejected until min‖V′‖ > min_speed and the
/// unnormalized polynomial stays away from zero. The speed floor bounds the
/// curvature of the resulting sphere curves.
inline DirectionCurve random_direction_curve(int dim, std::uint64_t seed, int order = 3, double min_speed = 0.1) {
  require(order >= 1, ErrorKind::usage, "direction curve order must be at least 1");
  for (std::uint64_t attempt = 0; attempt < 1000; ++attempt) {
    CounterRng rng(seed, attempt);
    const detail::TrigPoly P = detail::draw_trig(rng, dim, order, -1.0, 1.0);
    double pmin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 720; ++k) pmin = std::min(pmin, P(2 * kPi * k / 720).norm());
    if (pmin < 0.5) continue;
    DirectionCurve d;
    d.v = [P](double s) -> Vec { return P(s).normalized(); };
    d.jet = [P](const Jet<3>& s) { return detail::normalized(P(s)); };
    d.dim = dim;
    d.kind = "riemannian";
    d.attempts = static_cast<int>(attempt + 1);
    if (detail::min_direction_speed(d) > min_speed) return d;
  }
  throw Error(ErrorKind::numerical, "direction-curve rejection sampling did not terminate");
}

/// cos σ e_i + sin σ e_j.
inline DirectionCurve great_circle_direction(int dim, int i, int j, double phase = 0.0) {
  DirectionCurve d;
  d.v = [dim, i, j, phase](double s) -> Vec {
    Vec v = Vec::Zero(dim);
    v(i) = std::cos(s + phase);
    v(j) = std::sin(s + phase);
    return v;
  };
  d.jet = [dim, i, j, phase](const Jet<3>& s) {
    std::vector<Jet<3>> v(dim, Jet<3>(0.0));
    v[i] = cos(s + phase);
    v[j] = sin(s + phase);
    return v;
  };
  d.dim = dim;
  d.kind = "great_circle";
  return d;
}

/// Closed curves of unit timelike directions in E_1^3 frame coordinates,
/// (cosh ρ, sinh ρ cos φ, sinh ρ sin φ); their sphere curves are spacelike.
inline DirectionCurve random_timelike_direction_curve(std::uint64_t seed, int order = 3) {
  CounterRng rng(seed, 0);
  const double rho0 = rng.uniform(0.4, 1.0);
  std::vector<double> ra(order + 1), rb(order + 1), pa(order + 1), pb(order + 1);
  for (int k = 1; k <= order; ++k) {
    ra[k] = rng.uniform(-0.12, 0.12) / k;
    rb[k] = rng.uniform(-0.12, 0.12) / k;
    pa[k] = rng.uniform(-0.08, 0.08) / k;
    pb[k] = rng.uniform(-0.08, 0.08) / k;
  }
  DirectionCurve d;
  d.v = [=](double s) -> Vec {
    double rho = rho0, phi = s;
    for (int k = 1; k <= order; ++k) {
      rho += ra[k] * std::cos(k * s) + rb[k] * std::sin(k * s);
      phi += pa[k] * std::cos(k * s) + pb[k] * std::sin(k * s);
    }
    Vec v(3);
    v << std::cosh(rho), std::sinh(rho) * std::cos(phi), std::sinh(rho) * std::sin(phi);
    return v;
  };
  d.dim = 3;
  d.kind = "timelike";
  return d;
}

/// Closed curves of unit spacelike directions in E_1^3 frame coordinates,
/// (sinh ρ, cosh ρ cos φ, cosh ρ sin φ), kept spacelike (cosh ρ |φ′| > |ρ′|).
inline DirectionCurve random_spacelike_direction_curve(std::uint64_t seed, int order = 3) {
  CounterRng rng(seed, 0);
  const double rho0 = rng.uniform(-0.3, 0.3);
  std::vector<double> ra(order + 1), rb(order + 1), pa(order + 1), pb(order + 1);
  for (int k = 1; k <= order; ++k) {
    ra[k] = rng.uniform(-0.12, 0.12) / k;
    rb[k] = rng.uniform(-0.12, 0.12) / k;
    pa[k] = rng.uniform(-0.08, 0.08) / k;
    pb[k] = rng.uniform(-0.08, 0.08) / k;
  }
  DirectionCurve d;
  d.v = [=](double s) -> Vec {
    double rho = rho0, phi = s;
    for (int k = 1; k <= order; ++k) {
      rho += ra[k] * std::cos(k * s) + rb[k] * std::sin(k * s);
      phi += pa[k] * std::cos(k * s) + pb[k] * std::sin(k * s);
    }
    Vec v(3);
    v << std::sinh(rho), std::cosh(rho) * std::cos(phi), std::cosh(rho) * std::sin(phi);
    return v;
  };
  d.dim = 3;
  d.kind = "spacelike";
  return d;
}

// ---------------------------------------------------------------------------

struct SphereCurveOptions {
  int min_nodes = 128;
  int max_nodes = 4096;
  double tail_tol = 1e-12;
  double samples_per_length = 500.0;
  int min_samples = 256;
  double node_tol = 1e-11;  // pilot tolerance that fixes the exp-map step count
  double noise_floor = 1e-17;  // relative coefficient level treated as roundoff
  double max_turn = 0.2;  // frame rotation per sample before resampling finer
  double max_samples_per_length = 8000.0;
};

/// Diagnostics of a sphere-curve construction.
struct SphereCurveInfo {
  int nodes = 0;
  int exp_steps = 0;
  double tail_ratio = 0.0;
};

/// Unit direction V(σ) in chart components, from frame coordinates.
inline Vec frame_direction(const Mat& E, const DirectionCurve& d, double s) { return E * d.v(s); }

/// Step count for fixed-step exp maps of length R from p, from an adaptive pilot.
inline int exp_step_count(const MetricChart& chart, const Vec& p, const Vec& V, double R, double tol) {
  const int n = chart.dim();
  Vec y0(2 * n);
  y0 << p, V;
  OdeOptions opt;
  opt.atol = opt.rtol = tol;
  const OdeSolution sol = integrate_adaptive(detail::geodesic_rhs(chart), 0.0, y0, R, opt);
  const int accepted = static_cast<int>(sol.t.size()) - 1;
  return std::clamp(static_cast<int>(std::ceil(1.5 * accepted)), 16, 2000);
}

/// α(s) = exp_p(R·V(cs)) on the geodesic sphere, resampled by arc length.
/// The map σ ↦ exp_p(R V(σ)) is sampled at equispaced nodes with a fixed-step
/// integrator and represented by its trigonometric interpolant (positions and
/// radial normals), doubling the node count until the spectrum has decayed.
inline CurvePath sphere_curve(const GeodesicSphere& sphere, const DirectionCurve& dir,
                              const SphereCurveOptions& opt = {}, SphereCurveInfo* info = nullptr) {
  const MetricChart& chart = sphere.chart;
  const int n = chart.dim();
  require(dir.dim == n, ErrorKind::usage, "direction curve dimension does not match the chart");
  const Vec p = sphere.center.coords;
  const double R = sphere.radius;
  const Mat E = orthonormal_frame(chart, p);
  Vec eta(n);
  {
    const Mat g = chart.metric(p);
    for (int i = 0; i < n; ++i) eta(i) = inner_raw(g, E.col(i), E.col(i)) < 0 ? -1.0 : 1.0;
  }
  {
    const Vec v0 = dir.v(0.0);
    const double vv = (eta.array() * v0.array() * v0.array()).sum();
    require(std::abs(std::abs(vv) - 1.0) < 1e-9, ErrorKind::usage, "direction curve is not unit");
  }
  int steps = 16;
  for (int k = 0; k < 4; ++k)
    steps = std::max(steps, exp_step_count(chart, p, frame_direction(E, dir, kPi * k / 2), R, opt.node_tol));

  std::map<int, std::pair<Vec, Vec>> cache;  // node index on the finest grid → (x, ξ)
  const int finest = opt.max_nodes;
  auto node = [&](int j_fine) -> const std::pair<Vec, Vec>& {
    auto it = cache.find(j_fine);
    if (it != cache.end()) return it->second;
    const double s = 2 * kPi * j_fine / finest;
    return cache.emplace(j_fine, exp_fixed(chart, p, frame_direction(E, dir, s), R, steps)).first->second;
  };

  PeriodicSeries series;
  int N = opt.min_nodes;
  double tail = 1.0;
  for (;; N *= 2) {
    Mat samples(2 * n, N);
    for (int j = 0; j < N; ++j) {
      const auto& xv = node(j * (finest / N));
      samples.col(j) << xv.first, xv.second;
    }
    series = PeriodicSeries(samples, opt.noise_floor);
    tail = series.tail_ratio();
    if (tail < opt.tail_tol || N >= opt.max_nodes) break;
  }
  if (info) {
    info->nodes = N;
    info->exp_steps = steps;
    info->tail_ratio = tail;
  }

  auto shared = std::make_shared<PeriodicSeries>(std::move(series));
  auto src = std::make_shared<CurveSource>();
  src->t0 = 0.0;
  src->t1 = 2 * kPi;
  src->periodic = true;
  src->jet = [shared, n](double s) {
    const auto d = shared->eval(s, 3);
    return CurveJet{d[0].head(n), d[1].head(n), d[2].head(n), d[3].head(n)};
  };
  src->jet1 = [shared, n](double s) {
    const auto d = shared->eval(s, 1);
    return CurveJet{d[0].head(n), d[1].head(n), Vec(), Vec()};
  };
  src->normal = [shared, n](double s) {
    const auto d = shared->eval(s, 1);
    return NormalJet{d[0].tail(n), d[1].tail(n)};
  };
  src->direction = [E, dir](double s) -> Vec { return frame_direction(E, dir, s); };

  return arc_length_reparam_density(chart, src, opt.samples_per_length, opt.min_samples);
}

/// ξ(q) = β_V′(R) at q = exp_p(RV).
inline Tangent radial_normal(const GeodesicSphere& sphere, const Tangent& V, double tol = 1e-11) {
  const MetricChart& chart = sphere.chart;
  check_same_base(sphere.center, V);
  detail::check_unit_direction(chart, sphere.center.coords, V.v);
  const int n = chart.dim();
  Vec y0(2 * n);
  y0 << sphere.center.coords, V.v;
  OdeOptions opt;
  opt.atol = opt.rtol = tol;
  const OdeSolution sol = integrate_adaptive(detail::geodesic_rhs(chart), 0.0, y0, sphere.radius, opt);
  return {{sol.y.back().head(n)}, sol.y.back().tail(n)};
}

/// ξ at a sample of a sphere curve, from the V tag carried by its source.
inline Tangent radial_normal(const CurvePath& path, int k) {
  if (!path.source || !path.source->normal)
    throw Error(ErrorKind::usage, "curve sample carries no radial direction tag");
  const auto& smp = path.samples.at(static_cast<std::size_t>(k));
  return {{smp.x}, sample_normal(path, static_cast<std::size_t>(k)).xi};
}

}  // namespace rmframe
