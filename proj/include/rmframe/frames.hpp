#pragma once

// Moving frames along sampled curves: parallel and rotation-minimizing
// transport (integrated), Frenet and Darboux frames (pointwise from jets).

#include <rmframe/curve.hpp>
#include <rmframe/geodesic.hpp>

namespace rmframe {

/// Kinematics of a curve at one parameter value, in covariant form.
struct Kinematics {
  Vec x, v;        // position and σ-velocity
  Mat g;
  Christoffel G;
  double w = 0.0;  // speed |⟨v,v⟩|^{1/2}
  int eps = 1;     // ⟨t,t⟩
  Vec t;           // unit tangent
  Vec A;           // ∇_σ v
  Vec acc;         // ∇_t t
  Vec jerk;        // ∇_σ A
};

inline Kinematics kinematics(const MetricChart& chart, const CurveJet& j, bool with_jerk = true) {
  Kinematics k;
  k.x = j.x;
  k.v = j.d1;
  k.g = chart.metric(j.x);
  k.G = christoffel(chart, j.x);
  const double vv = inner_raw(k.g, k.v, k.v);
  k.eps = vv < 0 ? -1 : 1;
  k.w = std::sqrt(std::abs(vv));
  k.t = k.v / k.w;
  k.A = j.d2 + k.G.contract(k.v, k.v);
  k.acc = (k.A - (inner_raw(k.g, k.A, k.v) / vv) * k.v) / (k.w * k.w);
  if (with_jerk) {
    const Vec dA = j.d3 + detail::christoffel_derivative(chart, j.x, k.v, k.v, k.v) + 2.0 * k.G.contract(j.d2, k.v);
    k.jerk = dA + k.G.contract(k.v, k.A);
  }
  return k;
}

inline std::vector<Kinematics> kinematics_along(const CurvePath& path, bool with_jerk = true) {
  std::vector<Kinematics> out;
  out.reserve(path.samples.size());
  for (const auto& s : path.samples)
    out.push_back(kinematics(path.chart, s.jet.x.size() ? s.jet : path.source->jet(s.param), with_jerk));
  return out;
}

/// sqrt(rᵀ|g|r) with |g| the absolute value of the metric matrix; equals the
/// metric norm in the Riemannian case and never vanishes on nonzero r.
inline double abs_norm(const Mat& g, const Vec& r, bool riemannian) {
  if (riemannian) return std::sqrt(std::max(0.0, inner_raw(g, r, r)));
  Eigen::SelfAdjointEigenSolver<Mat> es(g);
  const Mat absg = es.eigenvectors() * es.eigenvalues().cwiseAbs().asDiagonal() * es.eigenvectors().transpose();
  return std::sqrt(std::max(0.0, inner_raw(absg, r, r)));
}

/// a × b with ⟨a × b, c⟩ = vol(a, b, c) (dimension 3 only).
inline Vec metric_cross(const Mat& g, const Vec& a, const Vec& b) {
  Eigen::Vector3d ae(a(0), a(1), a(2)), be(b(0), b(1), b(2));
  const Eigen::Vector3d c = ae.cross(be);
  const Vec cv = Vec(c) * std::sqrt(std::abs(g.determinant()));
  return g.ldlt().solve(cv);
}

namespace detail {

/// Causal-sign-aware Gram–Schmidt of vs against the fixed leading vector t.
inline void reorthonormalize(const Mat& g, const Vec& t, int eps, std::vector<Vec>& vs,
                             std::vector<int>& signs) {
  signs.resize(vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i) {
    Vec e = vs[i] - (eps * inner_raw(g, vs[i], t)) * t;
    for (std::size_t j = 0; j < i; ++j) e -= (signs[j] * inner_raw(g, e, vs[j])) * vs[j];
    const double ee = inner_raw(g, e, e);
    if (!(std::abs(ee) > 1e-20)) throw Error(ErrorKind::numerical, "frame degenerated during transport");
    signs[i] = ee < 0 ? -1 : 1;
    vs[i] = e / std::sqrt(std::abs(ee));
  }
}

/// Central 6th-order derivative at an interior sample (3 ≤ k ≤ n−4).
template <class T>
T fd6(const std::vector<T>& f, std::size_t k, double h) {
  return T((-f[k - 3] + 9.0 * f[k - 2] - 45.0 * f[k - 1] + 45.0 * f[k + 1] - 9.0 * f[k + 2] + f[k + 3]) / (60.0 * h));
}

}  // namespace detail

/// Solves ∇_t X = 0 along the samples (classical RK4 in the source parameter).
inline std::vector<Vec> parallel_transport(const CurvePath& path, const Vec& X0) {
  const MetricChart& chart = path.chart;
  require(X0.size() == chart.dim(), ErrorKind::usage, "transported vector has the wrong dimension");
  std::vector<Vec> out{X0};
  const auto& S = *path.source;
  auto rhs = [&](double sg, const Vec& X) -> Vec {
    const CurveJet j = S.jet1 ? S.jet1(sg) : S.jet(sg);
    return -christoffel(chart, j.x).contract(j.d1, X);
  };
  std::size_t count = path.samples.size() + (path.closed ? 1 : 0);
  for (std::size_t k = 1; k < count; ++k) {
    const double s0 = path.samples[k - 1].param;
    const double s1 = k < path.samples.size() ? path.samples[k].param : S.t1;
    out.push_back(rk4_step(rhs, s0, out.back(), s1 - s0));
  }
  return out;
}

// ---------------------------------------------------------------------------

struct MovingFrame {
  int eps = 1;                      // ⟨t,t⟩
  std::vector<int> eps_i;           // ⟨n_i,n_i⟩
  std::vector<double> s;
  std::vector<Vec> t;
  std::vector<std::vector<Vec>> normals;  // normals[k][i]
  std::vector<Vec> kappa;                 // κ_i = ⟨∇_t t, n_i⟩ per sample
  std::vector<Vec> initial_normals;
  double orthonormality_defect = 0.0;     // max |⟨n_i,n_j⟩ − ε_i δ_ij|, |⟨t,n_i⟩|
  double rm_residual = 0.0;               // max ‖∇_t n_i + ε κ_i t‖ (interior samples, 6th-order differences)
  bool causal_constant = true;            // ε, ε_i identical at every sample

  int count() const { return static_cast<int>(s.size()); }
  int normal_count() const { return static_cast<int>(eps_i.size()); }
};

/// Gram–Schmidt completion of t against the coordinate axes in order, with
/// the last vector flipped so that (t, n_1, …, n_m) is positively oriented.
inline std::vector<Vec> default_normals(const Mat& g, const Vec& t, int eps) {
  const int n = static_cast<int>(t.size());
  std::vector<Vec> out;
  std::vector<int> signs;
  for (int i = 0; i < n && static_cast<int>(out.size()) < n - 1; ++i) {
    Vec e = unit(n, i) - (eps * inner_raw(g, unit(n, i), t)) * t;
    for (std::size_t j = 0; j < out.size(); ++j) e -= (signs[j] * inner_raw(g, e, out[j])) * out[j];
    const double ee = inner_raw(g, e, e);
    if (std::abs(ee) < 1e-10 * std::max(1.0, e.squaredNorm())) continue;
    signs.push_back(ee < 0 ? -1 : 1);
    out.push_back(e / std::sqrt(std::abs(ee)));
  }
  if (static_cast<int>(out.size()) != n - 1) throw Error(ErrorKind::numerical, "frame initialization pivot below 1e-10");
  Mat F(n, n);
  F.col(0) = t;
  for (int i = 0; i < n - 1; ++i) F.col(i + 1) = out[i];
  if (F.determinant() < 0) out.back() = -out.back();
  return out;
}

/// Rotation-minimizing frame: ∇_t n_i = −ε κ_i t with κ_i = ⟨∇_t t, n_i⟩,
/// integrated by RK4 in the source parameter and re-orthonormalized per step.
inline MovingFrame rm_frame(const CurvePath& path, std::vector<Vec> initial = {}) {
  const MetricChart& chart = path.chart;
  const int n = chart.dim();
  if (path.causal.kind == Causal::lightlike) throw Error(ErrorKind::causal, "rotation-minimizing frames need a non-lightlike curve");
  const auto& S = *path.source;
  const std::vector<Kinematics> K = kinematics_along(path, false);

  MovingFrame F;
  F.eps = K.front().eps;
  if (initial.empty()) initial = default_normals(K.front().g, K.front().t, F.eps);
  require(static_cast<int>(initial.size()) == n - 1, ErrorKind::usage, "need dim-1 initial normals");
  std::vector<Vec> N = initial;
  detail::reorthonormalize(K.front().g, K.front().t, F.eps, N, F.eps_i);
  F.initial_normals = N;

  const int m = n - 1;
  auto pack = [&](const std::vector<Vec>& vs) {
    Vec y(n * m);
    for (int i = 0; i < m; ++i) y.segment(i * n, n) = vs[i];
    return y;
  };
  auto unpack = [&](const Vec& y) {
    std::vector<Vec> vs(m);
    for (int i = 0; i < m; ++i) vs[i] = y.segment(i * n, n);
    return vs;
  };
  const int eps = F.eps;
  // RK4 stages fall on the two end samples (kinematics known) and twice on
  // the midpoint, which is evaluated once.
  std::size_t step = 0;
  double mid_sg = std::numeric_limits<double>::quiet_NaN();
  Kinematics mid;
  auto same = [](double a, double b) { return std::abs(a - b) <= 1e-14 * std::max(1.0, std::abs(b)); };
  auto kin_at = [&](double sg) -> const Kinematics& {
    if (same(sg, path.samples[step - 1].param)) return K[step - 1];
    if (same(sg, path.samples[step].param)) return K[step];
    if (sg != mid_sg) {
      mid = kinematics(chart, S.jet(sg), false);
      mid_sg = sg;
    }
    return mid;
  };
  auto rhs = [&](double sg, const Vec& y) -> Vec {
    const Kinematics& k = kin_at(sg);
    Vec f(y.size());
    for (int i = 0; i < m; ++i) {
      const Vec ni = y.segment(i * n, n);
      const double ki = inner_raw(k.g, k.acc, ni);
      f.segment(i * n, n) = -k.G.contract(k.v, ni) - (eps * ki) * k.v;
    }
    return f;
  };

  const std::size_t count = path.samples.size();
  std::vector<int> signs;
  for (std::size_t k = 0; k < count; ++k) {
    if (k > 0) {
      step = k;
      const double h = path.samples[k].param - path.samples[k - 1].param;
      Vec y = rk4_step(rhs, path.samples[k - 1].param, pack(N), h);
      N = unpack(y);
      const int eps_k = K[k].eps;
      detail::reorthonormalize(K[k].g, K[k].t, eps_k, N, signs);
      if (eps_k != F.eps || signs != F.eps_i) F.causal_constant = false;
    }
    F.s.push_back(path.samples[k].s);
    F.t.push_back(K[k].t);
    F.normals.push_back(N);
    Vec kap(m);
    for (int i = 0; i < m; ++i) kap(i) = inner_raw(K[k].g, K[k].acc, N[i]);
    F.kappa.push_back(kap);
  }

  // invariants: orthonormality and the RM equations via 4th-order differences in s
  const double ds = path.ds();
  for (std::size_t k = 0; k < count; ++k) {
    const Mat& g = K[k].g;
    for (int i = 0; i < m; ++i) {
      F.orthonormality_defect = std::max(F.orthonormality_defect, std::abs(inner_raw(g, F.t[k], F.normals[k][i])));
      for (int j = 0; j < m; ++j) {
        const double target = i == j ? F.eps_i[i] : 0.0;
        F.orthonormality_defect =
            std::max(F.orthonormality_defect, std::abs(inner_raw(g, F.normals[k][i], F.normals[k][j]) - target));
      }
    }
  }
  if (count >= 8) {
    for (int i = 0; i < m; ++i) {
      std::vector<Vec> ni(count);
      for (std::size_t k = 0; k < count; ++k) ni[k] = F.normals[k][i];
      for (std::size_t k = 3; k + 3 < count; ++k) {
        const Vec dn = detail::fd6(ni, k, ds);
        const Vec cov = dn + K[k].G.contract(K[k].t, ni[k]);
        const Vec r = cov + (F.eps * F.kappa[k](i)) * F.t[k];
        F.rm_residual = std::max(F.rm_residual, abs_norm(K[k].g, r, chart.riemannian()));
      }
    }
  }
  return F;
}

// ---------------------------------------------------------------------------

struct FrenetData {
  std::vector<double> s, kappa, tau;
  std::vector<double> dkappa;  // dκ/ds from the jets
  std::vector<Vec> t, n, b;
  std::vector<bool> valid;  // κ > κ_min
  int eps = 1, eps_n = 1, eps_b = 1;
  double residual = 0.0;    // max ‖∇_t t − ε_n κ n‖ over valid samples
  double orthogonality = 0.0;

  bool all_valid() const { return std::all_of(valid.begin(), valid.end(), [](bool v) { return v; }); }
};

inline std::vector<std::pair<double, double>> invalid_intervals(const FrenetData& f) {
  std::vector<std::pair<double, double>> out;
  for (std::size_t k = 0; k < f.valid.size(); ++k) {
    if (f.valid[k]) continue;
    const double a = f.s[k];
    while (k + 1 < f.valid.size() && !f.valid[k + 1]) ++k;
    out.emplace_back(a, f.s[k]);
  }
  return out;
}

/// Frenet frame of a curve in a 3-dimensional chart: n = ∇_t t/κ, b completes
/// a positively oriented frame, τ = ε_b⟨∇_t n, b⟩. With throw_on_degenerate,
/// samples with κ ≤ κ_min raise an error listing the offending s-intervals;
/// otherwise they are flagged in `valid` and carry τ = 0.
inline FrenetData frenet_frame(const CurvePath& path, bool throw_on_degenerate = true) {
  const MetricChart& chart = path.chart;
  require(chart.dim() == 3, ErrorKind::usage, "Frenet frames are implemented in dimension 3 only");
  const auto K = kinematics_along(path, true);
  FrenetData f;
  f.eps = K.front().eps;
  for (std::size_t k = 0; k < K.size(); ++k) {
    const Kinematics& q = K[k];
    const double aa = inner_raw(q.g, q.acc, q.acc);
    const double kap = std::sqrt(std::abs(aa));
    const bool ok = kap > kKappaMin && std::abs(aa) > kLightTol * q.acc.squaredNorm();
    f.s.push_back(path.samples[k].s);
    f.t.push_back(q.t);
    f.kappa.push_back(kap);
    f.valid.push_back(ok);
    if (!ok) {
      f.n.push_back(Vec::Zero(3));
      f.b.push_back(Vec::Zero(3));
      f.tau.push_back(0.0);
      f.dkappa.push_back(0.0);
      continue;
    }
    const int en = aa < 0 ? -1 : 1;
    const Vec nn = q.acc / kap;
    Vec b = metric_cross(q.g, q.t, nn);
    const double bb = inner_raw(q.g, b, b);
    const int eb = bb < 0 ? -1 : 1;
    b /= std::sqrt(std::abs(bb));
    Mat M(3, 3);
    M << q.t, nn, b;
    if (M.determinant() < 0) b = -b;
    f.eps_n = en;
    f.eps_b = eb;
    f.n.push_back(nn);
    f.b.push_back(b);
    // ⟨∇_t n, b⟩ = ⟨∇_σ A, b⟩/(w³ κ) since b ⟂ span{v, A}
    f.tau.push_back(eb * inner_raw(q.g, q.jerk, b) / (q.w * q.w * q.w * kap));
    // κ′ = ε_n⟨∇_t∇_t t, n⟩ = ε_n(⟨∇_σA, n⟩ − 3ε⟨A,v⟩κ)/w³
    f.dkappa.push_back(en * (inner_raw(q.g, q.jerk, nn) - 3.0 * q.eps * inner_raw(q.g, q.A, q.v) * kap) /
                       (q.w * q.w * q.w));
    f.residual = std::max(f.residual, abs_norm(q.g, q.acc - kap * nn, chart.riemannian()));
    f.orthogonality = std::max({f.orthogonality, std::abs(inner_raw(q.g, nn, b)), std::abs(inner_raw(q.g, q.t, nn)),
                                std::abs(inner_raw(q.g, q.t, b))});
  }
  if (throw_on_degenerate && !f.all_valid())
    throw FrenetDegenerateError("curvature below kappa_min on part of the curve", invalid_intervals(f));
  return f;
}

// ---------------------------------------------------------------------------

/// Largest frame-turning rate along the samples: max(κ, |τ|) in dimension 3,
/// κ alone otherwise.
inline double max_turning_rate(const CurvePath& path) {
  double rate = 0.0;
  if (path.chart.dim() == 3) {
    const FrenetData f = frenet_frame(path, false);
    for (std::size_t k = 0; k < f.kappa.size(); ++k) rate = std::max({rate, f.kappa[k], std::abs(f.tau[k])});
  } else {
    for (const auto& q : kinematics_along(path, false)) rate = std::max(rate, std::sqrt(std::abs(inner_raw(q.g, q.acc, q.acc))));
  }
  return rate;
}

/// Resamples a closed curve so that the frame turns by at most `max_turn`
/// radians per sample, with the density capped at `max_density`.
inline CurvePath refine_for_turning(const CurvePath& path, double max_turn, double max_density) {
  if (!path.closed || !path.source || !path.source->periodic || max_turn <= 0.0) return path;
  const double rate = max_turning_rate(path);
  if (rate * path.ds() <= max_turn) return path;
  const double density = std::min(max_density, rate / max_turn);
  if (density * path.length <= path.size()) return path;
  return arc_length_reparam_density(path.chart, path.source, density, path.size());
}

struct DarbouxData {
  std::vector<double> s, kappa_g, kappa_n, tau_g;
  std::vector<Vec> t, h, xi;
  double orthonormality = 0.0;  // max defect of {t, h, ξ}
  double residual = 0.0;        // max residual of the Darboux equations
};

/// Darboux frame {t, h = ξ × t, ξ} of a curve on a surface in a Riemannian
/// 3-chart; ξ and its σ-derivative come from the curve source unless given.
inline DarbouxData darboux_frame(const CurvePath& path, std::function<NormalJet(double)> xi_field = nullptr) {
  const MetricChart& chart = path.chart;
  require(chart.dim() == 3, ErrorKind::usage, "Darboux frames need a 3-dimensional chart");
  require(chart.riemannian(), ErrorKind::usage, "Darboux frames are implemented for Riemannian charts");
  if (!xi_field) require(path.has_normal(), ErrorKind::usage, "curve carries no surface normal");
  const auto K = kinematics_along(path, false);
  DarbouxData d;
  for (std::size_t k = 0; k < K.size(); ++k) {
    const Kinematics& q = K[k];
    const NormalJet nj = xi_field ? xi_field(path.samples[k].param) : sample_normal(path, k);
    const Vec& xi = nj.xi;
    if (std::abs(inner_raw(q.g, xi, q.t)) > 1e-5)
      throw Error(ErrorKind::usage, "surface normal is not orthogonal to the curve at s = " +
                                        std::to_string(path.samples[k].s));
    const Vec dxi = (nj.dxi + q.G.contract(q.v, xi)) / q.w;  // ∇_t ξ
    const Vec h = metric_cross(q.g, xi, q.t);
    const Vec dh = metric_cross(q.g, dxi, q.t) + metric_cross(q.g, xi, q.acc);  // ∇_t h
    const double kg = inner_raw(q.g, q.acc, h), kn = inner_raw(q.g, q.acc, xi);
    const double tg = inner_raw(q.g, dh, xi);
    d.s.push_back(path.samples[k].s);
    d.t.push_back(q.t);
    d.h.push_back(h);
    d.xi.push_back(xi);
    d.kappa_g.push_back(kg);
    d.kappa_n.push_back(kn);
    d.tau_g.push_back(tg);
    d.orthonormality = std::max({d.orthonormality, std::abs(inner_raw(q.g, q.t, h)), std::abs(inner_raw(q.g, q.t, xi)),
                                 std::abs(inner_raw(q.g, h, xi)), std::abs(inner_raw(q.g, h, h) - 1.0),
                                 std::abs(inner_raw(q.g, xi, xi) - 1.0)});
    const Vec r1 = q.acc - kg * h - kn * xi;
    const Vec r2 = dh + kg * q.t - tg * xi;
    const Vec r3 = dxi + kn * q.t + tg * h;
    d.residual = std::max({d.residual, abs_norm(q.g, r1, true), abs_norm(q.g, r2, true), abs_norm(q.g, r3, true)});
  }
  return d;
}

// ---------------------------------------------------------------------------

/// Unwraps an angle sequence by nearest-branch continuation; jumps above π/2
/// mean the sampling is too coarse.
inline std::vector<double> unwrap_angles(const std::vector<double>& raw) {
  std::vector<double> out(raw.size());
  if (raw.empty()) return out;
  out[0] = raw[0];
  for (std::size_t k = 1; k < raw.size(); ++k) {
    double d = raw[k] - raw[k - 1];
    d -= 2 * kPi * std::round(d / (2 * kPi));
    if (std::abs(d) > kPi / 2)
      throw Error(ErrorKind::resolution, "angle jump above pi/2 between samples; resample more densely");
    out[k] = out[k - 1] + d;
  }
  return out;
}

/// Derivative of an unwrapped angle θ on uniform-s samples. For closed curves
/// the winding (θ(L) − θ(0)) continues the sequence periodically.
inline std::vector<double> angle_derivative(const std::vector<double>& theta, double ds, bool closed,
                                            double winding) {
  const int n = static_cast<int>(theta.size());
  std::vector<double> out(n);
  auto at = [&](int i) {
    const int q = static_cast<int>(std::floor(static_cast<double>(i) / n));
    return theta[static_cast<std::size_t>(i - q * n)] + q * winding;
  };
  for (int k = 0; k < n; ++k) {
    if (closed || (k >= 2 && k <= n - 3))
      out[k] = (at(k - 2) - 8 * at(k - 1) + 8 * at(k + 1) - at(k + 2)) / (12 * ds);
    else if (k == 0)
      out[k] = (-3 * theta[0] + 4 * theta[1] - theta[2]) / (2 * ds);
    else if (k == n - 1)
      out[k] = (3 * theta[n - 1] - 4 * theta[n - 2] + theta[n - 3]) / (2 * ds);
    else
      out[k] = (theta[k + 1] - theta[k - 1]) / (2 * ds);
  }
  return out;
}

/// Closing increment of an unwrapped angle: the branch of θ(L) nearest θ(n−1).
inline double closing_winding(const std::vector<double>& theta) {
  const double last = theta.back();
  double d = theta.front() - last;
  d -= 2 * kPi * std::round(d / (2 * kPi));
  if (std::abs(d) > kPi / 2) throw Error(ErrorKind::resolution, "angle jump above pi/2 across the closing point");
  return last + d - theta.front();
}

struct AngleRelation {
  std::vector<double> theta, dtheta, residual;  // residual = τ_g − τ − θ′
  double max_residual = 0.0;
  double winding = 0.0;  // ∮θ′ (closed curves)
};

/// θ = angle from ξ to the principal normal, n = cos θ ξ + sin θ h.
inline AngleRelation frame_angle_relation(const CurvePath& path, const FrenetData& fr, const DarbouxData& da) {
  require(fr.s.size() == da.s.size(), ErrorKind::usage, "Frenet and Darboux data must share samples");
  std::vector<double> raw(fr.s.size());
  for (std::size_t k = 0; k < raw.size(); ++k) {
    if (!fr.valid[k]) throw FrenetDegenerateError("angle undefined where kappa <= kappa_min", invalid_intervals(fr));
    const Mat g = path.chart.metric(path.samples[k].x);
    raw[k] = std::atan2(inner_raw(g, fr.n[k], da.h[k]), inner_raw(g, fr.n[k], da.xi[k]));
  }
  AngleRelation a;
  a.theta = unwrap_angles(raw);
  if (path.closed) a.winding = closing_winding(a.theta);
  a.dtheta = angle_derivative(a.theta, path.ds(), path.closed, a.winding);
  a.residual.resize(raw.size());
  const std::size_t skip = path.closed ? 0 : 2;
  for (std::size_t k = 0; k < raw.size(); ++k) {
    a.residual[k] = da.tau_g[k] - fr.tau[k] - a.dtheta[k];
    if (k >= skip && k + skip < raw.size()) a.max_residual = std::max(a.max_residual, std::abs(a.residual[k]));
  }
  return a;
}

/// Angle φ of the principal normal in an RM frame of a 3-curve,
/// n = cos φ n_1 + sin φ n_2 ((t, n_1, n_2) positively oriented); φ′ = τ.
inline std::vector<double> rm_frenet_angle(const CurvePath& path, const MovingFrame& rm, const FrenetData& fr) {
  require(rm.normal_count() == 2, ErrorKind::usage, "RM/Frenet angle needs a 3-dimensional curve");
  std::vector<double> raw(rm.s.size());
  for (std::size_t k = 0; k < raw.size(); ++k) {
    const Mat g = path.chart.metric(path.samples[k].x);
    raw[k] = std::atan2(inner_raw(g, fr.n[k], rm.normals[k][1]), inner_raw(g, fr.n[k], rm.normals[k][0]));
  }
  return unwrap_angles(raw);
}

}  // namespace rmframe
