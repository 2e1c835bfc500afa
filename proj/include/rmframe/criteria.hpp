#pragma once

// Residual checks for the RM-frame characterizations of umbilical
// hypersurfaces and constant curvature. Every residual is "smaller is
// better" and carries its own tolerance; the two-threshold verdict scheme of
// core.hpp turns residuals into verdicts.

#include <rmframe/frames.hpp>
#include <rmframe/hypersurface.hpp>

#include <optional>
#include <sstream>

namespace rmframe {

struct Tolerances {
  double residual = 1e-4;   // model-space "consistent" threshold
  double violation = 1e-2;  // control "violated" threshold
};

struct Residual {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  double violation = 0.0;
  Verdict verdict = Verdict::consistent;
};

struct CriterionReport {
  std::string criterion;
  std::string metric;
  double sphere_radius = std::numeric_limits<double>::quiet_NaN();
  std::optional<std::uint64_t> curve_seed;
  std::vector<Residual> residuals;
  std::vector<std::pair<std::string, double>> fitted;  // constants and informational values
  std::vector<CriterionReport> parts;                  // per-curve reports of aggregate checks
  Verdict verdict = Verdict::consistent;
  bool inapplicable = false;
  std::string diagnostics;

  void add(const std::string& name, double value, double tolerance, double violation) {
    Residual r{name, value, tolerance, std::max(tolerance, violation), Verdict::consistent};
    r.verdict = judge(value, r.tolerance, r.violation);
    residuals.push_back(r);
  }
  void add(const std::string& name, double value, double tolerance, const Tolerances& tol) {
    add(name, value, tolerance, tol.violation);
  }
  void note(const std::string& text) {
    if (!diagnostics.empty()) diagnostics += "; ";
    diagnostics += text;
  }
  void mark_inapplicable(const std::string& why) {
    inapplicable = true;
    note(why);
  }
  /// consistent iff every residual is below its tolerance.
  void finalize() {
    if (inapplicable) {
      verdict = Verdict::inapplicable;
      return;
    }
    verdict = Verdict::consistent;
    for (const auto& r : residuals) verdict = combine(verdict, r.verdict);
    for (const auto& p : parts)
      if (p.verdict != Verdict::inapplicable) verdict = combine(verdict, p.verdict);
  }
  const Residual* find(const std::string& name) const {
    for (const auto& r : residuals)
      if (r.name == name) return &r;
    return nullptr;
  }
  double value(const std::string& name) const {
    const Residual* r = find(name);
    require(r != nullptr, ErrorKind::usage, "report has no residual '" + name + "'");
    return r->value;
  }
};

namespace detail {

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

inline std::vector<NormalJet> normals_along(const CurvePath& path) {
  require(path.has_normal(), ErrorKind::usage, "curve carries no hypersurface normal");
  std::vector<NormalJet> out;
  out.reserve(path.samples.size());
  for (std::size_t k = 0; k < path.samples.size(); ++k) out.push_back(sample_normal(path, k));
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Linear RM criterion

struct FitResult {
  std::vector<Vec> a;  // a_i(s) = ε_i⟨ξ, n_i⟩
  Vec a_mean;
  double constancy_dev = 0.0;        // max_s max_i |a_i(s) − ā_i|
  double linear_residual = 0.0;      // max_s |Σ ε a_i κ_i − η H| (samples with H given)
  double normal_decomposition = 0.0; // max_s |Σ ε_i a_i² − η|
  double mean_decomposition = 0.0;   // |Σ ε_i ā_i² − η|
  int eta = 1;
  int evaluated = 0;                 // samples entering linear_residual
  Verdict verdict = Verdict::consistent;
};

/// Pointwise a_i(s) and the linear relation Σ ε a_i κ_i = η H. H holds one
/// value per sample; NaN entries are skipped.
inline FitResult fit_linear_rm_criterion(const CurvePath& path, const MovingFrame& frame, const std::vector<double>& H,
                                         const Tolerances& tol = {}) {
  require(static_cast<int>(H.size()) == frame.count(), ErrorKind::usage, "H must have one value per sample");
  if (!frame.causal_constant) throw Error(ErrorKind::causal, "causal character changes along the curve");
  const auto xi = detail::normals_along(path);
  const int m = frame.normal_count();
  FitResult f;
  f.a_mean = Vec::Zero(m);
  const std::size_t n = xi.size();
  std::vector<int> etas;
  for (std::size_t k = 0; k < n; ++k) {
    const Mat g = path.chart.metric(path.samples[k].x);
    Vec a(m);
    for (int i = 0; i < m; ++i) a(i) = frame.eps_i[i] * inner_raw(g, xi[k].xi, frame.normals[k][i]);
    const int eta = inner_raw(g, xi[k].xi, xi[k].xi) < 0 ? -1 : 1;
    if (k == 0) f.eta = eta;
    if (eta != f.eta) throw Error(ErrorKind::causal, "normal changes causal character along the curve");
    double dec = 0.0, lin = 0.0;
    for (int i = 0; i < m; ++i) {
      dec += frame.eps_i[i] * a(i) * a(i);
      lin += frame.eps * a(i) * frame.kappa[k](i);
    }
    f.normal_decomposition = std::max(f.normal_decomposition, std::abs(dec - eta));
    if (std::isfinite(H[k])) {
      f.linear_residual = std::max(f.linear_residual, std::abs(lin - eta * H[k]));
      ++f.evaluated;
    }
    f.a_mean += a;
    f.a.push_back(a);
  }
  f.a_mean /= static_cast<double>(n);
  for (const Vec& a : f.a) f.constancy_dev = std::max(f.constancy_dev, (a - f.a_mean).cwiseAbs().maxCoeff());
  double dm = 0.0;
  for (int i = 0; i < m; ++i) dm += frame.eps_i[i] * f.a_mean(i) * f.a_mean(i);
  f.mean_decomposition = std::abs(dm - f.eta);
  require(f.evaluated > 0, ErrorKind::usage, "no mean-curvature values supplied");
  f.verdict = judge(std::max(f.constancy_dev, f.linear_residual), tol.residual, tol.violation);
  return f;
}

inline CriterionReport linear_rm_report(const FitResult& f, const Tolerances& tol = {}, const std::string& id = "linear_rm") {
  CriterionReport r;
  r.criterion = id;
  r.add("constancy_dev", f.constancy_dev, tol.residual, tol);
  r.add("linear_residual", f.linear_residual, tol.residual, tol);
  r.add("normal_decomposition", f.normal_decomposition, std::min(tol.residual, 1e-5), tol);
  for (Eigen::Index i = 0; i < f.a_mean.size(); ++i) r.fitted.emplace_back("a" + std::to_string(i + 1) + "_mean", f.a_mean(i));
  r.fitted.emplace_back("eta", f.eta);
  r.finalize();
  return r;
}

// ---------------------------------------------------------------------------
// Lines of curvature

/// ξ is RM along the curve iff ∇_t ξ = −ε κ_n t (κ_n = ⟨∇_t t, ξ⟩); in
/// dimension 3 (Riemannian) also τ_g = 0.
inline CriterionReport check_line_of_curvature(const CurvePath& path,
                                               std::function<NormalJet(double)> xi_field = nullptr,
                                               const Tolerances& tol = {}) {
  if (!xi_field) require(path.has_normal(), ErrorKind::usage, "curve carries no surface normal");
  const auto K = kinematics_along(path, false);
  double defect = 0.0;
  for (std::size_t k = 0; k < K.size(); ++k) {
    const Kinematics& q = K[k];
    const NormalJet nj = xi_field ? xi_field(path.samples[k].param) : sample_normal(path, k);
    const Vec dxi = (nj.dxi + q.G.contract(q.v, nj.xi)) / q.w;
    const double kn = inner_raw(q.g, q.acc, nj.xi);
    defect = std::max(defect, abs_norm(q.g, dxi + (q.eps * kn) * q.t, path.chart.riemannian()));
  }
  CriterionReport r;
  r.criterion = "line_of_curvature";
  r.add("parallelism_defect", defect, tol.residual, tol);
  if (path.chart.dim() == 3 && path.chart.riemannian()) {
    const DarbouxData d = darboux_frame(path, xi_field);
    double tg = 0.0;
    for (double v : d.tau_g) tg = std::max(tg, std::abs(v));
    r.add("geodesic_torsion", tg, tol.residual, tol);
  }
  r.finalize();
  return r;
}

// ---------------------------------------------------------------------------
// Curvature inequality κ ≥ |H|

namespace detail {

/// Equality samples of an inequality must coincide with geodesic samples.
/// Near κ_g = 0 the margin behaves like κ_g²/(κ + |H|), so "equality"
/// means margin·(κ + |H|) < kg_tol²; a factor-10 band in κ_g (100 in the
/// margin) separates genuine mismatches from threshold jitter.
inline int equality_mismatches(const std::vector<double>& margin, const std::vector<double>& scale,
                               const std::vector<double>& kg, double kg_tol) {
  int bad = 0;
  for (std::size_t k = 0; k < margin.size(); ++k) {
    if (!std::isfinite(margin[k])) continue;
    const double m = std::abs(margin[k]) * scale[k];
    const bool eq = m < kg_tol * kg_tol;
    const bool geo = std::abs(kg[k]) < kg_tol;
    if ((eq && std::abs(kg[k]) > 10 * kg_tol) || (geo && m > 100 * kg_tol * kg_tol)) ++bad;
  }
  return bad;
}

}  // namespace detail

/// margin(s) = κ(s) − |H(s)| on samples with H given.
inline CriterionReport check_curvature_inequality(const CurvePath& path, const std::vector<double>& H,
                                                  const Tolerances& tol = {}, double kg_tol = 1e-4) {
  require(H.size() == path.samples.size(), ErrorKind::usage, "H must have one value per sample");
  const auto K = kinematics_along(path, false);
  const auto xi = detail::normals_along(path);
  const bool darboux = path.chart.dim() == 3 && path.chart.riemannian();
  DarbouxData d;
  if (darboux) d = darboux_frame(path);
  std::vector<double> margin(K.size(), std::numeric_limits<double>::quiet_NaN()), scale(K.size()), kg(K.size());
  double min_margin = std::numeric_limits<double>::infinity(), decomposition = 0.0;
  int equality = 0;
  for (std::size_t k = 0; k < K.size(); ++k) {
    const Kinematics& q = K[k];
    const double kappa = abs_norm(q.g, q.acc, path.chart.riemannian());
    const double kn = inner_raw(q.g, q.acc, xi[k].xi);
    const int eta = inner_raw(q.g, xi[k].xi, xi[k].xi) < 0 ? -1 : 1;
    const Vec tang = q.acc - (eta * kn) * xi[k].xi;
    kg[k] = darboux ? d.kappa_g[k] : abs_norm(q.g, tang, path.chart.riemannian());
    if (darboux)
      decomposition = std::max(decomposition, std::abs(kappa * kappa - d.kappa_g[k] * d.kappa_g[k] - d.kappa_n[k] * d.kappa_n[k]));
    if (!std::isfinite(H[k])) continue;
    margin[k] = kappa - std::abs(H[k]);
    scale[k] = kappa + std::abs(H[k]);
    min_margin = std::min(min_margin, margin[k]);
    if (std::abs(margin[k]) * scale[k] < kg_tol * kg_tol) ++equality;
  }
  CriterionReport r;
  r.criterion = "inequality";
  r.add("margin_deficit", std::max(0.0, -min_margin), std::min(tol.residual, 1e-5), tol);
  if (darboux) r.add("decomposition", decomposition, std::min(tol.residual, 1e-6), tol);
  r.add("equality_mismatch", detail::equality_mismatches(margin, scale, kg, kg_tol), 0.5, 0.5);
  r.fitted.emplace_back("min_margin", min_margin);
  r.fitted.emplace_back("equality_samples", equality);
  r.finalize();
  return r;
}

// ---------------------------------------------------------------------------
// Semi-Riemannian inequality

/// With T = ∇^Σ_t t = ∇_t t − η κ_n ξ: if T is not timelike,
/// ⟨α″,α″⟩ ≥ ηH²; if T is not spacelike, ⟨α″,α″⟩ ≤ ηH². Both apply where
/// T = 0; a lightlike T makes the check inapplicable at that sample.
inline CriterionReport check_semi_inequality(const CurvePath& path, const std::vector<double>& H,
                                             const Tolerances& tol = {}, double kg_tol = 1e-4) {
  require(H.size() == path.samples.size(), ErrorKind::usage, "H must have one value per sample");
  const auto K = kinematics_along(path, false);
  const auto xi = detail::normals_along(path);
  CriterionReport r;
  r.criterion = "semi_inequality";
  std::vector<double> margin(K.size(), std::numeric_limits<double>::quiet_NaN()), scale(K.size(), 1.0), kg(K.size());
  double deficit = 0.0, min_margin = std::numeric_limits<double>::infinity();
  int eta0 = 0, eps0 = 0, lightlike = 0, zero = 0, spacelike_branch = 0, timelike_branch = 0;
  bool constant = true;
  for (std::size_t k = 0; k < K.size(); ++k) {
    const Kinematics& q = K[k];
    const int eta = inner_raw(q.g, xi[k].xi, xi[k].xi) < 0 ? -1 : 1;
    if (k == 0) {
      eta0 = eta;
      eps0 = q.eps;
    }
    constant = constant && eta == eta0 && q.eps == eps0;
    const double kn = inner_raw(q.g, q.acc, xi[k].xi);
    const Vec T = q.acc - (eta * kn) * xi[k].xi;
    const double TT = inner_raw(q.g, T, T);
    const double Tabs = abs_norm(q.g, T, false);
    kg[k] = std::sqrt(std::abs(TT));
    if (!std::isfinite(H[k])) continue;
    const double aa = inner_raw(q.g, q.acc, q.acc);
    const double d = aa - eta * H[k] * H[k];
    double m;
    if (Tabs < 1e-9) {
      m = -std::abs(d);  // both branches
      ++zero;
    } else {
      const CausalClass c = classify(TT, Tabs * Tabs);
      if (c.kind == Causal::lightlike) {
        ++lightlike;
        continue;
      }
      if (c.kind == Causal::spacelike) {
        m = d;
        ++spacelike_branch;
      } else {
        m = -d;
        ++timelike_branch;
      }
    }
    margin[k] = m;
    scale[k] = 2.0 * std::max(1.0, std::abs(H[k]));
    min_margin = std::min(min_margin, m);
    deficit = std::max(deficit, -m);
  }
  if (lightlike > 0) r.mark_inapplicable(std::to_string(lightlike) + " samples with lightlike tangential acceleration");
  r.add("branch_deficit", std::max(0.0, deficit), std::min(tol.residual, 1e-5), tol);
  r.add("equality_mismatch", detail::equality_mismatches(margin, scale, kg, kg_tol), 0.5, 0.5);
  r.add("causal_constancy", constant ? 0.0 : 1.0, 0.5, 0.5);
  r.fitted.emplace_back("min_margin", min_margin);
  r.fitted.emplace_back("eta", eta0);
  r.fitted.emplace_back("eps", eps0);
  r.fitted.emplace_back("not_timelike_samples", spacelike_branch);
  r.fitted.emplace_back("not_spacelike_samples", timelike_branch);
  r.fitted.emplace_back("both_branch_samples", zero);
  r.finalize();
  return r;
}

// ---------------------------------------------------------------------------
// Total torsion

struct TotalTorsion {
  double value = 0.0;
  double error_estimate = 0.0;  // |S(ds) − S(2ds)| / 15
};

/// Composite Simpson over one period of a closed uniform-s sampling
/// (sample count divisible by 4).
inline TotalTorsion periodic_simpson(const std::vector<double>& f, double ds) {
  const std::size_t n = f.size();
  require(n >= 8 && n % 4 == 0, ErrorKind::usage, "closed Simpson needs a sample count divisible by 4");
  auto simpson = [&](std::size_t stride) {
    const std::size_t m = n / stride;
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) acc += (j % 2 == 0 ? 2.0 : 4.0) * f[j * stride];
    return acc * ds * static_cast<double>(stride) / 3.0;
  };
  const double fine = simpson(1), coarse = simpson(2);
  return {fine, std::abs(fine - coarse) / 15.0};
}

inline TotalTorsion total_torsion_detail(const CurvePath& path, const FrenetData& fr) {
  require(path.closed, ErrorKind::usage, "total torsion needs a closed curve");
  if (!fr.all_valid()) throw FrenetDegenerateError("Frenet frame degenerate; total torsion undefined", invalid_intervals(fr));
  return periodic_simpson(fr.tau, path.ds());
}

/// T = ∮τ ds.
inline double total_torsion(const CurvePath& path) { return total_torsion_detail(path, frenet_frame(path)).value; }

/// Total torsion and the Darboux identity ∮τ_g − ∮θ′ = ∮τ on one closed curve.
inline CriterionReport total_torsion_report(const CurvePath& path, double tolerance = 1e-3, const Tolerances& tol = {}) {
  CriterionReport r;
  r.criterion = "total_torsion";
  const FrenetData fr = frenet_frame(path);
  const TotalTorsion T = total_torsion_detail(path, fr);
  r.add("total_torsion", std::abs(T.value), tolerance, tol);
  if (path.has_normal() && path.chart.dim() == 3 && path.chart.riemannian()) {
    const DarbouxData d = darboux_frame(path);
    const AngleRelation a = frame_angle_relation(path, fr, d);
    const double tg = periodic_simpson(d.tau_g, path.ds()).value;
    const double k = std::round(a.winding / (2 * kPi));
    r.add("geodesic_torsion_integral", std::abs(tg), tolerance, tol);
    r.add("winding_defect", std::abs(a.winding - 2 * kPi * k), tolerance, tol);
    r.add("torsion_identity", std::abs(T.value - (tg - a.winding)), 2 * tolerance, tol);
    r.fitted.emplace_back("winding_number", k);
  }
  r.fitted.emplace_back("T", T.value);
  r.fitted.emplace_back("quadrature_error", T.error_estimate);
  r.finalize();
  return r;
}

// ---------------------------------------------------------------------------
// Sphere ODE

/// For a curve on an umbilical sphere of a 3-dimensional space form with
/// umbilicity factor λ, c = λ/κ satisfies ((1/τ)c′)′ + τc = 0 and
/// c² + (c′/τ)² = const. The inner derivative c′ = −λκ′/κ² comes from the
/// curve jets; the outer one is a 4th-order centered difference on a
/// uniform-s resampling with at least `density` samples per unit length,
/// its nodes spaced about min(stencil, turn / max(κ, |τ|)) apart in arc
/// length (a whole number of samples). Differencing c twice at the sample spacing would divide the
/// ~1e-12 evaluation noise by ds²·τ; the wider outer stencil keeps the noise
/// of c′/τ from dominating while its truncation error stays O(stencil⁴).
/// Samples whose stencils touch |τ| ≤ tau_min are excluded.
inline CriterionReport check_sphere_ode(const CurvePath& path, double lambda, double density = 2000.0,
                                        double tau_min = 1e-3, double ode_tol = 1e-3, double drift_tol = 1e-4,
                                        const Tolerances& tol = {}, double stencil = 0.005, double turn = 0.05) {
  require(path.chart.dim() == 3, ErrorKind::usage, "the sphere ODE is a 3-dimensional criterion");
  require(stencil > 0.0 && turn > 0.0 && density > 0.0, ErrorKind::usage, "stencil, turn and density must be positive");
  CurvePath fine = path;
  if (path.size() < density * path.length) {
    fine = path.closed ? arc_length_reparam_density(path.chart, path.source, density, path.size())
                       : arc_length_reparam(path.chart, path.source, static_cast<int>(std::ceil(density * path.length)) + 1);
  }
  const FrenetData fr = frenet_frame(fine);
  const int n = fine.size();
  const double ds = fine.ds();
  const bool closed = fine.closed;
  // Outer stencil spacing, shrunk where the frame turns fast.
  auto stride = [&](int k) {
    const double rate = std::max(fr.kappa[k], std::abs(fr.tau[k]));
    const double h = std::min(stencil, turn / std::max(rate, 1e-12));
    return std::max(1, static_cast<int>(std::lround(h / ds)));
  };
  auto idx = [&](int i) { return closed ? ((i % n) + n) % n : i; };
  auto inside = [&](int k, int r, int st) { return closed || (k - r * st >= 0 && k + r * st < n); };
  auto tau_ok = [&](int k, int r, int st) {
    for (int j = k - r * st; j <= k + r * st; ++j)
      if (std::abs(fr.tau[idx(j)]) <= tau_min) return false;
    return true;
  };
  std::vector<double> c(n), q(n, std::numeric_limits<double>::quiet_NaN());
  for (int k = 0; k < n; ++k) {
    c[k] = lambda / fr.kappa[k];
    if (std::abs(fr.tau[k]) > tau_min) q[k] = -lambda * fr.dkappa[k] / (fr.kappa[k] * fr.kappa[k] * fr.tau[k]);
  }
  auto d4 = [&](const std::vector<double>& f, int k, int st) {
    return (f[idx(k - 2 * st)] - 8 * f[idx(k - st)] + 8 * f[idx(k + st)] - f[idx(k + 2 * st)]) / (12 * st * ds);
  };
  double ode = 0.0, fi_min = std::numeric_limits<double>::infinity(), fi_max = -fi_min;
  int evaluated = 0, masked = 0, st_min = n, st_max = 0;
  for (int k = 0; k < n; ++k) {
    const int st = stride(k);
    if (!inside(k, 2, st) || !tau_ok(k, 2, st)) {
      ++masked;
      continue;
    }
    st_min = std::min(st_min, st);
    st_max = std::max(st_max, st);
    const double res = d4(q, k, st) + fr.tau[k] * c[k];
    ode = std::max(ode, std::abs(res));
    const double fi = c[k] * c[k] + q[k] * q[k];
    fi_min = std::min(fi_min, fi);
    fi_max = std::max(fi_max, fi);
    ++evaluated;
  }
  CriterionReport r;
  r.criterion = "sphere_ode";
  if (evaluated == 0) {
    r.mark_inapplicable("torsion within tau_min everywhere");
    r.add("ode_residual", std::numeric_limits<double>::quiet_NaN(), ode_tol, tol);
    r.add("first_integral_drift", std::numeric_limits<double>::quiet_NaN(), drift_tol, tol);
    r.finalize();
    return r;
  }
  r.add("ode_residual", ode, ode_tol, tol);
  r.add("first_integral_drift", fi_max - fi_min, drift_tol, tol);
  r.fitted.emplace_back("first_integral", 0.5 * (fi_min + fi_max));
  r.fitted.emplace_back("samples", n);
  r.fitted.emplace_back("masked_samples", masked);
  r.fitted.emplace_back("min_stencil_spacing", st_min * ds);
  r.fitted.emplace_back("max_stencil_spacing", st_max * ds);
  if (masked > 0) r.note("range restricted: " + std::to_string(masked) + " samples near |tau| <= " + detail::fmt(tau_min));
  r.finalize();
  return r;
}

// ---------------------------------------------------------------------------
// Aggregate checks over seeded closed curves

/// Seeded closed curve on a patch: sphere curves for geodesic spheres,
/// otherwise the patch must supply a curve factory.
using CurveFactory = std::function<CurvePath(std::uint64_t seed)>;

inline CurveFactory sphere_curve_factory(const GeodesicSphere& sphere, int order = 3, SphereCurveOptions opt = {},
                                         double min_speed = 0.1) {
  auto sp = std::make_shared<const GeodesicSphere>(sphere);
  return [sp, order, opt, min_speed](std::uint64_t seed) {
    return geodesic_sphere_curve(*sp, random_direction_curve(sp->chart.dim(), seed, order, min_speed), opt);
  };
}

/// Total torsion on n_curves closed curves with seeds seed, seed+1, …;
/// Frenet-degenerate curves are skipped and logged, and at least half must
/// be valid.
inline CriterionReport check_total_torsion_criterion(const CurveFactory& make_curve, int n_curves, std::uint64_t seed,
                                                     double tolerance = 1e-3, const Tolerances& tol = {}) {
  require(n_curves >= 1, ErrorKind::usage, "need at least one curve");
  CriterionReport agg;
  agg.criterion = "total_torsion";
  double maxT = 0.0;
  int valid = 0;
  for (int j = 0; j < n_curves; ++j) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(j);
    try {
      const CurvePath path = make_curve(s);
      CriterionReport r = total_torsion_report(path, tolerance, tol);
      r.curve_seed = s;
      maxT = std::max(maxT, r.value("total_torsion"));
      agg.parts.push_back(std::move(r));
      ++valid;
    } catch (const FrenetDegenerateError& e) {
      agg.note("seed " + std::to_string(s) + " skipped: " + e.what());
    }
  }
  agg.fitted.emplace_back("max_abs_T", maxT);
  agg.fitted.emplace_back("valid_curves", valid);
  if (2 * valid < n_curves) agg.mark_inapplicable("fewer than half of the curves have a valid Frenet frame");
  agg.finalize();
  return agg;
}

inline CriterionReport check_total_torsion_criterion(const HypersurfacePatch& patch, int n_curves, std::uint64_t seed,
                                                     double tolerance = 1e-3, const Tolerances& tol = {}) {
  require(patch.chart.dim() == 3, ErrorKind::usage, "total torsion criterion needs a surface in a 3-manifold");
  require(patch.kind == PatchKind::geodesic_sphere && patch.sphere, ErrorKind::usage,
          "this overload generates curves on geodesic spheres; pass a curve factory for other patches");
  return check_total_torsion_criterion(sphere_curve_factory(*patch.sphere), n_curves, seed, tolerance, tol);
}

}  // namespace rmframe
