// Acceptance run: one line per criterion, "PASS"/"FAIL", with the measured
// quantities and wall time. Exit status is non-zero if any criterion fails.

#include <rmframe/experiment.hpp>
#include <rmframe/surfaces.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <memory>
#include <sstream>

using namespace rmframe;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += " [failed: " + what + "]";
    }
  }
  void info(const std::string& s) { detail += " " + s; }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

Vec center3() { return Vec(Eigen::Vector3d(0.1, -0.05, 0.08)); }

const std::vector<std::string> kModels = {"euclidean", "sphere", "hyperbolic_ball"};

/// Seeded curves on the R = 0.5 geodesic sphere about center3(), shared by
/// the curve criteria so each curve is built once.
struct CurveSet {
  std::vector<CurvePath> paths;
  std::vector<std::vector<double>> H;
};

CurveSet& model_curves(const std::string& metric) {
  static std::map<std::string, std::unique_ptr<CurveSet>> cache;
  auto& slot = cache[metric];
  if (!slot) {
    slot = std::make_unique<CurveSet>();
    GeodesicSphere gs(catalog(metric), {center3()}, 0.5);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      slot->paths.push_back(geodesic_sphere_curve(gs, random_direction_curve(3, seed)));
      slot->H.push_back(mean_curvature_along(slot->paths.back(), stride_for(slot->paths.back())));
    }
  }
  return *slot;
}

// 1 -------------------------------------------------------------------------
Outcome umbilicity_models() {
  Outcome o;
  double worst = 0.0;
  int spheres = 0;
  for (const auto& name : kModels)
    for (int dim : {3, 4}) {
      CatalogParams p;
      p.dim = dim;
      const MetricChart chart = catalog(name, p);
      CounterRng rng(1000 + dim, name.size());
      for (int k = 0; k < 20; ++k) {
        Vec c(dim);
        for (int i = 0; i < dim; ++i) c(i) = rng.uniform(chart.sample_lo(i), chart.sample_hi(i));
        const double R = rng.uniform(0.05, 1.0) * std::min(chart.radius_bound, 1.5);
        const UmbilicityReport u = umbilicity_report(geodesic_sphere_patch(GeodesicSphere(chart, {c}, R)), 10, 7 + k);
        worst = std::max(worst, u.deviation);
        ++spheres;
      }
    }
  o.info("spheres=" + std::to_string(spheres) + " max_deviation=" + sci(worst));
  o.require(worst < 1e-4, "umbilicity deviation < 1e-4");
  return o;
}

// 2 -------------------------------------------------------------------------
Outcome shape_values() {
  Outcome o;
  const Vec p = center3();
  const Vec dir = Vec(Eigen::Vector3d(0.48, 0.6, 0.64));
  for (const auto& [name, expect] : {std::pair<std::string, double>{"sphere", 1.0 / std::tan(0.5)},
                                     std::pair<std::string, double>{"hyperbolic_ball", 1.0 / std::tanh(0.5)}}) {
    const MetricChart chart = catalog(name);
    const Vec V = orthonormal_frame(chart, p) * dir;
    const ShapeSpectrum s = geodesic_sphere_spectra(chart, p, V, {0.5})[0];
    double err = 0.0;
    for (double l : s.lambda) err = std::max(err, std::abs(std::abs(l) - expect));
    o.info(name + " |lambda|=" + detail::num(std::abs(s.lambda[0])) + " err=" + sci(err));
    o.require(err < 1e-4, name + " |lambda| within 1e-4");
  }
  return o;
}

// 3 -------------------------------------------------------------------------
Outcome linear_rm() {
  Outcome o;
  double cmax = 0.0, lmax = 0.0, nmax = 0.0;
  for (const auto& name : kModels) {
    CurveSet& cs = model_curves(name);
    for (std::size_t j = 0; j < cs.paths.size(); ++j) {
      const FitResult f = fit_linear_rm_criterion(cs.paths[j], rm_frame(cs.paths[j]), cs.H[j]);
      cmax = std::max(cmax, f.constancy_dev);
      lmax = std::max(lmax, f.linear_residual);
      nmax = std::max(nmax, f.normal_decomposition);
    }
  }
  o.info("models: constancy=" + sci(cmax) + " linear=" + sci(lmax) + " sum_a2=" + sci(nmax));
  o.require(cmax < 1e-4 && lmax < 1e-4, "model constancy_dev and linear_residual < 1e-4");
  o.require(nmax < 1e-5, "sum a_i^2 = 1 within 1e-5");
  GeodesicSphere gs(catalog("conformal_perturbed"), {center3()}, 0.5);
  int flagged = 0;
  double cmin = std::numeric_limits<double>::infinity();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const CurvePath path = geodesic_sphere_curve(gs, random_direction_curve(3, seed));
    const FitResult f = fit_linear_rm_criterion(path, rm_frame(path), mean_curvature_along(path, stride_for(path)));
    flagged += f.constancy_dev > 1e-2;
    cmin = std::min(cmin, f.constancy_dev);
  }
  o.info("control: flagged=" + std::to_string(flagged) + "/10 min_constancy=" + sci(cmin));
  o.require(flagged >= 8, "control constancy_dev > 1e-2 on >= 8/10 curves");
  return o;
}

// 4 -------------------------------------------------------------------------
Outcome sectional() {
  Outcome o;
  auto config = [](CounterRng& rng, const MetricChart& chart, const Vec& p) {
    Vec a(3), b(3);
    for (int i = 0; i < 3; ++i) {
      a(i) = rng.normal();
      b(i) = rng.normal();
    }
    const Mat E = orthonormal_frame(chart, p);
    return std::pair<Vec, Vec>{E * a.normalized(), E * b.normalized()};
  };
  const std::map<std::string, double> K = {{"euclidean", 0.0}, {"sphere", 1.0}, {"hyperbolic_ball", -1.0}};
  for (const auto& name : kModels) {
    const MetricChart chart = catalog(name);
    CounterRng rng(44, 0);
    double err = 0.0;
    for (int k = 0; k < 5; ++k) {
      Vec p(3);
      for (int i = 0; i < 3; ++i) p(i) = rng.uniform(chart.sample_lo(i), chart.sample_hi(i));
      auto [V, X] = config(rng, chart, p);
      err = std::max(err, std::abs(sectional_estimate_from_spheres(chart, {p}, {{p}, V}, {{p}, X}, 0.3, 0.01) - K.at(name)));
    }
    o.info(name + "=" + sci(err));
    o.require(err < 5e-3, name + " estimate within 5e-3");
  }
  const MetricChart chart = catalog("conformal_perturbed");
  CounterRng rng(45, 0);
  double err = 0.0;
  for (int k = 0; k < 10; ++k) {
    Vec p(3);
    for (int i = 0; i < 3; ++i) p(i) = rng.uniform(-1.0, 1.0);
    auto [V, X] = config(rng, chart, p);
    const SectionalEstimate e = sectional_estimate_detail(chart, {p}, {{p}, V}, {{p}, X}, 0.3, 0.01);
    err = std::max(err, std::abs(e.estimate - e.tensor_value));
  }
  o.info("conformal_vs_tensor=" + sci(err));
  o.require(err < 1e-2, "conformal estimate within 1e-2 of the curvature tensor");
  return o;
}

// 5 -------------------------------------------------------------------------
Outcome inequality() {
  Outcome o;
  double min_margin = std::numeric_limits<double>::infinity(), mismatch = 0.0;
  for (const auto& name : kModels) {
    CurveSet& cs = model_curves(name);
    for (std::size_t j = 0; j < cs.paths.size(); ++j) {
      const CriterionReport r = check_curvature_inequality(cs.paths[j], cs.H[j]);
      min_margin = std::min(min_margin, r.fitted[0].second);
      mismatch = std::max(mismatch, r.value("equality_mismatch"));
    }
    // A great circle of the sphere direction set has κ_g ≡ 0: equality throughout.
    GeodesicSphere gs(catalog(name), {center3()}, 0.5);
    const CurvePath gc = geodesic_sphere_curve(gs, great_circle_direction(3, 0, 1, 0.3));
    const CriterionReport r = check_curvature_inequality(gc, mean_curvature_along(gc));
    const double eq = r.fitted[1].second;
    mismatch = std::max(mismatch, r.value("equality_mismatch"));
    o.require(eq == gc.size(), name + " great circle attains equality at every sample");
  }
  o.info("min_margin=" + sci(min_margin) + " equality_mismatch=" + sci(mismatch));
  o.require(min_margin >= -1e-5, "model min margin >= -1e-5");
  o.require(mismatch == 0.0, "equality samples coincide with |kappa_g| < 1e-4");
  const Ellipsoid e;
  const CurvePath mer = ellipsoid_meridian(e);
  const double ctrl = check_curvature_inequality(mer, mean_curvature_along(mer)).fitted[0].second;
  o.info("ellipsoid_margin=" + sci(ctrl));
  o.require(ctrl < -1e-2, "ellipsoid control min margin < -1e-2");
  return o;
}

// 6 -------------------------------------------------------------------------
Outcome total_torsion_check() {
  Outcome o;
  double T = 0.0, tg = 0.0, wind = 0.0;
  for (const auto& name : kModels)
    for (const auto& path : model_curves(name).paths) {
      const CriterionReport r = total_torsion_report(path);
      T = std::max(T, r.value("total_torsion"));
      tg = std::max(tg, r.value("geodesic_torsion_integral"));
      wind = std::max(wind, r.value("winding_defect"));
    }
  o.info("max|T|=" + sci(T) + " max|int tau_g|=" + sci(tg) + " winding_defect=" + sci(wind));
  o.require(T < 1e-3 && tg < 1e-3 && wind < 1e-3, "model |T|, |int tau_g|, winding defect < 1e-3");
  const CriterionReport ctrl = check_total_torsion_criterion(ellipsoid_curve_factory(Ellipsoid{}), 10, 1);
  double cmax = 0.0;
  for (const auto& [k, v] : ctrl.fitted)
    if (k == "max_abs_T") cmax = v;
  o.info("ellipsoid max|T|=" + sci(cmax));
  o.require(cmax > 1e-2, "ellipsoid control max|T| > 1e-2");
  return o;
}

// 7 -------------------------------------------------------------------------
Outcome sphere_ode() {
  Outcome o;
  for (const auto& [name, lambda] : {std::pair<std::string, double>{"sphere", 1.0 / std::tan(0.5)},
                                     std::pair<std::string, double>{"euclidean", 2.0}}) {
    GeodesicSphere gs(catalog(name), {center3()}, 0.5);
    double res = 0.0, drift = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const CurvePath path = geodesic_sphere_curve(gs, random_direction_curve(3, seed, 2, 0.3));
      const CriterionReport r = check_sphere_ode(path, lambda, 4000.0);
      res = std::max(res, r.value("ode_residual"));
      drift = std::max(drift, r.value("first_integral_drift"));
    }
    o.info(name + ": residual=" + sci(res) + " drift=" + sci(drift));
    o.require(res < 1e-3, name + " ODE residual < 1e-3");
    o.require(drift < 1e-4, name + " first-integral drift < 1e-4");
  }
  return o;
}

// 8 -------------------------------------------------------------------------
Outcome semi_riemannian() {
  Outcome o;
  // Closed form against integrated geodesics on S_1^3(1).
  CatalogParams ps;
  ps.nu = 1;
  const MetricChart s13 = catalog("pseudo_sphere", ps);
  const Embedding& emb = *s13.embedding;
  double gerr = 0.0;
  CounterRng rng(8, 0);
  for (int k = 0; k < 6; ++k) {
    Vec y(3);
    for (int i = 0; i < 3; ++i) y(i) = rng.uniform(-0.15, 0.15);
    const Mat g = s13.metric(y);
    // Orthonormal frame of the chart metric; column 0 timelike.
    const Mat E = orthonormal_frame(s13, y);
    int t_col = 0;
    for (int c = 0; c < 3; ++c)
      if (inner_raw(g, E.col(c), E.col(c)) < 0) t_col = c;
    const int s_col = (t_col + 1) % 3;
    for (bool timelike : {false, true}) {
      const Vec V = timelike ? Vec(std::cosh(0.3) * E.col(t_col) + std::sinh(0.3) * E.col(s_col))
                             : Vec(std::cosh(0.3) * E.col(s_col) + std::sinh(0.3) * E.col(t_col));
      const double u = 0.4;
      const Point q = exp_map(s13, {y}, {{y}, V}, u, 1e-12);
      const Vec closed = pseudosphere_geodesic_closed_form(emb.point(y), emb.jacobian(y) * V, u, 1.0,
                                                           timelike ? Causal::timelike : Causal::spacelike,
                                                           emb.ambient_signs);
      gerr = std::max(gerr, (emb.point(q.coords) - closed).norm());
    }
  }
  o.info("S_1^3 geodesic gap=" + sci(gerr));
  o.require(gerr < 1e-6, "closed-form and integrated geodesics agree within 1e-6");

  // Hyperquadrics of E_1^3 as geodesic spheres about the origin.
  CatalogParams pe;
  pe.nu = 1;
  GeodesicSphere gs(catalog("semi_euclidean", pe), {Vec::Zero(3)}, 0.7);
  double lin = 0.0, deficit = 0.0, mism = 0.0, causal = 0.0;
  bool signs_constant = true;
  for (const std::string normal : {"timelike", "spacelike"})
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const DirectionCurve d =
          normal == "timelike" ? random_timelike_direction_curve(seed) : random_spacelike_direction_curve(seed);
      const CurvePath path = geodesic_sphere_curve(gs, d);
      const std::vector<double> H = mean_curvature_along(path, stride_for(path));
      const MovingFrame rm = rm_frame(path);
      const FitResult f = fit_linear_rm_criterion(path, rm, H);
      lin = std::max({lin, f.linear_residual, f.constancy_dev});
      const CriterionReport iq = check_semi_inequality(path, H);
      deficit = std::max(deficit, iq.value("branch_deficit"));
      mism = std::max(mism, iq.value("equality_mismatch"));
      causal = std::max(causal, iq.value("causal_constancy"));
      // ε of t, ε_i of the normals and η of ξ must not change along the curve.
      const auto K = kinematics_along(path, false);
      for (std::size_t k = 0; k < K.size(); ++k) {
        signs_constant = signs_constant && K[k].eps == rm.eps;
        for (int i = 0; i < rm.normal_count(); ++i) {
          const Vec& n = rm.normals[k][i];
          signs_constant = signs_constant && (inner_raw(K[k].g, n, n) < 0 ? -1 : 1) == rm.eps_i[i];
        }
        const Vec xi = path.source->normal(path.samples[k].param).xi;
        signs_constant = signs_constant && (inner_raw(K[k].g, xi, xi) < 0 ? -1 : 1) == f.eta;
      }
    }
  o.info("semi_linear=" + sci(lin) + " branch_deficit=" + sci(deficit) + " mismatch=" + sci(mism));
  o.require(lin < 1e-4, "hyperquadric semi_linear residual < 1e-4");
  o.require(deficit <= 1e-5, "branch margins >= -1e-5");
  o.require(mism == 0.0, "equality only where kappa_g vanishes");
  o.require(causal == 0.0 && signs_constant, "eps, eps_i, eta constant along every curve");
  return o;
}

// 9 -------------------------------------------------------------------------
Outcome hygiene() {
  Outcome o;
  const double tol = 1e-10;
  double worst_ratio = 0.0;
  for (const auto& name : {"euclidean", "sphere", "hyperbolic_ball", "conformal_perturbed"}) {
    const MetricChart chart = catalog(name);
    CounterRng rng(9, 0);
    for (int k = 0; k < 5; ++k) {
      Vec p(3), a(3);
      for (int i = 0; i < 3; ++i) {
        p(i) = rng.uniform(chart.sample_lo(i), chart.sample_hi(i));
        a(i) = rng.normal();
      }
      const Vec V = orthonormal_frame(chart, p) * a.normalized();
      const CurvePath geo = integrate_geodesic(chart, {p}, {{p}, V}, 0.8, tol);
      worst_ratio = std::max(worst_ratio, energy_drift(geo) / tol);
    }
  }
  o.info("energy_drift/tol=" + sci(worst_ratio));
  o.require(worst_ratio < 10.0, "geodesics conserve <b',b'> within 10x integrator tol");
  double ortho = 0.0, split = 0.0;
  for (const auto& name : kModels)
    for (const auto& path : model_curves(name).paths) {
      const MovingFrame rm = rm_frame(path);
      ortho = std::max(ortho, rm.orthonormality_defect / path.length);
      const FrenetData fr = frenet_frame(path);
      for (int k = 0; k < rm.count(); ++k) {
        const double k1 = rm.kappa[k][0], k2 = rm.kappa[k][1];
        split = std::max(split, std::abs(fr.kappa[k] * fr.kappa[k] - k1 * k1 - k2 * k2));
      }
    }
  o.info("orthonormality/length=" + sci(ortho) + " kappa_split=" + sci(split));
  o.require(ortho < 1e-6, "frame orthonormality drift < 1e-6 per unit length");
  o.require(split < 1e-6, "kappa^2 = kappa_1^2 + kappa_2^2 within 1e-6");
  return o;
}

// 10 ------------------------------------------------------------------------
Outcome determinism() {
  Outcome o;
  const SuiteConfig c = parse_config_or_throw(
      "suite.id = determinism\nseed = 2024\nmetric.name = sphere\nsphere.random_centers = 2\nsphere.radii = 0.4\n"
      "curves.count = 2\ncriteria = umbilicity, linear_rm, total_torsion, sectional_estimate\n");
  setenv("RMFRAME_THREADS", "1", 1);
  const std::string a = to_csv(run_suite(c));
  setenv("RMFRAME_THREADS", "3", 1);
  const std::string b = to_csv(run_suite(c));
  unsetenv("RMFRAME_THREADS");
  o.info("csv_bytes=" + std::to_string(a.size()));
  o.require(a == b, "byte-identical CSV across runs (1 and 3 threads)");
  o.require(a.size() > std::string(kCsvHeader).size() + 1, "CSV has data rows");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, Outcome (*)()>> criteria = {
      {"1 model-space umbilicity", umbilicity_models},
      {"2 shape values", shape_values},
      {"3 linear RM criterion", linear_rm},
      {"4 sectional estimator", sectional},
      {"5 curvature inequality", inequality},
      {"6 total torsion", total_torsion_check},
      {"7 sphere ODE", sphere_ode},
      {"8 semi-Riemannian", semi_riemannian},
      {"9 numerical hygiene", hygiene},
      {"10 determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail += std::string(" [exception: ") + e.what() + "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= 60.0) {
      o.pass = false;
      o.detail += " [failed: took longer than 60 s]";
    }
    failed += !o.pass;
    std::printf("%s criterion %s (%.1f s):%s\n", o.pass ? "PASS" : "FAIL", name.c_str(), secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
