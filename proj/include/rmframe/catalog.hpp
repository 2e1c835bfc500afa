#pragma once

// Model spaces and perturbed controls, each realized as a MetricChart with
// analytic metric partials.

#include <rmframe/manifold.hpp>

#include <algorithm>
#include <map>
#include <sstream>

namespace rmframe {

struct CatalogParams {
  int dim = 3;
  double r = 1.0;
  int nu = 0;
  double amplitude = 0.1;
  double frequency = 3.0;
  std::string coords = "stereographic";  // sphere only: stereographic | polar
  std::optional<double> radius_bound;    // overrides the published bound
};

namespace detail {

inline Mat flat_signs(int dim, int nu) {
  Mat e = Mat::Identity(dim, dim);
  for (int i = 0; i < nu; ++i) e(i, i) = -1.0;
  return e;
}

// g = λ(x)² η for a conformal factor with analytic gradient.
inline MetricChart conformal_chart(int dim, int nu, std::function<double(const Vec&)> lambda,
                                   std::function<Vec(const Vec&)> grad, DomainFn domain,
                                   std::string label) {
  const Mat eta = flat_signs(dim, nu);
  auto metric = [lambda, eta](const Vec& x) -> Mat {
    const double l = lambda(x);
    return (l * l) * eta;
  };
  auto partials = [lambda, grad, eta, dim](const Vec& x) {
    const double l = lambda(x);
    const Vec gl = grad(x);
    std::vector<Mat> dg(dim);
    for (int k = 0; k < dim; ++k) dg[k] = (2.0 * l * gl(k)) * eta;
    return dg;
  };
  MetricChart chart(dim, nu, metric, partials, std::move(domain), std::move(label));
  // With f = log λ: Γ^k_ij = δ^k_i ∂_j f + δ^k_j ∂_i f − η_ij η^kk ∂_k f.
  chart.connection = [lambda, grad, eta, dim](const Vec& x) {
    const Vec df = grad(x) / lambda(x);
    Christoffel G = Christoffel::zero(dim);
    for (int k = 0; k < dim; ++k) {
      Mat& m = G.k[k];
      m.row(k) += df.transpose();
      m.col(k) += df;
      m.diagonal() -= (eta(k, k) * df(k)) * eta.diagonal();
    }
    return G;
  };
  return chart;
}

/// Quadric {Σ ε_a x_a² = c} in pseudo-Euclidean space, charted as a graph over
/// all ambient coordinates except one (sign eps_graph, position graph_at).
inline MetricChart hyperquadric_graph_chart(int dim, const Vec& eps, double eps_graph, double c,
                                            int graph_at, double r, std::string label) {
  auto w_of = [eps, eps_graph, c](const Vec& y) {
    double q = 0.0;
    for (Eigen::Index a = 0; a < y.size(); ++a) q += eps(a) * y(a) * y(a);
    return eps_graph * (c - q);
  };
  auto metric = [w_of, eps, eps_graph, dim](const Vec& y) -> Mat {
    const double w = w_of(y);
    Mat g(dim, dim);
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b)
        g(a, b) = (a == b ? eps(a) : 0.0) + eps_graph * eps(a) * eps(b) * y(a) * y(b) / w;
    return g;
  };
  auto partials = [w_of, eps, eps_graph, dim](const Vec& y) {
    const double w = w_of(y);
    std::vector<Mat> dg(dim, Mat::Zero(dim, dim));
    for (int cc = 0; cc < dim; ++cc)
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) {
          const double lin = ((a == cc ? y(b) : 0.0) + (b == cc ? y(a) : 0.0)) / w;
          const double quad = 2.0 * eps_graph * eps(cc) * y(a) * y(b) * y(cc) / (w * w);
          dg[cc](a, b) = eps_graph * eps(a) * eps(b) * (lin + quad);
        }
    return dg;
  };
  auto domain = [w_of, r](const Vec& y) { return w_of(y) > 1e-4 * r * r && y.norm() < 4.0 * r; };
  MetricChart chart(dim, 0, metric, partials, domain, std::move(label));

  Vec signs(dim + 1);
  for (int a = 0, j = 0; a <= dim; ++a) signs(a) = (a == graph_at) ? eps_graph : eps(j++);
  Embedding emb;
  emb.ambient_signs = signs;
  emb.point = [w_of, graph_at, dim](const Vec& y) {
    Vec x(dim + 1);
    for (int a = 0, j = 0; a <= dim; ++a) x(a) = (a == graph_at) ? std::sqrt(w_of(y)) : y(j++);
    return x;
  };
  emb.jacobian = [w_of, eps, eps_graph, graph_at, dim](const Vec& y) {
    const double xk = std::sqrt(w_of(y));
    Mat J = Mat::Zero(dim + 1, dim);
    for (int a = 0, j = 0; a <= dim; ++a) {
      if (a == graph_at) {
        for (int b = 0; b < dim; ++b) J(a, b) = -eps_graph * eps(b) * y(b) / xk;
      } else {
        J(a, j) = 1.0;
        ++j;
      }
    }
    return J;
  };
  emb.chart_of = [graph_at, dim](const Vec& x) {
    Vec y(dim);
    for (int a = 0, j = 0; a <= dim; ++a)
      if (a != graph_at) y(j++) = x(a);
    return y;
  };
  chart.embedding = emb;
  return chart;
}

inline double ambient_inner(const Vec& signs, const Vec& a, const Vec& b) {
  return (signs.array() * a.array() * b.array()).sum();
}

}  // namespace detail

inline MetricChart make_euclidean(int dim) {
  auto metric = [dim](const Vec&) -> Mat { return Mat::Identity(dim, dim); };
  auto partials = [dim](const Vec&) { return std::vector<Mat>(dim, Mat::Zero(dim, dim)); };
  MetricChart c(dim, 0, metric, partials, nullptr, "euclidean(dim=" + std::to_string(dim) + ")");
  c.radius_bound = 10.0;
  c.constant_curvature = 0.0;
  c.connection = [dim](const Vec&) { return Christoffel::zero(dim); };
  c.distance = [](const Vec& a, const Vec& b) { return (a - b).norm(); };
  c.sample_lo = Vec::Constant(dim, -1.0);
  c.sample_hi = Vec::Constant(dim, 1.0);
  Embedding emb;
  emb.ambient_signs = Vec::Ones(dim);
  emb.point = [](const Vec& x) { return x; };
  emb.jacobian = [dim](const Vec&) -> Mat { return Mat::Identity(dim, dim); };
  emb.chart_of = [](const Vec& x) { return x; };
  c.embedding = emb;
  return c;
}

inline MetricChart make_semi_euclidean(int dim, int nu) {
  require(nu >= 0 && nu <= dim, ErrorKind::usage, "semi_euclidean: nu out of range");
  const Mat eta = detail::flat_signs(dim, nu);
  auto metric = [eta](const Vec&) -> Mat { return eta; };
  auto partials = [dim](const Vec&) { return std::vector<Mat>(dim, Mat::Zero(dim, dim)); };
  MetricChart c(dim, nu, metric, partials, nullptr,
                "semi_euclidean(dim=" + std::to_string(dim) + ",nu=" + std::to_string(nu) + ")");
  c.radius_bound = 10.0;
  c.constant_curvature = 0.0;
  c.connection = [dim](const Vec&) { return Christoffel::zero(dim); };
  Vec signs = eta.diagonal();
  c.distance = [signs](const Vec& a, const Vec& b) {
    return std::sqrt(std::abs(detail::ambient_inner(signs, a - b, a - b)));
  };
  c.sample_lo = Vec::Constant(dim, -1.0);
  c.sample_hi = Vec::Constant(dim, 1.0);
  Embedding emb;
  emb.ambient_signs = signs;
  emb.point = [](const Vec& x) { return x; };
  emb.jacobian = [dim](const Vec&) -> Mat { return Mat::Identity(dim, dim); };
  emb.chart_of = [](const Vec& x) { return x; };
  c.embedding = emb;
  return c;
}

/// Round sphere S^dim(r) in stereographic coordinates centred on the pole
/// opposite the projection point.
inline MetricChart make_sphere_stereographic(int dim, double r) {
  const double r2 = r * r;
  auto lambda = [r2](const Vec& x) { return 2.0 * r2 / (r2 + x.squaredNorm()); };
  auto grad = [r2, lambda](const Vec& x) -> Vec {
    const double l = lambda(x);
    return (-l * l / r2) * x;
  };
  auto domain = [r](const Vec& x) { return x.norm() < 20.0 * r; };
  MetricChart c = detail::conformal_chart(dim, 0, lambda, grad, domain,
                                          "sphere(dim=" + std::to_string(dim) + ",r=" + std::to_string(r) + ")");
  Embedding emb;
  emb.ambient_signs = Vec::Ones(dim + 1);
  emb.point = [r, r2, dim](const Vec& x) {
    const double q = x.squaredNorm();
    Vec X(dim + 1);
    X.head(dim) = (2.0 * r2 / (r2 + q)) * x;
    X(dim) = r * (r2 - q) / (r2 + q);
    return X;
  };
  emb.jacobian = [r, r2, dim](const Vec& x) {
    const double q = x.squaredNorm(), d = r2 + q;
    Mat J(dim + 1, dim);
    J.topRows(dim) = (2.0 * r2 / d) * Mat::Identity(dim, dim) - (4.0 * r2 / (d * d)) * x * x.transpose();
    J.row(dim) = (-4.0 * r * r2 / (d * d)) * x.transpose();
    return J;
  };
  emb.chart_of = [r, dim](const Vec& X) -> Vec { return (r / (r + X(dim))) * X.head(dim); };
  c.embedding = emb;
  auto point = emb.point;
  c.distance = [point, r](const Vec& a, const Vec& b) {
    const double chord = (point(a) - point(b)).norm();
    return 2.0 * r * std::asin(std::min(1.0, chord / (2.0 * r)));
  };
  c.radius_bound = 0.45 * kPi * r;
  c.constant_curvature = 1.0 / (r * r);
  c.sample_lo = Vec::Constant(dim, -0.3 * r);
  c.sample_hi = Vec::Constant(dim, 0.3 * r);
  return c;
}

/// Round sphere in hyperspherical coordinates (θ_1, …, θ_{dim-1}, φ):
/// g = r² diag(1, sin²θ_1, sin²θ_1 sin²θ_2, …).
inline MetricChart make_sphere_polar(int dim, double r) {
  const double r2 = r * r;
  auto diag = [dim, r2](const Vec& x) {
    Vec d(dim);
    double prod = r2;
    for (int i = 0; i < dim; ++i) {
      d(i) = prod;
      if (i < dim - 1) prod *= std::sin(x(i)) * std::sin(x(i));
    }
    return d;
  };
  auto metric = [diag](const Vec& x) -> Mat { return diag(x).asDiagonal(); };
  auto partials = [diag, dim](const Vec& x) {
    const Vec d = diag(x);
    std::vector<Mat> dg(dim, Mat::Zero(dim, dim));
    for (int j = 0; j < dim - 1; ++j) {
      const double cot2 = 2.0 * std::cos(x(j)) / std::sin(x(j));
      for (int i = j + 1; i < dim; ++i) dg[j](i, i) = d(i) * cot2;
    }
    return dg;
  };
  auto domain = [dim](const Vec& x) {
    for (int j = 0; j < dim - 1; ++j)
      if (x(j) < 0.05 || x(j) > kPi - 0.05) return false;
    return true;
  };
  MetricChart c(dim, 0, metric, partials, domain,
                "sphere_polar(dim=" + std::to_string(dim) + ",r=" + std::to_string(r) + ")");
  Embedding emb;
  emb.ambient_signs = Vec::Ones(dim + 1);
  emb.point = [r, dim](const Vec& x) {
    Vec X(dim + 1);
    double prod = r;
    for (int i = 0; i < dim - 1; ++i) {
      X(i) = prod * std::cos(x(i));
      prod *= std::sin(x(i));
    }
    X(dim - 1) = prod * std::cos(x(dim - 1));
    X(dim) = prod * std::sin(x(dim - 1));
    return X;
  };
  emb.jacobian = [point = emb.point, dim](const Vec& x) {
    Mat J(dim + 1, dim);
    Vec xp = x, xm = x;
    for (int k = 0; k < dim; ++k) {
      const double h = 1e-6;
      xp(k) = x(k) + h;
      xm(k) = x(k) - h;
      J.col(k) = (point(xp) - point(xm)) / (2 * h);
      xp(k) = xm(k) = x(k);
    }
    return J;
  };
  emb.chart_of = [dim](const Vec& X) {
    Vec x(dim);
    for (int i = 0; i < dim - 1; ++i) x(i) = std::atan2(X.tail(dim - i).norm(), X(i));
    x(dim - 1) = std::atan2(X(dim), X(dim - 1));
    return x;
  };
  c.embedding = emb;
  auto point = emb.point;
  c.distance = [point, r](const Vec& a, const Vec& b) {
    const double chord = (point(a) - point(b)).norm();
    return 2.0 * r * std::asin(std::min(1.0, chord / (2.0 * r)));
  };
  c.radius_bound = 0.45 * kPi * r;
  c.constant_curvature = 1.0 / r2;
  c.sample_lo = Vec::Constant(dim, kPi / 2 - 0.3);
  c.sample_hi = Vec::Constant(dim, kPi / 2 + 0.3);
  return c;
}

/// Hyperbolic space H^dim(r) in the Poincaré ball of radius r.
inline MetricChart make_hyperbolic_ball(int dim, double r) {
  const double r2 = r * r;
  auto lambda = [r2](const Vec& x) { return 2.0 * r2 / (r2 - x.squaredNorm()); };
  auto grad = [r2, lambda](const Vec& x) -> Vec {
    const double l = lambda(x);
    return (l * l / r2) * x;
  };
  auto domain = [r](const Vec& x) { return x.norm() < 0.95 * r; };
  MetricChart c = detail::conformal_chart(
      dim, 0, lambda, grad, domain,
      "hyperbolic_ball(dim=" + std::to_string(dim) + ",r=" + std::to_string(r) + ")");
  c.distance = [r, r2](const Vec& a, const Vec& b) {
    const double den = std::sqrt((r2 - a.squaredNorm()) * (r2 - b.squaredNorm()));
    return 2.0 * r * std::asinh(r * (a - b).norm() / den);
  };
  Embedding emb;
  emb.ambient_signs = Vec::Ones(dim + 1);
  emb.ambient_signs(0) = -1.0;
  emb.point = [r, r2, dim](const Vec& x) {
    const double q = x.squaredNorm();
    Vec X(dim + 1);
    X(0) = r * (r2 + q) / (r2 - q);
    X.tail(dim) = (2.0 * r2 / (r2 - q)) * x;
    return X;
  };
  emb.jacobian = [r, r2, dim](const Vec& x) {
    const double q = x.squaredNorm(), d = r2 - q;
    Mat J(dim + 1, dim);
    J.row(0) = (4.0 * r * r2 / (d * d)) * x.transpose();
    J.bottomRows(dim) = (2.0 * r2 / d) * Mat::Identity(dim, dim) + (4.0 * r2 / (d * d)) * x * x.transpose();
    return J;
  };
  emb.chart_of = [r, dim](const Vec& X) -> Vec { return (r / (r + X(0))) * X.tail(dim); };
  c.embedding = emb;
  c.radius_bound = 1.5 * r;
  c.constant_curvature = -1.0 / r2;
  c.sample_lo = Vec::Constant(dim, -0.3 * r);
  c.sample_hi = Vec::Constant(dim, 0.3 * r);
  return c;
}

/// S_ν^dim(r) = {⟨x,x⟩_ν = r²} ⊂ E_ν^{dim+1}, a graph over the first dim
/// ambient coordinates.
inline MetricChart make_pseudo_sphere(int dim, int nu, double r) {
  require(nu >= 0 && nu <= dim, ErrorKind::usage, "pseudo_sphere: nu out of range");
  Vec eps = Vec::Ones(dim);
  for (int i = 0; i < nu; ++i) eps(i) = -1.0;
  MetricChart base = detail::hyperquadric_graph_chart(
      dim, eps, 1.0, r * r, dim, r,
      "pseudo_sphere(dim=" + std::to_string(dim) + ",nu=" + std::to_string(nu) + ",r=" + std::to_string(r) + ")");
  MetricChart c(dim, nu, [base](const Vec& y) { return base.metric(y); },
                [base](const Vec& y) { return base.metric_partials(y); },
                [base](const Vec& y) { return base.in_domain(y); }, base.label());
  c.embedding = base.embedding;
  const Vec signs = base.embedding->ambient_signs;
  auto point = base.embedding->point;
  c.distance = [point, signs, r](const Vec& a, const Vec& b) {
    const double cc = detail::ambient_inner(signs, point(a), point(b)) / (r * r);
    return cc <= 1.0 ? r * std::acos(std::max(-1.0, cc)) : r * std::acosh(cc);
  };
  c.radius_bound = 0.45 * kPi * r;
  c.constant_curvature = 1.0 / (r * r);
  c.sample_lo = Vec::Constant(dim, -0.2 * r);
  c.sample_hi = Vec::Constant(dim, 0.2 * r);
  return c;
}

/// H_ν^dim(r) = {⟨x,x⟩_{ν+1} = −r²} ⊂ E_{ν+1}^{dim+1}, a graph over all
/// ambient coordinates except the first (timelike) one.
inline MetricChart make_pseudo_hyperbolic(int dim, int nu, double r) {
  require(nu >= 0 && nu < dim, ErrorKind::usage, "pseudo_hyperbolic: nu out of range");
  Vec eps = Vec::Ones(dim);
  for (int i = 0; i < nu; ++i) eps(i) = -1.0;
  MetricChart base = detail::hyperquadric_graph_chart(
      dim, eps, -1.0, -r * r, 0, r,
      "pseudo_hyperbolic(dim=" + std::to_string(dim) + ",nu=" + std::to_string(nu) + ",r=" + std::to_string(r) + ")");
  MetricChart c(dim, nu, [base](const Vec& y) { return base.metric(y); },
                [base](const Vec& y) { return base.metric_partials(y); },
                [base](const Vec& y) { return base.in_domain(y); }, base.label());
  c.embedding = base.embedding;
  const Vec signs = base.embedding->ambient_signs;
  auto point = base.embedding->point;
  c.distance = [point, signs, r](const Vec& a, const Vec& b) {
    const double cc = -detail::ambient_inner(signs, point(a), point(b)) / (r * r);
    return cc >= 1.0 ? r * std::acosh(cc) : r * std::acos(std::max(-1.0, cc));
  };
  c.radius_bound = 1.5 * r;
  c.constant_curvature = -1.0 / (r * r);
  c.sample_lo = Vec::Constant(dim, -0.2 * r);
  c.sample_hi = Vec::Constant(dim, 0.2 * r);
  return c;
}

/// g = (1 + A·Π_k sin(ω x_k))² δ on the box [−3, 3]^dim.
inline MetricChart make_conformal_perturbed(int dim, double amplitude, double frequency) {
  require(amplitude >= 0.0 && amplitude < 0.5, ErrorKind::usage,
          "conformal_perturbed: amplitude must lie in [0, 0.5)");
  const double A = amplitude, w = frequency;
  auto lambda = [A, w](const Vec& x) {
    double p = 1.0;
    for (Eigen::Index k = 0; k < x.size(); ++k) p *= std::sin(w * x(k));
    return 1.0 + A * p;
  };
  auto grad = [A, w, dim](const Vec& x) -> Vec {
    Vec gr(dim);
    for (int k = 0; k < dim; ++k) {
      double p = A * w * std::cos(w * x(k));
      for (int j = 0; j < dim; ++j)
        if (j != k) p *= std::sin(w * x(j));
      gr(k) = p;
    }
    return gr;
  };
  auto domain = [](const Vec& x) { return x.cwiseAbs().maxCoeff() < 3.0; };
  std::ostringstream label;
  label << "conformal_perturbed(dim=" << dim << ",A=" << A << ",omega=" << w << ")";
  MetricChart c = detail::conformal_chart(dim, 0, lambda, grad, domain, label.str());
  if (A == 0.0) {
    c.constant_curvature = 0.0;
    c.distance = [](const Vec& a, const Vec& b) { return (a - b).norm(); };
  }
  c.radius_bound = 0.6;
  c.sample_lo = Vec::Constant(dim, -1.0);
  c.sample_hi = Vec::Constant(dim, 1.0);
  return c;
}

struct CatalogEntry {
  std::string name;
  std::string params;
  std::string bound;
};

inline std::vector<CatalogEntry> catalog_entries() {
  std::vector<CatalogEntry> e = {
      {"conformal_perturbed", "dim, amplitude A in [0,0.5), frequency omega", "0.6"},
      {"euclidean", "dim", "10"},
      {"hyperbolic_ball", "dim, r", "1.5*r"},
      {"pseudo_hyperbolic", "dim, nu in [0,dim), r", "1.5*r"},
      {"pseudo_sphere", "dim, nu in [0,dim], r", "0.45*pi*r"},
      {"semi_euclidean", "dim, nu in [0,dim]", "10"},
      {"sphere", "dim, r, coords (stereographic|polar)", "0.45*pi*r"},
  };
  std::sort(e.begin(), e.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return e;
}

inline std::string list_catalog() {
  std::ostringstream os;
  os << "name\tparameters\tradius_bound\n";
  for (const auto& e : catalog_entries()) os << e.name << '\t' << e.params << '\t' << e.bound << '\n';
  return os.str();
}

inline MetricChart catalog(const std::string& name, const CatalogParams& p = {}) {
  require(p.dim >= 2, ErrorKind::usage, "catalog: dim must be at least 2");
  require(p.r > 0.0, ErrorKind::usage, "catalog: radius r must be positive");
  std::optional<MetricChart> c;
  if (name == "euclidean") {
    c = make_euclidean(p.dim);
  } else if (name == "sphere") {
    if (p.coords == "stereographic")
      c = make_sphere_stereographic(p.dim, p.r);
    else if (p.coords == "polar")
      c = make_sphere_polar(p.dim, p.r);
    else
      throw Error(ErrorKind::usage, "catalog: unknown sphere coordinates '" + p.coords + "'");
  } else if (name == "hyperbolic_ball") {
    c = make_hyperbolic_ball(p.dim, p.r);
  } else if (name == "semi_euclidean") {
    c = make_semi_euclidean(p.dim, p.nu);
  } else if (name == "pseudo_sphere") {
    c = make_pseudo_sphere(p.dim, p.nu, p.r);
  } else if (name == "pseudo_hyperbolic") {
    c = make_pseudo_hyperbolic(p.dim, p.nu, p.r);
  } else if (name == "conformal_perturbed") {
    c = make_conformal_perturbed(p.dim, p.amplitude, p.frequency);
  } else {
    throw Error(ErrorKind::usage, "catalog: unknown metric '" + name + "'");
  }
  if (p.radius_bound) c->radius_bound = *p.radius_bound;
  return *c;
}

}  // namespace rmframe
