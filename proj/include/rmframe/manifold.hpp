#pragma once

// (Semi-)Riemannian metrics on coordinate charts, and the connection and
// curvature quantities derived from them.

#include <rmframe/core.hpp>

#include <functional>
#include <memory>
#include <optional>
#include <string>

namespace rmframe {

using MetricFn = std::function<Mat(const Vec&)>;
/// Returns dg[k] = ∂g/∂x^k for k = 0..dim-1.
using PartialsFn = std::function<std::vector<Mat>(const Vec&)>;
using DomainFn = std::function<bool(const Vec&)>;
using DistanceFn = std::function<double(const Vec&, const Vec&)>;

/// Isometric placement of a chart in a pseudo-Euclidean space E_ν^N.
struct Embedding {
  std::function<Vec(const Vec&)> point;
  std::function<Mat(const Vec&)> jacobian;  // N × dim
  std::function<Vec(const Vec&)> chart_of;  // inverse of point on the image
  Vec ambient_signs;                        // ±1 per ambient coordinate
};

/// Γ^k_ij stored as one symmetric dim×dim matrix per upper index k.
struct Christoffel {
  std::vector<Mat> k;

  int dim() const { return static_cast<int>(k.size()); }
  double operator()(int up, int i, int j) const { return k[up](i, j); }

  /// Γ(u, v)^k = Γ^k_ij u^i v^j.
  Vec contract(const Vec& u, const Vec& v) const {
    Vec out(dim());
    for (int c = 0; c < dim(); ++c) out(c) = u.dot(k[c] * v);
    return out;
  }

  static Christoffel zero(int n) {
    Christoffel g;
    g.k.assign(n, Mat::Zero(n, n));
    return g;
  }
};

/// A coordinate chart with metric components. Immutable after construction;
/// copies share the underlying functions.
class MetricChart {
 public:
  MetricChart(int dim, int index, MetricFn metric, PartialsFn partials, DomainFn domain,
              std::string label)
      : dim_(dim),
        index_(index),
        metric_(std::move(metric)),
        partials_(std::move(partials)),
        domain_(std::move(domain)),
        label_(std::move(label)) {
    require(dim >= 2, ErrorKind::usage, "chart dimension must be at least 2");
    require(index >= 0 && index <= dim, ErrorKind::usage, "metric index out of range");
  }

  int dim() const { return dim_; }
  int index() const { return index_; }
  const std::string& label() const { return label_; }
  bool riemannian() const { return index_ == 0; }
  bool has_partials() const { return static_cast<bool>(partials_); }

  bool in_domain(const Vec& x) const {
    return x.size() == dim_ && x.allFinite() && (!domain_ || domain_(x));
  }

  void check_domain(const Vec& x) const {
    if (!in_domain(x)) throw Error(ErrorKind::domain, "point outside the domain of chart '" + label_ + "'");
  }

  Mat metric(const Vec& x) const { return metric_(x); }

  /// ∂g/∂x^k, analytic when available, else central differences.
  std::vector<Mat> metric_partials(const Vec& x) const {
    if (partials_) return partials_(x);
    std::vector<Mat> dg(dim_);
    Vec xp = x, xm = x;
    for (int k = 0; k < dim_; ++k) {
      const double h = fd_step(x(k));
      xp(k) = x(k) + h;
      xm(k) = x(k) - h;
      dg[k] = (metric_(xp) - metric_(xm)) / (xp(k) - xm(k));
      xp(k) = xm(k) = x(k);
    }
    return dg;
  }

  // Catalog metadata. Zero radius_bound means "user must declare one".
  double radius_bound = 0.0;
  std::optional<double> constant_curvature;
  DistanceFn distance;             // closed-form geodesic distance when known
  std::function<Christoffel(const Vec&)> connection;  // closed-form Γ when known
  std::optional<Embedding> embedding;
  Vec sample_lo, sample_hi;        // box for randomly drawn sphere centers

 private:
  int dim_;
  int index_;
  MetricFn metric_;
  PartialsFn partials_;
  DomainFn domain_;
  std::string label_;
};

struct Point {
  Vec coords;
};

struct Tangent {
  Point base;
  Vec v;
};

enum class Causal { spacelike, timelike, lightlike };

inline const char* to_string(Causal c) {
  switch (c) {
    case Causal::spacelike: return "spacelike";
    case Causal::timelike: return "timelike";
    case Causal::lightlike: return "lightlike";
  }
  return "?";
}

struct CausalClass {
  Causal kind = Causal::spacelike;
  double norm = 0.0;  // ⟨V,V⟩

  int sign() const { return kind == Causal::timelike ? -1 : 1; }
};

inline double inner_raw(const Mat& g, const Vec& x, const Vec& y) { return x.dot(g * y); }

inline Mat inverse_metric(const MetricChart& chart, const Mat& g) {
  const double scale = g.cwiseAbs().maxCoeff();
  const double det = g.determinant();
  if (!(std::abs(det) > 1e-13 * std::pow(scale, chart.dim()))) {
    Eigen::JacobiSVD<Mat> svd(g);
    const auto& s = svd.singularValues();
    const double cond = s(0) / std::max(1e-300, s(s.size() - 1));
    throw Error(ErrorKind::numerical, "singular metric on chart '" + chart.label() +
                                          "' (condition estimate " + std::to_string(cond) + ")");
  }
  return g.inverse();
}

inline void check_same_base(const Point& p, const Tangent& X) {
  if (X.base.coords.size() != p.coords.size() ||
      (X.base.coords - p.coords).cwiseAbs().maxCoeff() > 0.0)
    throw Error(ErrorKind::usage, "tangent vector is not based at the given point");
}

/// ⟨X, Y⟩ at p.
inline double inner(const MetricChart& chart, const Point& p, const Tangent& X, const Tangent& Y) {
  chart.check_domain(p.coords);
  check_same_base(p, X);
  check_same_base(p, Y);
  return inner_raw(chart.metric(p.coords), X.v, Y.v);
}

/// Levi-Civita connection coefficients at x.
inline Christoffel christoffel(const MetricChart& chart, const Vec& x) {
  if (chart.connection) return chart.connection(x);
  const int n = chart.dim();
  const Mat g = chart.metric(x);
  const Mat ginv = inverse_metric(chart, g);
  const std::vector<Mat> dg = chart.metric_partials(x);
  // lowered: Γ_lij = ½(∂_i g_lj + ∂_j g_li − ∂_l g_ij)
  std::vector<Mat> low(n, Mat::Zero(n, n));
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double v = 0.5 * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
        low[l](i, j) = v;
        low[l](j, i) = v;
      }
  Christoffel out = Christoffel::zero(n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      if (ginv(k, l) != 0.0) out.k[k] += ginv(k, l) * low[l];
  return out;
}

inline Christoffel christoffel(const MetricChart& chart, const Point& p) {
  chart.check_domain(p.coords);
  return christoffel(chart, p.coords);
}

/// ∂Γ/∂x^m for every m, by central differences of Γ.
inline std::vector<Christoffel> christoffel_partials(const MetricChart& chart, const Vec& x) {
  const int n = chart.dim();
  std::vector<Christoffel> d(n);
  Vec xp = x, xm = x;
  for (int m = 0; m < n; ++m) {
    const double h = fd_step(x(m));
    xp(m) = x(m) + h;
    xm(m) = x(m) - h;
    const Christoffel gp = christoffel(chart, xp), gm = christoffel(chart, xm);
    const double inv = 1.0 / (xp(m) - xm(m));
    d[m] = Christoffel::zero(n);
    for (int k = 0; k < n; ++k) d[m].k[k] = (gp.k[k] - gm.k[k]) * inv;
    xp(m) = xm(m) = x(m);
  }
  return d;
}

/// (∂_u Γ)(v, w) = u^m ∂_m Γ^k_ij v^i w^j.
inline Vec directional_contract(const std::vector<Christoffel>& dG, const Vec& u, const Vec& v,
                                const Vec& w) {
  Vec out = Vec::Zero(static_cast<Eigen::Index>(dG.size()));
  for (std::size_t m = 0; m < dG.size(); ++m)
    if (u(m) != 0.0) out += u(m) * dG[m].contract(v, w);
  return out;
}

/// R(X,Y)Z = ∇_Y∇_X Z − ∇_X∇_Y Z + ∇_[X,Y] Z in coordinates.
inline Vec curvature_raw(const Christoffel& G, const std::vector<Christoffel>& dG, const Vec& X,
                         const Vec& Y, const Vec& Z) {
  // the opposite-sign operator ∇_X∇_Y − ∇_Y∇_X − ∇_[X,Y] in coordinates
  const Vec r = directional_contract(dG, X, Y, Z) - directional_contract(dG, Y, X, Z) +
                G.contract(X, G.contract(Y, Z)) - G.contract(Y, G.contract(X, Z));
  return -r;
}

inline Tangent curvature_tensor(const MetricChart& chart, const Point& p, const Tangent& X,
                                const Tangent& Y, const Tangent& Z) {
  chart.check_domain(p.coords);
  check_same_base(p, X);
  check_same_base(p, Y);
  check_same_base(p, Z);
  const Christoffel G = christoffel(chart, p.coords);
  const auto dG = christoffel_partials(chart, p.coords);
  return {p, curvature_raw(G, dG, X.v, Y.v, Z.v)};
}

inline double sectional_raw(const Mat& g, const Christoffel& G, const std::vector<Christoffel>& dG,
                            const Vec& X, const Vec& Y) {
  const double xx = inner_raw(g, X, X), yy = inner_raw(g, Y, Y), xy = inner_raw(g, X, Y);
  const double den = xx * yy - xy * xy;
  if (!(std::abs(den) > kPlaneTol))
    throw Error(ErrorKind::plane_degenerate, "tangent plane is degenerate (sectional curvature undefined)");
  return inner_raw(g, curvature_raw(G, dG, X, Y, X), Y) / den;
}

/// K(X, Y) = ⟨R(X,Y)X, Y⟩ / (⟨X,X⟩⟨Y,Y⟩ − ⟨X,Y⟩²).
inline double sectional_curvature(const MetricChart& chart, const Point& p, const Tangent& X,
                                  const Tangent& Y) {
  chart.check_domain(p.coords);
  check_same_base(p, X);
  check_same_base(p, Y);
  return sectional_raw(chart.metric(p.coords), christoffel(chart, p.coords),
                       christoffel_partials(chart, p.coords), X.v, Y.v);
}

inline CausalClass classify(double vv, double euclid_sq) {
  CausalClass c;
  c.norm = vv;
  if (std::abs(vv) <= kLightTol * euclid_sq)
    c.kind = Causal::lightlike;
  else
    c.kind = vv < 0 ? Causal::timelike : Causal::spacelike;
  return c;
}

inline CausalClass causal_character(const MetricChart& chart, const Point& p, const Tangent& V) {
  chart.check_domain(p.coords);
  check_same_base(p, V);
  return classify(inner_raw(chart.metric(p.coords), V.v, V.v), V.v.squaredNorm());
}

/// Structural checks of the metric at one point.
struct MetricDiagnostics {
  double asymmetry = 0.0;
  double condition = 0.0;
  int negative_eigenvalues = 0;
};

inline MetricDiagnostics diagnose_metric(const MetricChart& chart, const Vec& x) {
  const Mat g = chart.metric(x);
  MetricDiagnostics d;
  d.asymmetry = (g - g.transpose()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (g + g.transpose()));
  const Vec ev = es.eigenvalues();
  d.condition = ev.cwiseAbs().maxCoeff() / std::max(1e-300, ev.cwiseAbs().minCoeff());
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) < 0) ++d.negative_eigenvalues;
  return d;
}

/// Orthonormal basis of T_xM (columns), negative directions first, obtained by
/// causal-sign-aware Gram–Schmidt of the coordinate axes.
inline Mat orthonormal_frame(const MetricChart& chart, const Vec& x) {
  const int n = chart.dim();
  const Mat g = chart.metric(x);
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (g + g.transpose()));
  // eigenvectors come sorted by eigenvalue, so negative directions lead
  Mat E(n, n);
  for (int i = 0; i < n; ++i) {
    Vec e = es.eigenvectors().col(i);
    for (int j = 0; j < i; ++j) {
      const double ej = inner_raw(g, E.col(j), E.col(j));
      e -= (inner_raw(g, e, E.col(j)) / ej) * E.col(j);
    }
    const double ee = inner_raw(g, e, e);
    require(std::abs(ee) > 1e-14, ErrorKind::numerical, "degenerate metric while building frame");
    // orient each vector along the coordinate axis it overlaps most
    Eigen::Index imax;
    e.cwiseAbs().maxCoeff(&imax);
    if (e(imax) < 0) e = -e;
    E.col(i) = e / std::sqrt(std::abs(ee));
  }
  return E;
}

}  // namespace rmframe
