#pragma once

// Curves on a chart. A CurveSource yields coordinate derivatives of the curve
// at any value of its own parameter σ; a CurvePath is an arc-length sampling
// of a source. Frame quantities are evaluated pointwise from source jets, so
// no curvature ever depends on finite differences of positions.

#include <rmframe/jet.hpp>
#include <rmframe/manifold.hpp>
#include <rmframe/spectral.hpp>

#include <array>
#include <memory>

namespace rmframe {

/// x(σ) and its first three σ-derivatives.
struct CurveJet {
  Vec x, d1, d2, d3;
};

/// Hypersurface normal along the curve and its σ-derivative (components).
struct NormalJet {
  Vec xi, dxi;
};

struct CurveSource {
  std::function<CurveJet(double)> jet;
  std::function<CurveJet(double)> jet1;          // optional cheaper jet filling only x and d1
  std::function<NormalJet(double)> normal;       // empty when no hypersurface is attached
  std::function<Vec(double)> direction;          // generating direction V (sphere curves)
  std::function<double(double)> mean_curvature;  // H of the carrying hypersurface
  double t0 = 0.0, t1 = 1.0;
  bool periodic = false;
};

struct CurveSample {
  double s = 0.0;      // arc length (proper time for timelike curves)
  double param = 0.0;  // source parameter σ
  Vec x;               // position
  Vec t;               // unit velocity dα/ds
  CurveJet jet;        // source jet at param, when built from a source (else empty)
  NormalJet normal;    // source normal at param, when the source has one (else empty)
};

struct CurvePath {
  CurvePath(MetricChart c, std::shared_ptr<const CurveSource> src)
      : chart(std::move(c)), source(std::move(src)) {}

  MetricChart chart;
  std::shared_ptr<const CurveSource> source;
  std::vector<CurveSample> samples;
  bool closed = false;  // samples then cover [0, length), the endpoint being implicit
  CausalClass causal;
  double length = 0.0;
  double param_per_length = 0.0;  // dσ/ds averaged over the curve (the speed constant c)

  int size() const { return static_cast<int>(samples.size()); }
  /// Spacing of a uniform-s sampling.
  double ds() const { return closed ? length / size() : length / (size() - 1); }
  bool has_normal() const { return source && source->normal; }
};

/// Normal jet at sample k, cached at construction when available.
inline NormalJet sample_normal(const CurvePath& path, std::size_t k) {
  const CurveSample& smp = path.samples[k];
  return smp.normal.xi.size() ? smp.normal : path.source->normal(smp.param);
}

namespace detail {

constexpr std::array<double, 5> kGaussX = {0.0, -0.5384693101056831, 0.5384693101056831,
                                           -0.9061798459386640, 0.9061798459386640};
constexpr std::array<double, 5> kGaussW = {0.5688888888888889, 0.4786286704993665,
                                           0.4786286704993665, 0.2369268850561891,
                                           0.2369268850561891};

inline double speed_of(const MetricChart& chart, const CurveJet& j) {
  return std::sqrt(std::abs(inner_raw(chart.metric(j.x), j.d1, j.d1)));
}

template <class F>
double gauss(F&& f, double a, double b) {
  const double m = 0.5 * (a + b), r = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < 5; ++i) acc += kGaussW[i] * f(m + r * kGaussX[i]);
  return r * acc;
}

}  // namespace detail

namespace detail {

inline void finish_path(CurvePath& path) {
  const MetricChart& chart = path.chart;
  path.causal = classify(inner_raw(chart.metric(path.samples.front().x), path.samples.front().t,
                                   path.samples.front().t),
                         path.samples.front().t.squaredNorm());
  for (const auto& smp : path.samples) {
    const CausalClass c = classify(inner_raw(chart.metric(smp.x), smp.t, smp.t), smp.t.squaredNorm());
    if (c.kind == Causal::lightlike)
      throw Error(ErrorKind::causal, "curve has a lightlike sample at s = " + std::to_string(smp.s));
    if (c.kind != path.causal.kind)
      throw Error(ErrorKind::causal, "curve changes causal character at s = " + std::to_string(smp.s));
  }
}

inline double source_speed(const MetricChart& chart, const CurveSource& S, double sig) {
  return speed_of(chart, S.jet1 ? S.jet1(sig) : S.jet(sig));
}

inline CurveSample make_sample(const MetricChart& chart, const CurveSource& S, double s, double sig) {
  const CurveJet cj = S.jet(sig);
  CurveSample smp;
  smp.s = s;
  smp.param = sig;
  smp.x = cj.x;
  smp.t = cj.d1 / speed_of(chart, cj);
  smp.jet = cj;
  if (S.normal) smp.normal = S.normal(sig);
  return smp;
}

inline void check_min_speed(double min_speed) {
  if (!(min_speed > 1e-8))
    throw Error(ErrorKind::regularity, "curve speed vanishes (min speed " + std::to_string(min_speed) + ")");
}

/// Periodic sources: the speed is expanded in a trigonometric series whose
/// antiderivative gives s(σ) to spectral accuracy.
inline CurvePath reparam_periodic(const MetricChart& chart, std::shared_ptr<const CurveSource> src, int n,
                                  double density = 0.0) {
  const CurveSource& S = *src;
  const double span = S.t1 - S.t0;
  PeriodicSeries w;
  double min_speed = std::numeric_limits<double>::infinity();
  for (int M = 256;; M *= 2) {
    Mat row(1, M);
    for (int j = 0; j < M; ++j) {
      row(0, j) = source_speed(chart, S, S.t0 + span * j / M);
      min_speed = std::min(min_speed, row(0, j));
    }
    check_min_speed(min_speed);
    w = PeriodicSeries(row);
    if (w.tail_ratio() < 1e-13 || M >= 16384) break;
  }
  // θ = 2π(σ − t0)/span;  s(σ) = span/(2π) [a0 θ + I(θ) − I(0)]
  const double f = span / (2 * kPi);
  const double I0 = w.periodic_integral(0.0)(0);
  const double a0 = w.mean()(0);
  const double L = f * a0 * 2 * kPi;
  if (density > 0.0) n = std::max(n, static_cast<int>(std::ceil(density * L)));
  n = (n + 3) / 4 * 4;  // lets closed-curve Simpson sums halve their step

  CurvePath path(chart, src);
  path.closed = true;
  path.length = L;
  path.param_per_length = span / L;
  path.samples.reserve(n);
  double th = 0.0;
  for (int k = 0; k < n; ++k) {
    const double target = k * L / n;
    double speed = a0;
    for (int it = 0; it < 50; ++it) {
      const auto [val, integral] = w.value_and_integral(th);
      speed = val(0);
      const double r = f * (a0 * th + integral(0) - I0) - target;
      if (std::abs(r) < 1e-14 * std::max(1.0, L)) break;
      th -= r / (f * speed);
    }
    path.samples.push_back(make_sample(chart, S, target, S.t0 + f * th));
    th += (L / n) / (f * speed);
  }
  finish_path(path);
  return path;
}

}  // namespace detail

/// Resamples a source at n points uniformly spaced in arc length.
inline CurvePath arc_length_reparam(const MetricChart& chart,
                                    std::shared_ptr<const CurveSource> src, int n) {
  require(n >= 4, ErrorKind::usage, "arc_length_reparam needs at least 4 samples");
  if (src->periodic) return detail::reparam_periodic(chart, std::move(src), n);
  const CurveSource& S = *src;
  auto speed = [&](double sg) { return detail::source_speed(chart, S, sg); };

  const int m = std::max(n, 64);
  const double hs = (S.t1 - S.t0) / m;
  std::vector<double> cum(m + 1, 0.0);
  double min_speed = std::numeric_limits<double>::infinity();
  for (int j = 0; j < m; ++j) {
    const double a = S.t0 + j * hs;
    cum[j + 1] = cum[j] + detail::gauss(speed, a, a + hs);
    min_speed = std::min(min_speed, speed(a));
  }
  min_speed = std::min(min_speed, speed(S.t1));
  detail::check_min_speed(min_speed);
  const double L = cum[m];

  CurvePath path(chart, src);
  path.length = L;
  path.param_per_length = (S.t1 - S.t0) / L;
  const double step = L / (n - 1);
  path.samples.reserve(n);
  std::size_t j = 0;
  double sig = S.t0;
  for (int k = 0; k < n; ++k) {
    const double target = k * step;
    while (j + 1 < static_cast<std::size_t>(m) && cum[j + 1] <= target) ++j;
    const double a = S.t0 + j * hs;
    // Newton on σ ↦ s(σ) − target within interval j
    sig = std::clamp(sig, a, a + hs);
    for (int it = 0; it < 30; ++it) {
      const double f = cum[j] + detail::gauss(speed, a, sig) - target;
      sig -= f / speed(sig);
      if (std::abs(f) < 1e-15 * std::max(1.0, L)) break;
    }
    if (k == 0) sig = S.t0;
    if (k == n - 1) sig = S.t1;
    path.samples.push_back(detail::make_sample(chart, S, target, sig));
  }
  detail::finish_path(path);
  return path;
}

/// Closed curves sampled at max(min_n, ⌈density·length⌉) points.
inline CurvePath arc_length_reparam_density(const MetricChart& chart, std::shared_ptr<const CurveSource> src,
                                            double density, int min_n) {
  require(src->periodic, ErrorKind::usage, "density-driven resampling needs a closed curve");
  return detail::reparam_periodic(chart, std::move(src), min_n, density);
}

/// Re-samples an existing path (same source) at n arc-length-uniform points.
inline CurvePath arc_length_reparam(const CurvePath& path, int n) {
  return arc_length_reparam(path.chart, path.source, n);
}

/// Curve given by generic callables evaluated on Jet<3> arguments.
/// pos(j) must return a std::vector<Jet<3>> of chart coordinates; nrm, when
/// given, the unit normal components in the same form.
template <class Pos>
CurveJet jet_of(const Pos& pos, double sigma) {
  const auto js = pos(Jet<3>::variable(sigma));
  const int n = static_cast<int>(js.size());
  CurveJet cj{Vec(n), Vec(n), Vec(n), Vec(n)};
  for (int i = 0; i < n; ++i) {
    cj.x(i) = js[i].derivative(0);
    cj.d1(i) = js[i].derivative(1);
    cj.d2(i) = js[i].derivative(2);
    cj.d3(i) = js[i].derivative(3);
  }
  return cj;
}

template <class Pos>
std::shared_ptr<CurveSource> analytic_source(Pos pos, double t0, double t1, bool periodic) {
  auto src = std::make_shared<CurveSource>();
  src->jet = [pos](double s) { return jet_of(pos, s); };
  src->t0 = t0;
  src->t1 = t1;
  src->periodic = periodic;
  return src;
}

template <class Nrm>
void attach_analytic_normal(CurveSource& src, Nrm nrm) {
  src.normal = [nrm](double s) {
    const CurveJet cj = jet_of(nrm, s);
    return NormalJet{cj.x, cj.d1};
  };
}

}  // namespace rmframe
