#pragma once

// Explicit Runge–Kutta integration: the Dormand–Prince 5(4) pair with
// adaptive step control and cubic Hermite dense output, plus fixed-step
// variants used where the result must be a smooth function of the inputs.

#include <rmframe/core.hpp>

#include <algorithm>
#include <functional>
#include <optional>

namespace rmframe {

using OdeRhs = std::function<Vec(double, const Vec&)>;
/// Applied to every accepted state (e.g. re-orthonormalization).
using OdeProjector = std::function<void(double, Vec&)>;

struct OdeOptions {
  double atol = 1e-9;
  double rtol = 1e-9;
  double initial_step = 0.0;  // 0 selects automatically
  double max_step = 0.0;      // 0 means unbounded
  long max_steps = 2'000'000;
  /// Parameters the integrator must land on exactly.
  std::vector<double> stops;
};

/// Accepted steps of an integration, with dense output between them.
struct OdeSolution {
  std::vector<double> t;
  std::vector<Vec> y;
  std::vector<Vec> f;  // y' at each accepted point
  long rejected = 0;

  double t_begin() const { return t.front(); }
  double t_end() const { return t.back(); }

  /// Cubic Hermite interpolation between accepted steps.
  Vec eval(double s) const {
    if (t.size() == 1) return y.front();
    const bool forward = t.back() >= t.front();
    auto idx = [&]() -> std::size_t {
      if (forward) {
        auto it = std::upper_bound(t.begin(), t.end(), s);
        if (it == t.begin()) return 0;
        return std::min<std::size_t>(std::distance(t.begin(), it) - 1, t.size() - 2);
      }
      auto it = std::upper_bound(t.begin(), t.end(), s, std::greater<double>());
      if (it == t.begin()) return 0;
      return std::min<std::size_t>(std::distance(t.begin(), it) - 1, t.size() - 2);
    }();
    const double t0 = t[idx], t1 = t[idx + 1];
    const double h = t1 - t0;
    const double th = (s - t0) / h;
    const double h00 = (1 + 2 * th) * (1 - th) * (1 - th);
    const double h10 = th * (1 - th) * (1 - th);
    const double h01 = th * th * (3 - 2 * th);
    const double h11 = th * th * (th - 1);
    return h00 * y[idx] + h10 * h * f[idx] + h01 * y[idx + 1] + h11 * h * f[idx + 1];
  }
};

namespace detail {

struct DormandPrince {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  /// One step from (t, y) with slope k1; returns y_{n+1}, fills k7 and the error estimate.
  static Vec step(const OdeRhs& rhs, double t, const Vec& y, const Vec& k1, double h, Vec& k7,
                  Vec* err) {
    const Vec k2 = rhs(t + c2 * h, y + h * (a21 * k1));
    const Vec k3 = rhs(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const Vec k4 = rhs(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vec k5 = rhs(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vec k6 = rhs(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    Vec ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    k7 = rhs(t + h, ynew);
    if (err) *err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    return ynew;
  }
};

inline double error_norm(const Vec& err, const Vec& y0, const Vec& y1, double atol, double rtol) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sc = atol + rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
    const double r = err(i) / sc;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(std::max<Eigen::Index>(1, err.size())));
}

}  // namespace detail

/// Adaptive Dormand–Prince integration of y' = rhs(t, y) from t0 to t1.
inline OdeSolution integrate_adaptive(const OdeRhs& rhs, double t0, const Vec& y0, double t1,
                                      const OdeOptions& opt = {},
                                      const OdeProjector& project = nullptr) {
  OdeSolution sol;
  Vec y = y0;
  if (project) project(t0, y);
  Vec f = rhs(t0, y);
  sol.t.push_back(t0);
  sol.y.push_back(y);
  sol.f.push_back(f);
  if (t1 == t0) return sol;

  const double dir = t1 > t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  std::vector<double> stops;
  for (double s : opt.stops)
    if (dir * (s - t0) > 0 && dir * (t1 - s) > 0) stops.push_back(s);
  std::sort(stops.begin(), stops.end(), [&](double a, double b) { return dir * a < dir * b; });
  stops.push_back(t1);
  std::size_t next_stop = 0;

  double h = opt.initial_step;
  if (h <= 0) {
    const double d0 = detail::error_norm(y, y, y, opt.atol, opt.rtol);
    const double d1 = detail::error_norm(f, y, y, opt.atol, opt.rtol);
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min(h, span);
  }
  if (opt.max_step > 0) h = std::min(h, opt.max_step);

  double t = t0;
  long steps = 0;
  const double h_floor = 1e-14 * std::max(1.0, std::abs(t0) + span);
  Vec k7, err;
  while (next_stop < stops.size()) {
    if (++steps > opt.max_steps) throw IntegrationError("step budget exhausted", t);
    const double target = stops[next_stop];
    bool hits = false;
    double step = h;
    if (step >= std::abs(target - t) * (1 - 1e-12)) {
      step = std::abs(target - t);
      hits = true;
    }
    Vec ynew = detail::DormandPrince::step(rhs, t, y, f, dir * step, k7, &err);
    const double en = detail::error_norm(err, y, ynew, opt.atol, opt.rtol);
    if (!std::isfinite(en)) {
      h = 0.25 * step;
      ++sol.rejected;
      if (h < h_floor) throw IntegrationError("non-finite state", t);
      continue;
    }
    if (en <= 1.0) {
      t = hits ? target : t + dir * step;
      y = std::move(ynew);
      if (project) {
        project(t, y);
        f = rhs(t, y);
      } else {
        f = k7;
      }
      sol.t.push_back(t);
      sol.y.push_back(y);
      sol.f.push_back(f);
      if (hits) ++next_stop;
      const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
      // a step shortened to land on a stop keeps the previous proposal
      if (!(hits && step < h)) h = step * fac;
      if (opt.max_step > 0) h = std::min(h, opt.max_step);
    } else {
      ++sol.rejected;
      h = step * std::clamp(0.9 * std::pow(en, -0.2), 0.1, 0.9);
      if (h < h_floor) throw IntegrationError("step size underflow", t);
    }
  }
  return sol;
}

/// Fixed-step Dormand–Prince (fifth-order solution). The result is a smooth
/// function of y0 because the step sequence does not depend on the state.
inline Vec integrate_fixed(const OdeRhs& rhs, double t0, const Vec& y0, double t1, int n_steps) {
  Vec y = y0;
  const double h = (t1 - t0) / n_steps;
  Vec f = rhs(t0, y), k7;
  for (int i = 0; i < n_steps; ++i) {
    y = detail::DormandPrince::step(rhs, t0 + i * h, y, f, h, k7, nullptr);
    f = k7;
  }
  return y;
}

/// Classical RK4 step.
inline Vec rk4_step(const OdeRhs& rhs, double t, const Vec& y, double h) {
  const Vec k1 = rhs(t, y);
  const Vec k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1);
  const Vec k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2);
  const Vec k4 = rhs(t + h, y + h * k3);
  return y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);
}

}  // namespace rmframe
