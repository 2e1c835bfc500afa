#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rmframe {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Relative band inside which ⟨V,V⟩ counts as zero (lightlike vectors).
inline constexpr double kLightTol = 1e-9;
/// Degeneracy threshold for the Gram determinant of a tangent plane.
inline constexpr double kPlaneTol = 1e-9;
/// Endpoint position gap allowed for a closed path (chart coordinates).
inline constexpr double kCloseTol = 1e-6;
/// Endpoint velocity gap allowed for a closed path.
inline constexpr double kCloseVelocityTol = 1e-5;
/// Frenet frames are computed only where κ exceeds this.
inline constexpr double kKappaMin = 1e-4;

enum class ErrorKind {
  domain,
  numerical,
  causal,
  plane_degenerate,
  integration,
  regularity,
  usage,
  frenet_degenerate,
  resolution,
  config,
  io,
  inapplicable,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::causal: return "causal";
    case ErrorKind::plane_degenerate: return "plane_degenerate";
    case ErrorKind::integration: return "integration";
    case ErrorKind::regularity: return "regularity";
    case ErrorKind::usage: return "usage";
    case ErrorKind::frenet_degenerate: return "frenet_degenerate";
    case ErrorKind::resolution: return "resolution";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
    case ErrorKind::inapplicable: return "inapplicable";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when the adaptive integrator cannot make progress.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double last_good)
      : Error(ErrorKind::integration, what + " (last good parameter " + std::to_string(last_good) + ")"),
        last_good_(last_good) {}
  double last_good() const noexcept { return last_good_; }

 private:
  double last_good_;
};

/// Raised when the Frenet frame is undefined on part of a path.
class FrenetDegenerateError : public Error {
 public:
  FrenetDegenerateError(const std::string& what, std::vector<std::pair<double, double>> intervals)
      : Error(ErrorKind::frenet_degenerate, what), intervals_(std::move(intervals)) {}
  const std::vector<std::pair<double, double>>& intervals() const noexcept { return intervals_; }

 private:
  std::vector<std::pair<double, double>> intervals_;
};

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) throw Error(kind, what);
}

inline bool all_finite(const Vec& v) { return v.allFinite(); }

/// Central-difference step for a coordinate value x.
inline double fd_step(double x) {
  static const double h0 = std::cbrt(std::numeric_limits<double>::epsilon());
  return h0 * std::max(1.0, std::abs(x));
}

inline Vec unit(int n, int i) {
  Vec e = Vec::Zero(n);
  e(i) = 1.0;
  return e;
}

/// Two-threshold verdicts: below `tolerance` consistent, above `violation`
/// violated, the band in between inconclusive.
enum class Verdict { consistent, inconclusive, violated, inapplicable };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::consistent: return "consistent";
    case Verdict::inconclusive: return "inconclusive";
    case Verdict::violated: return "violated";
    case Verdict::inapplicable: return "inapplicable";
  }
  return "?";
}

inline Verdict judge(double residual, double tolerance, double violation) {
  if (!std::isfinite(residual)) return Verdict::inapplicable;
  if (residual < tolerance) return Verdict::consistent;
  if (residual > violation) return Verdict::violated;
  return Verdict::inconclusive;
}

/// Worst of several verdicts (inapplicable < consistent < inconclusive < violated
/// for aggregation: one violation decides).
inline Verdict combine(Verdict a, Verdict b) {
  auto rank = [](Verdict v) {
    switch (v) {
      case Verdict::inapplicable: return 0;
      case Verdict::consistent: return 1;
      case Verdict::inconclusive: return 2;
      case Verdict::violated: return 3;
    }
    return 0;
  };
  return rank(a) >= rank(b) ? a : b;
}

}  // namespace rmframe
