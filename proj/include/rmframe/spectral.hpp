#pragma once

// Trigonometric interpolation of smooth 2π-periodic vector functions sampled
// on a uniform grid. Derivatives are evaluated term by term.

#include <rmframe/core.hpp>

#include <unsupported/Eigen/FFT>

#include <array>
#include <complex>

namespace rmframe {

class PeriodicSeries {
 public:
  PeriodicSeries() = default;

  /// samples: channels × N matrix, column j taken at σ_j = 2πj/N.
  /// Trailing modes below noise_floor × (largest coefficient) are dropped:
  /// they are roundoff, and derivatives would amplify them by k^order.
  explicit PeriodicSeries(const Mat& samples, double noise_floor = 1e-17) {
    const int channels = static_cast<int>(samples.rows());
    const int n = static_cast<int>(samples.cols());
    require(n >= 8 && n % 2 == 0, ErrorKind::usage, "periodic series needs an even sample count >= 8");
    modes_ = n / 2 - 1;
    a_ = Mat::Zero(channels, modes_ + 1);
    b_ = Mat::Zero(channels, modes_ + 1);
    Eigen::FFT<double> fft;
    std::vector<double> row(n);
    std::vector<std::complex<double>> coeffs;
    for (int c = 0; c < channels; ++c) {
      for (int j = 0; j < n; ++j) row[j] = samples(c, j);
      fft.fwd(coeffs, row);
      a_(c, 0) = coeffs[0].real() / n;
      for (int k = 1; k <= modes_; ++k) {
        a_(c, k) = 2.0 * coeffs[k].real() / n;
        b_(c, k) = -2.0 * coeffs[k].imag() / n;
      }
    }
    const double scale = std::max(a_.cwiseAbs().maxCoeff(), b_.cwiseAbs().maxCoeff());
    active_ = modes_;
    while (active_ > 1 && a_.col(active_).cwiseAbs().maxCoeff() < noise_floor * scale &&
           b_.col(active_).cwiseAbs().maxCoeff() < noise_floor * scale)
      --active_;
  }

  int channels() const { return static_cast<int>(a_.rows()); }
  int modes() const { return modes_; }

  /// Derivatives of orders 0..max_order at σ (max_order <= 4).
  std::array<Vec, 5> eval(double sigma, int max_order) const {
    std::array<Vec, 5> out;
    const int K = active_;
    Vec ck, sk;
    harmonics(sigma, ck, sk);
    Vec wc(K + 1), ws(K + 1);
    for (int m = 0; m <= max_order; ++m) {
      // d^m/dσ^m of cos kσ and sin kσ
      for (int k = 0; k <= K; ++k) {
        double kp = 1.0;
        for (int i = 0; i < m; ++i) kp *= k;
        switch (m % 4) {
          case 0: wc(k) = kp * ck(k); ws(k) = kp * sk(k); break;
          case 1: wc(k) = -kp * sk(k); ws(k) = kp * ck(k); break;
          case 2: wc(k) = -kp * ck(k); ws(k) = -kp * sk(k); break;
          default: wc(k) = kp * sk(k); ws(k) = -kp * ck(k); break;
        }
      }
      out[m] = a_.leftCols(K + 1) * wc + b_.leftCols(K + 1) * ws;
    }
    return out;
  }

  /// Antiderivative channel-wise, without the linear term a_0·σ.
  Vec periodic_integral(double sigma) const {
    const int K = active_;
    Vec ck, sk;
    harmonics(sigma, ck, sk);
    Vec wc = Vec::Zero(K + 1), ws = Vec::Zero(K + 1);
    for (int k = 1; k <= K; ++k) {
      wc(k) = -ck(k) / k;
      ws(k) = sk(k) / k;
    }
    return a_.leftCols(K + 1) * ws + b_.leftCols(K + 1) * wc;
  }

  /// Value and periodic_integral at σ from one pass over the harmonics.
  std::pair<Vec, Vec> value_and_integral(double sigma) const {
    const int K = active_;
    Vec ck, sk;
    harmonics(sigma, ck, sk);
    Vec wc = Vec::Zero(K + 1), ws = Vec::Zero(K + 1);
    for (int k = 1; k <= K; ++k) {
      wc(k) = -ck(k) / k;
      ws(k) = sk(k) / k;
    }
    return {a_.leftCols(K + 1) * ck + b_.leftCols(K + 1) * sk, a_.leftCols(K + 1) * ws + b_.leftCols(K + 1) * wc};
  }

  Vec mean() const { return a_.col(0); }

  /// Per channel, the largest amplitude at k >= modes/2 relative to the
  /// channel's largest coefficient; the maximum over channels is returned.
  double tail_ratio() const {
    double worst = 0.0;
    for (int c = 0; c < channels(); ++c) {
      double total = std::max(1e-300, std::abs(a_(c, 0))), tail = 0.0;
      for (int k = 1; k <= modes_; ++k) {
        const double amp = std::hypot(a_(c, k), b_(c, k));
        total = std::max(total, amp);
        if (k >= modes_ / 2) tail = std::max(tail, amp);
      }
      worst = std::max(worst, tail / total);
    }
    return worst;
  }

 private:
  /// cos kσ and sin kσ for k = 0..active_, by rotation with periodic resync.
  void harmonics(double sigma, Vec& ck, Vec& sk) const {
    const int K = active_;
    ck.resize(K + 1);
    sk.resize(K + 1);
    ck(0) = 1.0;
    sk(0) = 0.0;
    const double c1 = std::cos(sigma), s1 = std::sin(sigma);
    for (int k = 1; k <= K; ++k) {
      if (k % 64 == 1) {
        ck(k) = std::cos(k * sigma);
        sk(k) = std::sin(k * sigma);
      } else {
        ck(k) = ck(k - 1) * c1 - sk(k - 1) * s1;
        sk(k) = sk(k - 1) * c1 + ck(k - 1) * s1;
      }
    }
  }

  int modes_ = 0;
  int active_ = 0;
  Mat a_, b_;
};

}  // namespace rmframe
