#include <rmframe/core.hpp>
#include <rmframe/jet.hpp>
#include <rmframe/ode.hpp>
#include <rmframe/philox.hpp>
#include <rmframe/spectral.hpp>

#include <gtest/gtest.h>

using namespace rmframe;

// Known-answer vectors of Philox4x64-10 (Random123), key = (0, 0).
TEST(Philox, KnownAnswerVectors) {
  const Philox4x64::Key key{0, 0};
  const std::array<Philox4x64::Block, 3> expect = {{
      {0x16554d9eca36314cULL, 0xdb20fe9d672d0fdcULL, 0xd7e772cee186176bULL, 0x7e68b68aec7ba23bULL},
      {0x02f4ba6408e4d89bULL, 0x3dd62b0b9ca8c5b2ULL, 0x1c8667a55d902e79ULL, 0x907d7a052fd5b4dcULL},
      {0x809bf322883987c3ULL, 0x471128b9e807f7ddULL, 0xf250ba0dbec065b7ULL, 0xfc6ed66767a457bcULL},
  }};
  for (std::uint64_t c = 0; c < 3; ++c) EXPECT_EQ(Philox4x64::block({c, 0, 0, 0}, key), expect[c]) << "counter " << c;
}

TEST(CounterRng, StreamReproducesBlocks) {
  CounterRng rng(0, 0);
  for (std::uint64_t c = 0; c < 3; ++c) {
    const auto b = Philox4x64::block({c, 0, 0, 0}, {0, 0});
    for (int i = 0; i < 4; ++i) EXPECT_EQ(rng.next_u64(), b[i]);
  }
}

TEST(CounterRng, SeedsAndStreamsAreIndependent) {
  CounterRng a(42, 0), b(42, 0), c(42, 1), d(43, 0);
  const auto x = a.next_u64();
  EXPECT_EQ(x, b.next_u64());
  EXPECT_NE(x, c.next_u64());
  EXPECT_NE(x, d.next_u64());
}

TEST(CounterRng, UniformRangeAndMoments) {
  CounterRng rng(7, 3);
  double sum = 0.0, sq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.05);
  EXPECT_NEAR(sq / n, 1.0, 0.05);
}

TEST(Verdict, TwoThresholds) {
  EXPECT_EQ(judge(1e-6, 1e-4, 1e-2), Verdict::consistent);
  EXPECT_EQ(judge(1e-3, 1e-4, 1e-2), Verdict::inconclusive);
  EXPECT_EQ(judge(0.5, 1e-4, 1e-2), Verdict::violated);
  EXPECT_EQ(judge(std::nan(""), 1e-4, 1e-2), Verdict::inapplicable);
}

TEST(Verdict, CombineRanksSeverity) {
  EXPECT_EQ(combine(Verdict::consistent, Verdict::inapplicable), Verdict::consistent);
  EXPECT_EQ(combine(Verdict::consistent, Verdict::inconclusive), Verdict::inconclusive);
  EXPECT_EQ(combine(Verdict::violated, Verdict::inconclusive), Verdict::violated);
  EXPECT_EQ(combine(Verdict::inapplicable, Verdict::inapplicable), Verdict::inapplicable);
}

TEST(Jet, DerivativesOfComposition) {
  // f(t) = exp(sin t) / sqrt(1 + t²) at t = 0.7 against finite differences of
  // the closed-form first derivative and direct evaluation.
  const double t0 = 0.7;
  const Jet<3> t = Jet<3>::variable(t0);
  const Jet<3> f = exp(sin(t)) / sqrt(1.0 + t * t);
  auto F = [](double x) { return std::exp(std::sin(x)) / std::sqrt(1 + x * x); };
  auto dF = [](double x) {
    return std::exp(std::sin(x)) * (std::cos(x) / std::sqrt(1 + x * x) - x / std::pow(1 + x * x, 1.5));
  };
  const double h = 1e-4;
  EXPECT_NEAR(f.value(), F(t0), 1e-15);
  EXPECT_NEAR(f.derivative(1), dF(t0), 1e-13);
  EXPECT_NEAR(f.derivative(2), (dF(t0 + h) - dF(t0 - h)) / (2 * h), 1e-7);
  EXPECT_NEAR(f.derivative(3), (dF(t0 + h) - 2 * dF(t0) + dF(t0 - h)) / (h * h), 1e-5);
}

TEST(Jet, HyperbolicAndLog) {
  const Jet<3> t = Jet<3>::variable(0.3);
  const Jet<3> f = log(cosh(t)) + sinh(t) * cos(t);
  EXPECT_NEAR(f.derivative(1), std::tanh(0.3) + std::cosh(0.3) * std::cos(0.3) - std::sinh(0.3) * std::sin(0.3), 1e-14);
}

TEST(PeriodicSeries, SpectralDerivatives) {
  const int n = 64;
  Mat samples(2, n);
  for (int j = 0; j < n; ++j) {
    const double s = 2 * kPi * j / n;
    samples(0, j) = std::cos(3 * s) + 0.5 * std::sin(s);
    samples(1, j) = std::exp(std::cos(s));
  }
  const PeriodicSeries P(samples);
  const double s = 0.37;
  const auto d = P.eval(s, 3);
  EXPECT_NEAR(d[0](0), std::cos(3 * s) + 0.5 * std::sin(s), 1e-13);
  EXPECT_NEAR(d[1](0), -3 * std::sin(3 * s) + 0.5 * std::cos(s), 1e-12);
  EXPECT_NEAR(d[3](0), 27 * std::sin(3 * s) - 0.5 * std::cos(s), 1e-10);
  EXPECT_NEAR(d[1](1), -std::sin(s) * std::exp(std::cos(s)), 1e-12);
  EXPECT_LT(P.tail_ratio(), 1e-12);
}

TEST(Ode, AdaptiveHarmonicOscillator) {
  OdeRhs rhs = [](double, const Vec& y) {
    Vec f(2);
    f << y(1), -y(0);
    return f;
  };
  Vec y0(2);
  y0 << 1.0, 0.0;
  OdeOptions opt;
  opt.atol = opt.rtol = 1e-11;
  const OdeSolution sol = integrate_adaptive(rhs, 0.0, y0, 10.0, opt);
  EXPECT_NEAR(sol.y.back()(0), std::cos(10.0), 1e-9);
  EXPECT_NEAR(sol.eval(4.2)(0), std::cos(4.2), 1e-8);  // dense output
  EXPECT_NEAR(integrate_fixed(rhs, 0.0, y0, 1.0, 200)(1), -std::sin(1.0), 1e-10);
}

TEST(Errors, KindIsReported) {
  try {
    require(false, ErrorKind::config, "bad");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::config);
    EXPECT_NE(std::string(e.what()).find("config error"), std::string::npos);
  }
}
