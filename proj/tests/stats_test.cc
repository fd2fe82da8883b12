#include "wikirank/stats.h"

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"

namespace wikirank::stats {
namespace {

TEST(KendallTau, IdentityAndReverse) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> rev{5, 4, 3, 2, 1};
  EXPECT_DOUBLE_EQ(KendallTau(x, x).coefficient, 1.0);
  EXPECT_DOUBLE_EQ(KendallTau(x, rev).coefficient, -1.0);
}

TEST(KendallTau, FourPairExample) {
  // Six pairs: 4 concordant, 2 discordant.
  const std::vector<double> x{1, 2, 3, 4};
  const std::vector<double> y{2, 1, 4, 3};
  const CorrelationResult r = KendallTau(x, y);
  EXPECT_NEAR(r.coefficient, 1.0 / 3.0, 1e-15);
  EXPECT_EQ(r.n, 4u);
  EXPECT_GE(r.p_value, 0.0);
  EXPECT_LE(r.p_value, 1.0);
}

TEST(KendallTau, MatchesBruteForceOnTiedInputs) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = oracle::RandomTiedSample(rng);
    EXPECT_NEAR(KendallTau(s.x, s.y).coefficient,
                oracle::BruteKendallTauB(s.x, s.y), 1e-12);
  }
}

TEST(KendallTau, ZeroVarianceIsAnError) {
  const std::vector<double> x{2, 2, 2};
  const std::vector<double> y{1, 2, 3};
  EXPECT_THROW(KendallTau(x, y), Error);
  EXPECT_THROW(KendallTau(y, x), Error);
}

TEST(KendallTau, LengthMismatch) {
  const std::vector<double> x{1, 2, 3};
  const std::vector<double> y{1, 2};
  EXPECT_THROW(KendallTau(x, y), Error);
}

TEST(KendallTau, PValueForKnownCase) {
  // No ties, n = 10: var = n(n-1)(2n+5)/18 = 125, S = C - D.
  const std::vector<double> x{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const std::vector<double> y{2, 1, 4, 3, 6, 5, 8, 7, 10, 9};
  const CorrelationResult r = KendallTau(x, y);
  const double s = 45 - 2 * 5;
  EXPECT_NEAR(r.p_value, std::erfc(s / std::sqrt(125.0) / std::sqrt(2.0)),
              1e-12);
}

TEST(SpearmanRho, Examples) {
  const std::vector<double> a{1, 2, 3};
  const std::vector<double> b{1, 3, 2};
  EXPECT_DOUBLE_EQ(SpearmanRho(a, a).coefficient, 1.0);
  EXPECT_NEAR(SpearmanRho(a, b).coefficient, 0.5, 1e-15);
  const std::vector<double> tied{1, 1, 2};
  EXPECT_NEAR(SpearmanRho(tied, a).coefficient, std::sqrt(3.0) / 2.0, 1e-15);
}

TEST(SpearmanRho, MatchesRankThenPearsonOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = oracle::RandomTiedSample(rng);
    const double expected = oracle::DirectPearson(
        oracle::CountingRanks(s.x), oracle::CountingRanks(s.y));
    EXPECT_NEAR(SpearmanRho(s.x, s.y).coefficient, expected, 1e-12);
  }
}

TEST(PearsonR, Examples) {
  const std::vector<double> x{1, 2, 3};
  const std::vector<double> y{1, 2, 4};
  EXPECT_NEAR(PearsonR(x, y).coefficient, 3.0 / std::sqrt(2.0 * 42.0 / 9.0),
              1e-14);
  EXPECT_NEAR(PearsonR(x, y).coefficient, 0.98198, 1e-5);
  std::vector<double> affine, neg;
  for (double v : x) {
    affine.push_back(2 * v + 3);
    neg.push_back(-v);
  }
  EXPECT_DOUBLE_EQ(PearsonR(x, affine).coefficient, 1.0);
  EXPECT_DOUBLE_EQ(PearsonR(x, neg).coefficient, -1.0);
  EXPECT_EQ(PearsonR(x, affine).p_value, 0.0);
}

TEST(Correlation, AntisymmetryAndMonotoneInvariance) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(20), y(20), neg_y(20), exp_x(20), aff_y(20);
    for (int i = 0; i < 20; ++i) {
      x[i] = g(rng);
      y[i] = x[i] + g(rng);
      neg_y[i] = -y[i];
      exp_x[i] = std::exp(x[i]);
      aff_y[i] = 3.0 * y[i] - 7.0;
    }
    EXPECT_NEAR(KendallTau(x, neg_y).coefficient,
                -KendallTau(x, y).coefficient, 1e-12);
    EXPECT_NEAR(SpearmanRho(x, neg_y).coefficient,
                -SpearmanRho(x, y).coefficient, 1e-12);
    EXPECT_NEAR(PearsonR(x, neg_y).coefficient, -PearsonR(x, y).coefficient,
                1e-12);
    EXPECT_NEAR(KendallTau(exp_x, aff_y).coefficient,
                KendallTau(x, y).coefficient, 1e-12);
    EXPECT_NEAR(SpearmanRho(exp_x, aff_y).coefficient,
                SpearmanRho(x, y).coefficient, 1e-12);
  }
}

TEST(FractionalRanks, TiesShareMean) {
  const std::vector<double> v{10, 20, 10, 30, 20, 20};
  const std::vector<double> r = FractionalRanks(v);
  EXPECT_EQ(r, (std::vector<double>{1.5, 4, 1.5, 6, 4, 4}));
}

TEST(MinMaxScale, Examples) {
  EXPECT_EQ(MinMaxScale(std::vector<double>{0, 5, 10}),
            (std::vector<double>{0, 0.5, 1}));
  EXPECT_EQ(MinMaxScale(std::vector<double>{7, 7, 7}),
            (std::vector<double>{0, 0, 0}));
  EXPECT_EQ(MinMaxScale(std::vector<double>{-2, 0, 2}),
            (std::vector<double>{0, 0.5, 1}));
  EXPECT_THROW(MinMaxScale(std::vector<double>{}), Error);
}

TEST(LinearRegression, ExactLineWithIntercept) {
  Matrix x(4, 1);
  std::vector<double> y;
  for (size_t r = 0; r < 4; ++r) {
    x(r, 0) = static_cast<double>(r);
    y.push_back(2.0 * r + 1.0);
  }
  const RegressionResult fit = LinearRegression(x, y, true);
  EXPECT_NEAR(fit.coefficients[0], 2.0, 1e-12);
  EXPECT_NEAR(fit.intercept, 1.0, 1e-12);
  EXPECT_NEAR(fit.residual_norm, 0.0, 1e-12);
}

TEST(LinearRegression, RecoversGenerationCoefficients) {
  const double truth[3] = {4.3848, 4.42, 0.8238};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  Matrix x(12, 3);
  std::vector<double> y;
  for (size_t r = 0; r < 12; ++r) {
    x(r, 0) = u(rng);
    x(r, 1) = u(rng);
    x(r, 2) = r % 2;
    y.push_back(truth[0] * x(r, 0) + truth[1] * x(r, 1) + truth[2] * x(r, 2));
  }
  const RegressionResult fit = LinearRegression(x, y, false);
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(fit.coefficients[c], truth[c], 1e-6);
  EXPECT_EQ(fit.intercept, 0.0);
}

TEST(LinearRegression, ResidualOrthogonalAndMatchesNormalEquations) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  Matrix x(30, 2);
  std::vector<double> y;
  for (size_t r = 0; r < 30; ++r) {
    x(r, 0) = g(rng);
    x(r, 1) = g(rng);
    y.push_back(1.5 * x(r, 0) - 0.5 * x(r, 1) + 0.3 * g(rng));
  }
  const RegressionResult fit = LinearRegression(x, y, false);
  // Xᵀ(Xβ - y) = 0.
  double g0 = 0, g1 = 0;
  double a00 = 0, a01 = 0, a11 = 0, b0 = 0, b1 = 0;
  for (size_t r = 0; r < 30; ++r) {
    const double res = x(r, 0) * fit.coefficients[0] +
                       x(r, 1) * fit.coefficients[1] - y[r];
    g0 += x(r, 0) * res;
    g1 += x(r, 1) * res;
    a00 += x(r, 0) * x(r, 0);
    a01 += x(r, 0) * x(r, 1);
    a11 += x(r, 1) * x(r, 1);
    b0 += x(r, 0) * y[r];
    b1 += x(r, 1) * y[r];
  }
  EXPECT_NEAR(g0, 0.0, 1e-8);
  EXPECT_NEAR(g1, 0.0, 1e-8);
  // Cramer's rule on the 2x2 normal equations.
  const double det = a00 * a11 - a01 * a01;
  EXPECT_NEAR(fit.coefficients[0], (b0 * a11 - b1 * a01) / det, 1e-8);
  EXPECT_NEAR(fit.coefficients[1], (a00 * b1 - a01 * b0) / det, 1e-8);
}

TEST(LinearRegression, DuplicateColumnIsRankDeficient) {
  Matrix x(5, 2);
  std::vector<double> y;
  for (size_t r = 0; r < 5; ++r) {
    x(r, 0) = x(r, 1) = static_cast<double>(r * r);
    y.push_back(static_cast<double>(r));
  }
  try {
    LinearRegression(x, y, false);
    FAIL() << "expected RankDeficientError";
  } catch (const RankDeficientError &e) {
    EXPECT_EQ(e.columns().size(), 1u);
    EXPECT_NE(std::string(e.what()).find("dependent column"),
              std::string::npos);
  }
}

TEST(LinearRegression, ConstantTargetsWithIntercept) {
  Matrix x(6, 2);
  std::vector<double> y(6, 3.25);
  for (size_t r = 0; r < 6; ++r) {
    x(r, 0) = static_cast<double>(r);
    x(r, 1) = static_cast<double>((r * 7) % 5);
  }
  const RegressionResult fit = LinearRegression(x, y, true);
  EXPECT_NEAR(fit.coefficients[0], 0.0, 1e-12);
  EXPECT_NEAR(fit.coefficients[1], 0.0, 1e-12);
  EXPECT_NEAR(fit.intercept, 3.25, 1e-12);
}

TEST(NelderMead, SeparableQuadratic) {
  auto f = [](std::span<const double> w) {
    return (w[0] - 0.5) * (w[0] - 0.5) + (w[1] - 0.3) * (w[1] - 0.3);
  };
  SimplexConfig config;
  config.restarts = 1;
  const std::vector<double> x0{0, 0};
  const SimplexResult r = NelderMead(f, x0, config);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.iterations, 500);
  EXPECT_NEAR(r.argmin[0], 0.5, 1e-6);
  EXPECT_NEAR(r.argmin[1], 0.3, 1e-6);
}

TEST(NelderMead, Rosenbrock) {
  auto f = [](std::span<const double> v) {
    const double a = v[0], b = v[1];
    return (1 - a) * (1 - a) + 100 * (b - a * a) * (b - a * a);
  };
  const std::vector<double> x0{-1.2, 1.0};
  const SimplexResult r = NelderMead(f, x0, SimplexConfig{});
  EXPECT_NEAR(r.argmin[0], 1.0, 1e-4);
  EXPECT_NEAR(r.argmin[1], 1.0, 1e-4);
}

// McKinnon's function with tau = 2, theta = 6, phi = 60 and its initial
// simplex: the plain method contracts onto the origin, which is not
// stationary (df/dy = 1 there). The minimum is -0.25 at (0, -0.5).
double McKinnon(std::span<const double> v) {
  const double x = v[0], y = v[1];
  const double lead = x <= 0 ? 6.0 * 60.0 * x * x : 6.0 * x * x;
  return lead + y + y * y;
}

std::vector<std::vector<double>> McKinnonSimplex() {
  const double s = std::sqrt(33.0);
  return {{0, 0}, {1, 1}, {(1 + s) / 8, (1 - s) / 8}};
}

TEST(NelderMead, RestartEscapesMcKinnonStall) {
  SimplexConfig single;
  single.restarts = 1;
  const SimplexResult stalled =
      NelderMeadFromSimplex(McKinnon, McKinnonSimplex(), single);
  EXPECT_NEAR(stalled.argmin[0], 0.0, 1e-3);
  EXPECT_NEAR(stalled.argmin[1], 0.0, 1e-3);

  SimplexConfig restarted;
  const SimplexResult escaped =
      NelderMeadFromSimplex(McKinnon, McKinnonSimplex(), restarted);
  EXPECT_LT(escaped.value, stalled.value);
  EXPECT_NEAR(escaped.value, -0.25, 1e-8);
}

TEST(NelderMead, DeterministicGivenSeed) {
  std::vector<std::vector<double>> trace_a, trace_b;
  auto traced = [](std::vector<std::vector<double>> &trace) {
    return [&trace](std::span<const double> v) {
      trace.emplace_back(v.begin(), v.end());
      return McKinnon(v);
    };
  };
  SimplexConfig config;
  config.seed = 1234;
  NelderMeadFromSimplex(traced(trace_a), McKinnonSimplex(), config);
  NelderMeadFromSimplex(traced(trace_b), McKinnonSimplex(), config);
  ASSERT_EQ(trace_a.size(), trace_b.size());
  EXPECT_TRUE(trace_a == trace_b);
}

TEST(NelderMead, MaxIterReturnsBestSoFar) {
  auto f = [](std::span<const double> v) {
    return (1 - v[0]) * (1 - v[0]) + 100 * std::pow(v[1] - v[0] * v[0], 2);
  };
  SimplexConfig config;
  config.max_iter = 5;
  config.restarts = 1;
  const std::vector<double> x0{-1.2, 1.0};
  const SimplexResult r = NelderMead(f, x0, config);
  EXPECT_FALSE(r.converged);
  EXPECT_LE(r.value, f(x0));
}

TEST(NelderMead, RejectsNonFiniteStart) {
  auto f = [](std::span<const double>) { return std::nan(""); };
  const std::vector<double> x0{1.0};
  EXPECT_THROW(NelderMead(f, x0, SimplexConfig{}), Error);
}

TEST(ChiSquare, SurvivalClosedFormAtTwoDf) {
  for (double x : {0.5, 1.0, 2.0, 5.0}) {
    EXPECT_NEAR(ChiSquareSurvival(x, 2), std::exp(-x / 2), 1e-9);
  }
  EXPECT_NEAR(ChiSquareSurvival(2.0, 2), 0.367879, 1e-6);
  EXPECT_EQ(ChiSquareSurvival(0.0, 3), 1.0);
}

TEST(LognormalGof, RejectsNonPositiveAndConstant) {
  EXPECT_THROW(LognormalGof(std::vector<double>{1, 2, 0, 3}, 4), Error);
  try {
    LognormalGof(std::vector<double>(100, 5.0), 10);
    FAIL();
  } catch (const Error &e) {
    EXPECT_STREQ(e.what(), "zero variance");
  }
}

TEST(LognormalGof, BinsConserveCounts) {
  std::mt19937_64 rng(21);
  std::lognormal_distribution<double> d(1.0, 0.5);
  for (int n : {37, 100, 1000}) {
    std::vector<double> s(n);
    for (double &v : s) v = d(rng);
    const GofResult r = LognormalGof(s, 10);
    double obs = 0, exp = 0;
    for (const GofBin &b : r.bins) {
      obs += b.observed;
      exp += b.expected;
      EXPECT_GE(b.expected, 5.0 - 1e-9);
    }
    EXPECT_NEAR(obs, n, 1e-9);
    EXPECT_NEAR(exp, n, 1e-9);
    EXPECT_EQ(r.df, static_cast<int>(r.bins.size()) - 3);
    EXPECT_GE(r.statistic, 0.0);
  }
}

TEST(LognormalGof, TooFewBinsAfterMerge) {
  std::vector<double> s{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  EXPECT_THROW(LognormalGof(s, 10), Error);
}

TEST(LognormalGof, FitsTrueLognormal) {
  std::mt19937_64 rng(42);
  std::lognormal_distribution<double> d(1.0, 0.5);
  std::vector<double> s(10000);
  for (double &v : s) v = d(rng);
  const GofResult r = LognormalGof(s, 20);
  EXPECT_NEAR(r.mu, 1.0, 0.02);
  EXPECT_NEAR(r.sigma, 0.5, 0.02);
  EXPECT_EQ(r.df, 17);
}

}  // namespace
}  // namespace wikirank::stats
