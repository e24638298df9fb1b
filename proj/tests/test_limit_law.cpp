#include <gtest/gtest.h>

#include <cmath>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/expint.hpp>

#include "calibration.hpp"
#include "hyperpaths/errors.hpp"
#include "hyperpaths/limit_law.hpp"

using namespace hyperpaths;

namespace {

const LimitLawContext& ctx() {
  static const LimitLawContext c = make_limit_context(kMaxExactPmf, 40);
  return c;
}

// Coefficients of sum_k C(x,k) (delta - sum_{r<k} (-1)^r r!) / k!.
AffineInDelta closed_form_coeffs(int x) {
  AffineInDelta out{0, 0};
  for (int k = 0; k <= x; ++k) {
    const Rational w = Rational(binomial_big(static_cast<unsigned>(x), static_cast<unsigned>(k))) /
                       Rational(factorial_big(static_cast<unsigned>(k)));
    BigInt alt = 0;
    for (int r = 0; r < k; ++r) alt += (r % 2 ? -1 : 1) * factorial_big(static_cast<unsigned>(r));
    out.a += w;
    out.b -= w * Rational(alt);
  }
  return out;
}

}  // namespace

TEST(Gompertz, SixDigits) {
  EXPECT_NEAR(gompertz_delta(12).convert_to<double>(), 0.596347, 5e-7);
}

TEST(Gompertz, IndependentOracles) {
  const double delta = gompertz_delta(20).convert_to<double>();
  boost::math::quadrature::exp_sinh<double> integrator;
  const double other = integrator.integrate([](double z) { return std::exp(-z) / (1 + z); });
  EXPECT_NEAR(delta, other, 1e-12);
  const double e_e1 = boost::math::constants::e<double>() * boost::math::expint(1, 1.0);
  EXPECT_NEAR(delta, e_e1, 1e-14);
  const double complement = integrator.integrate([](double z) { return z / (1 + z) * std::exp(-z); });
  EXPECT_NEAR(1 - delta, complement, 1e-12);
}

TEST(Gompertz, HighPrecision) {
  // e E_1(1) in 64-digit arithmetic.
  const HighReal expected = boost::math::constants::e<HighReal>() * boost::math::expint(1, HighReal(1));
  for (int digits : {10, 30, 45}) {
    const HighReal err = abs(gompertz_delta(digits) - expected);
    EXPECT_LT(err, pow(HighReal(10), -digits)) << digits;
  }
  EXPECT_THROW(gompertz_delta(51), GuardError);
  EXPECT_THROW(gompertz_delta(0), GuardError);
}

TEST(NegativeMoments, RecursionAndQuadrature) {
  const auto& m = ctx().m;
  ASSERT_GE(m.size(), 31u);
  EXPECT_EQ(m[0], ctx().delta);
  for (std::size_t k = 1; k < m.size(); ++k) {
    EXPECT_LT(abs(m[k] - (1 - m[k - 1]) / static_cast<int>(k)), HighReal(1e-35));
    EXPECT_LT(m[k], m[k - 1]);
    EXPECT_GT(m[k], 0);
  }
  for (int k = 1; k <= 30; ++k) {
    EXPECT_NEAR(m[static_cast<std::size_t>(k - 1)].convert_to<double>(), negative_moment_quadrature(k), 1e-10) << k;
  }
}

TEST(PmfExact, FirstSixValues) {
  const std::vector<std::pair<Rational, Rational>> coeffs{
      {1, 0}, {2, -1}, {Rational(7, 2), -2}, {Rational(17, 3), Rational(-10, 3)},
      {Rational(209, 24), Rational(-31, 6)}, {Rational(773, 60), Rational(-23, 3)}};
  const std::vector<double> decimals{0.596347, 0.192695, 0.087216, 0.045968, 0.026525, 0.016275};
  for (int x = 0; x <= 5; ++x) {
    const PmfValue v = pmf_exact(x, ctx());
    EXPECT_EQ(v.coeffs.a, coeffs[static_cast<std::size_t>(x)].first) << x;
    EXPECT_EQ(v.coeffs.b, coeffs[static_cast<std::size_t>(x)].second) << x;
    EXPECT_NEAR(v.value, decimals[static_cast<std::size_t>(x)], 5e-7) << x;
  }
}

TEST(PmfExact, CoefficientIdentity) {
  for (int x = 0; x <= kMaxExactPmf; ++x) {
    const AffineInDelta expected = closed_form_coeffs(x);
    const PmfValue v = pmf_exact(x, ctx());
    EXPECT_EQ(v.coeffs.a, expected.a) << x;
    EXPECT_EQ(v.coeffs.b, expected.b) << x;
  }
}

TEST(PmfExact, Guards) {
  EXPECT_THROW(pmf_exact(31, ctx()), GuardError);
  EXPECT_THROW(make_limit_context(31), GuardError);
  EXPECT_THROW(pmf_exact(-1, ctx()), std::invalid_argument);
}

TEST(PmfQuadrature, LargeX) {
  EXPECT_NEAR(pmf_quadrature(100) / 1.78264e-9, 1.0, 1e-4);
  EXPECT_NEAR(pmf_quadrature(200) / 3.85980e-13, 1.0, 1e-4);
  // Closed-form alternating sum in 1500-digit arithmetic gives 6.10382572311e-16 here.
  EXPECT_NEAR(pmf_quadrature(300) / 6.10382572311e-16, 1.0, 1e-4);
}

TEST(PmfQuadrature, AgreesWithExact) {
  for (int x = 0; x <= 30; ++x) {
    const double exact = pmf_exact(x, ctx()).value;
    if (x <= 20) EXPECT_NEAR(pmf_quadrature(x), exact, 1e-10) << x;
    EXPECT_NEAR(pmf_quadrature(x) / exact, 1.0, 1e-6) << x;
  }
}

TEST(PmfQuadrature, NormalizationAndMonotoneTail) {
  double total = 0;
  double previous = 1;
  for (int x = 0; x <= 500; ++x) {
    const double p = pmf_quadrature(x);
    ASSERT_GT(p, 0.0);
    ASSERT_LT(p, 1.0);
    if (x >= 2) ASSERT_LT(p, previous) << x;
    previous = p;
    total += p;
  }
  total += tail_quadrature(500);
  EXPECT_NEAR(total, 1.0, 1e-8);
}

TEST(PmfQuadrature, TailIsConsistent) {
  for (int x : {0, 3, 10, 50}) {
    double rest = 0;
    for (int y = x + 1; y <= 3000; ++y) rest += pmf_quadrature(y);
    EXPECT_NEAR(tail_quadrature(x) / rest, 1.0, 1e-7) << x;
  }
}

TEST(Moment, StirlingValues) {
  EXPECT_EQ(moment(1), 1);
  EXPECT_EQ(moment(2), 5);
  EXPECT_EQ(moment(3), 49);
  EXPECT_EQ(moment(4), 821);
  EXPECT_THROW(moment(21), GuardError);
  EXPECT_THROW(moment(0), GuardError);
}

TEST(Moment, MatchesPmfSeries) {
  std::vector<double> p;
  for (int x = 0; x <= 6000; ++x) p.push_back(pmf_quadrature(x));
  for (int k = 1; k <= 4; ++k) {
    double sum = 0;
    for (int x = 6000; x >= 0; --x) sum += std::pow(static_cast<double>(x), k) * p[static_cast<std::size_t>(x)];
    EXPECT_NEAR(sum / moment(k).convert_to<double>(), 1.0, 1e-7) << k;
  }
}

TEST(Sampler, PoissonInversionAndRejection) {
  for (double mean : {0.3, 4.0, 29.0, 31.0, 200.0, 5000.0}) {
    CounterRng rng(17, static_cast<std::uint64_t>(mean * 10));
    const int draws = 200'000;
    double s = 0;
    double s2 = 0;
    for (int i = 0; i < draws; ++i) {
      const double x = static_cast<double>(sample_poisson(mean, rng));
      s += x;
      s2 += x * x;
    }
    const double m = s / draws;
    const double var = s2 / draws - m * m;
    EXPECT_NEAR(m, mean, 4 * std::sqrt(mean / draws)) << mean;
    // Var of the sample variance is about 2 mean^2 / draws for large means.
    EXPECT_NEAR(var / mean, 1.0, 4 * std::sqrt((2 * mean + 1) / mean / draws) + 1e-3) << mean;
  }
  CounterRng rng(1, 0);
  EXPECT_EQ(sample_poisson(0.0, rng), 0u);
  EXPECT_THROW(sample_poisson(-1.0, rng), std::invalid_argument);
}

TEST(Sampler, PoissonPmfAtLargeMean) {
  const double mean = 60;
  CounterRng rng(3, 3);
  const int draws = 500'000;
  std::vector<int> counts(200, 0);
  for (int i = 0; i < draws; ++i) {
    const auto x = sample_poisson(mean, rng);
    if (x < counts.size()) ++counts[x];
  }
  for (int x = 40; x <= 80; x += 5) {
    const double p = std::exp(-mean + x * std::log(mean) - std::lgamma(x + 1.0));
    EXPECT_NEAR(counts[static_cast<std::size_t>(x)] / static_cast<double>(draws), p, 4 * std::sqrt(p / draws)) << x;
  }
}

TEST(Sampler, LimitLawStatistics) {
  CounterRng rng(2024, 0);
  const int draws = 10'000'000;
  double zeros = 0;
  double s1 = 0;
  double s2 = 0;
  double s4 = 0;
  for (int i = 0; i < draws; ++i) {
    const double x = static_cast<double>(sample_limit(rng));
    zeros += x == 0;
    s1 += x;
    s2 += x * x;
    s4 += x * x * x * x;
  }
  const double delta = ctx().delta.convert_to<double>();
  EXPECT_NEAR(zeros / draws, delta, 3 * std::sqrt(delta * (1 - delta) / draws));
  const double var1 = s2 / draws - std::pow(s1 / draws, 2);
  EXPECT_NEAR(s1 / draws, 1.0, 3 * std::sqrt(var1 / draws));
  const double var2 = s4 / draws - std::pow(s2 / draws, 2);
  EXPECT_NEAR(s2 / draws, 5.0, 3 * std::sqrt(var2 / draws));
}

TEST(Sampler, HeavyTail) {
  CounterRng rng(99, 0);
  const std::uint64_t draws = 100'000'000;
  std::uint64_t above = 0;
  for (std::uint64_t i = 0; i < draws; ++i) above += sample_limit(rng) > 100;
  ASSERT_GT(above, 0u) << "no draw above 100";
  const double log_p = std::log(static_cast<double>(above) / static_cast<double>(draws));
  EXPECT_GE(log_p, -calibration::kTailSlack * std::sqrt(100.0));
}

TEST(Sampler, Reproducible) {
  CounterRng a(5, 1);
  CounterRng b(5, 1);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(sample_limit(a), sample_limit(b));
}
