#include "hyperpaths/limit_law.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hyperpaths/errors.hpp"

namespace hyperpaths {
namespace {

using boost::math::quadrature::gauss_kronrod;

// Integrates exp(log_f(z)) over [0, inf), split at `peak` so both panels see
// a unimodal integrand.
template <class LogF>
double integrate_log_space(LogF log_f, double peak) {
  auto f = [&](double z) {
    const double v = log_f(z);
    return v == -INFINITY ? 0.0 : std::exp(v);
  };
  constexpr double kTol = 1e-13;
  const double left = peak > 0 ? gauss_kronrod<double, 61>::integrate(f, 0.0, peak, 20, kTol) : 0.0;
  const double right =
      gauss_kronrod<double, 61>::integrate(f, peak, std::numeric_limits<double>::infinity(), 20, kTol);
  return left + right;
}

}  // namespace

HighReal gompertz_delta(int digits) {
  if (digits < 1 || digits > kMaxDeltaDigits) {
    throw GuardError("gompertz_delta supports 1 to " + std::to_string(kMaxDeltaDigits) + " digits");
  }
  // z = t / (1 - t): e^{-z} / (1 + z) dz = e^{-t/(1-t)} / (1 - t) dt on [0, 1).
  auto f = [](const HighReal& t) -> HighReal {
    const HighReal one_minus = 1 - t;
    if (one_minus <= 0) return HighReal(0);
    return exp(-t / one_minus) / one_minus;
  };
  const HighReal tol = pow(HighReal(10), -(digits + 2));
  return gauss_kronrod<HighReal, 61>::integrate(f, HighReal(0), HighReal(1), 30, tol);
}

LimitLawContext make_limit_context(int max_x, int digits) {
  if (max_x < 0 || max_x > kMaxExactPmf) {
    throw GuardError("exact pmf coefficients are available for x <= " + std::to_string(kMaxExactPmf));
  }
  LimitLawContext ctx;
  ctx.delta = gompertz_delta(digits);
  const int kmax = max_x + 1;
  ctx.m_coeffs.reserve(static_cast<std::size_t>(kmax));
  ctx.m_coeffs.push_back({Rational(1), Rational(0)});
  for (int k = 1; k < kmax; ++k) {
    const auto& prev = ctx.m_coeffs.back();
    ctx.m_coeffs.push_back({-prev.a / k, (1 - prev.b) / k});
  }
  for (const auto& c : ctx.m_coeffs) {
    ctx.m.push_back(HighReal(c.a) * ctx.delta + HighReal(c.b));
  }
  for (int x = 0; x <= max_x; ++x) {
    AffineInDelta p{Rational(0), Rational(0)};
    for (int k = 0; k <= x; ++k) {
      const Rational w = Rational(binomial_big(static_cast<unsigned>(x), static_cast<unsigned>(k))) * (k % 2 ? -1 : 1);
      p.a += w * ctx.m_coeffs[static_cast<std::size_t>(k)].a;
      p.b += w * ctx.m_coeffs[static_cast<std::size_t>(k)].b;
    }
    ctx.coeffs.push_back(p);
  }
  return ctx;
}

PmfValue pmf_exact(int x, const LimitLawContext& ctx) {
  if (x < 0) throw std::invalid_argument("x must be nonnegative");
  if (x > ctx.max_x()) {
    throw GuardError("exact pmf is limited to x <= " + std::to_string(ctx.max_x()) + "; use quadrature");
  }
  const AffineInDelta& c = ctx.coeffs[static_cast<std::size_t>(x)];
  const HighReal v = HighReal(c.a) * ctx.delta + HighReal(c.b);
  return {v.convert_to<double>(), c};
}

double pmf_quadrature(int x) {
  if (x < 0) throw std::invalid_argument("x must be nonnegative");
  const double dx = x;
  auto log_f = [dx](double z) {
    if (z <= 0) return dx == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    if (dx == 0) return -std::log1p(z) - z;
    return -dx * std::log1p(1.0 / z) - std::log1p(z) - z;
  };
  return integrate_log_space(log_f, std::sqrt(dx));
}

double tail_quadrature(int x) {
  if (x < 0) throw std::invalid_argument("x must be nonnegative");
  const double e = x + 1.0;
  auto log_f = [e](double z) {
    if (z <= 0) return -std::numeric_limits<double>::infinity();
    return -e * std::log1p(1.0 / z) - z;
  };
  return integrate_log_space(log_f, std::sqrt(e));
}

double negative_moment_quadrature(int k) {
  if (k < 0) throw std::invalid_argument("k must be nonnegative");
  const double dk = k;
  return integrate_log_space([dk](double z) { return -dk * std::log1p(z) - z; }, 0.0);
}

BigInt moment(int k) {
  if (k < 1 || k > kMaxMomentOrder) {
    throw GuardError("moment order must lie in [1, " + std::to_string(kMaxMomentOrder) + "]");
  }
  // Stirling numbers of the second kind, row by row.
  std::vector<BigInt> row{BigInt(1)};  // S(0, 0)
  for (int i = 1; i <= k; ++i) {
    std::vector<BigInt> next(static_cast<std::size_t>(i) + 1, 0);
    for (int j = 1; j <= i; ++j) {
      const BigInt same = j < static_cast<int>(row.size()) ? row[static_cast<std::size_t>(j)] * j : BigInt(0);
      next[static_cast<std::size_t>(j)] = same + row[static_cast<std::size_t>(j - 1)];
    }
    row.swap(next);
  }
  BigInt total = 0;
  BigInt fact = 1;
  for (int j = 1; j <= k; ++j) {
    fact *= j;
    total += row[static_cast<std::size_t>(j)] * fact * fact;
  }
  return total;
}

std::uint64_t sample_poisson(double mean, CounterRng& rng) {
  if (!(mean >= 0) || !std::isfinite(mean)) throw std::invalid_argument("Poisson mean must be finite and >= 0");
  if (mean == 0) return 0;
  if (mean <= 30) {
    const double u = rng.uniform();
    double p = std::exp(-mean);
    double cdf = p;
    std::uint64_t x = 0;
    while (u > cdf && p > 0) {
      ++x;
      p *= mean / static_cast<double>(x);
      cdf += p;
    }
    return x;
  }
  // Hormann (1993), PTRS.
  const double smu = std::sqrt(mean);
  const double b = 0.931 + 2.53 * smu;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2);
  const double log_mean = std::log(mean);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
    if (k < 0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -mean + k * log_mean - std::lgamma(k + 1)) {
      return static_cast<std::uint64_t>(k);
    }
  }
}

std::uint64_t sample_limit(CounterRng& rng) {
  const double z = rng.exponential();
  const double zp = rng.exponential();
  return sample_poisson(z * zp, rng);
}

}  // namespace hyperpaths
