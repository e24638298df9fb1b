#pragma once

// The mixed Poisson law Poi(Z Z') with Z, Z' independent Exp(1): the
// Gompertz constant, exact and quadrature PMFs, moments and a sampler.

#include <cstdint>
#include <vector>

#include "hyperpaths/numeric.hpp"
#include "hyperpaths/rng.hpp"

namespace hyperpaths {

inline constexpr int kMaxDeltaDigits = 50;
inline constexpr int kMaxExactPmf = 30;
inline constexpr int kMaxMomentOrder = 20;

/// delta = int_0^inf e^{-z} / (1 + z) dz with absolute error below 10^{-digits}.
HighReal gompertz_delta(int digits = 40);

/// m_k = E[(1+Z)^{-k}] written as alpha_k * delta + beta_k.
struct AffineInDelta {
  Rational a;
  Rational b;
};

struct LimitLawContext {
  HighReal delta;
  std::vector<HighReal> m;               // m[k-1] = m_k, k = 1..max_x+1
  std::vector<AffineInDelta> m_coeffs;   // same indexing
  std::vector<AffineInDelta> coeffs;     // coeffs[x]: P(X = x) = A_x delta + B_x

  int max_x() const noexcept { return static_cast<int>(coeffs.size()) - 1; }
};

/// Builds the context for x = 0..max_x (max_x <= 30).
LimitLawContext make_limit_context(int max_x = kMaxExactPmf, int digits = 40);

struct PmfValue {
  double value;
  AffineInDelta coeffs;
};

/// P(X = x) from the alternating m_k expansion. Requires x <= ctx.max_x().
PmfValue pmf_exact(int x, const LimitLawContext& ctx);

/// P(X = x) = int_0^inf z^x (1+z)^{-(x+1)} e^{-z} dz by adaptive quadrature.
double pmf_quadrature(int x);

/// P(X > x) = int_0^inf (z / (1+z))^{x+1} e^{-z} dz.
double tail_quadrature(int x);

/// E[(1+Z)^{-k}] by direct quadrature.
double negative_moment_quadrature(int k);

/// E[X^k] = sum_j S(k, j) (j!)^2, exact. Requires 1 <= k <= 20.
BigInt moment(int k);

/// Poisson(mean) by sequential-search inversion for mean <= 30 and PTRS
/// transformed rejection above.
std::uint64_t sample_poisson(double mean, CounterRng& rng);

/// One draw of X. Consumes uniforms from rng.
std::uint64_t sample_limit(CounterRng& rng);

}  // namespace hyperpaths
