#include "hyperpaths/pair_combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "hyperpaths/errors.hpp"
#include "hyperpaths/hypercube.hpp"

namespace hyperpaths {
namespace {

void require_valid(int n, int s, int g) {
  if (n < 1 || !is_valid_overlap_class(n, s, g)) {
    throw std::invalid_argument("invalid overlap class (s, g) = (" + std::to_string(s) + ", " +
                                std::to_string(g) + ") for n = " + std::to_string(n));
  }
}

// log(w_x C(2x, x)) = log rho_x + log (2x)! - log x!
std::vector<double> log_gap_weights(const WnTable& table, int max_x) {
  if (table.max_index() < max_x) throw std::invalid_argument("w table too short");
  std::vector<double> out(static_cast<std::size_t>(max_x) + 1);
  for (int x = 0; x <= max_x; ++x) {
    const double rho = table.ratio[static_cast<std::size_t>(x)];
    out[static_cast<std::size_t>(x)] =
        rho > 0 ? std::log(rho) + log_factorial(2.0 * x) - log_factorial(x) : -INFINITY;
  }
  return out;
}

WnTable table_for(int m) { return m <= kMaxExactWn ? w_exact(m) : w_ratio(m); }

// Log of the sum over compositions of `total` into `parts` parts >= 2 of
// prod exp(logw[x_i]).
double log_composition_sum(const std::vector<double>& logw, int total, int parts) {
  LogSum acc;
  std::vector<int> x(static_cast<std::size_t>(parts));
  auto rec = [&](auto&& self, int j, int left, double partial) -> void {
    if (j == parts - 1) {
      acc.add(partial + logw[static_cast<std::size_t>(left)]);
      return;
    }
    const int remaining = parts - j - 1;
    for (int v = 2; v <= left - 2 * remaining; ++v) self(self, j + 1, left - v, partial + logw[static_cast<std::size_t>(v)]);
  };
  rec(rec, 0, total, 0.0);
  return acc.log_value();
}

}  // namespace

WnTable w_exact(int max_index) {
  if (max_index < 0) throw std::invalid_argument("max_index must be nonnegative");
  if (max_index > kMaxExactWn) {
    throw GuardError("exact w table supports N <= " + std::to_string(kMaxExactWn) + "; use ratio mode");
  }
  const auto N = static_cast<std::size_t>(max_index);
  std::vector<BigInt> fact(N + 1);
  fact[0] = 1;
  for (std::size_t i = 1; i <= N; ++i) fact[i] = fact[i - 1] * i;

  WnTable t;
  t.exact.resize(N + 1);
  t.ratio.resize(N + 1);
  for (std::size_t n = 0; n <= N; ++n) {
    BigInt w = fact[n];
    for (std::size_t k = 1; k <= n; ++k) w -= t.exact[k - 1] * fact[n - k];
    t.exact[n] = w;
    t.ratio[n] = n == 0 ? 1.0 : Rational(w, fact[n]).convert_to<double>();
  }
  return t;
}

WnTable w_ratio(int max_index) {
  if (max_index < 0) throw std::invalid_argument("max_index must be nonnegative");
  const auto N = static_cast<std::size_t>(max_index);
  WnTable t;
  t.ratio.resize(N + 1);
  t.ratio[0] = 1.0;
  constexpr double kNegligible = 1e-20;
  for (std::size_t n = 1; n <= N; ++n) {
    const double dn = static_cast<double>(n);
    // term(k) = (k-1)! (n-k)! / n! = 1 / (k C(n, k)), symmetric under k <-> n+1-k.
    double sum = 0.0;
    double term = 1.0 / dn;
    std::size_t lo = 1;
    for (; lo <= n && term >= kNegligible; ++lo) {
      sum += t.ratio[lo - 1] * term;
      term *= static_cast<double>(lo) / (dn - static_cast<double>(lo));
    }
    term = 1.0 / dn;
    for (std::size_t k = n; k >= lo && term >= kNegligible; --k) {
      sum += t.ratio[k - 1] * term;
      term *= (dn - static_cast<double>(k) + 1.0) / static_cast<double>(k - 1);
    }
    t.ratio[n] = std::max(0.0, 1.0 - sum);
  }
  return t;
}

BigInt CompositionSpec::count() const {
  if (parts < 1) return 0;
  const long long top = static_cast<long long>(total) - static_cast<long long>(min_part - 1) * parts - 1;
  if (top < parts - 1 || top < 0) return 0;
  return binomial_big(static_cast<unsigned>(top), static_cast<unsigned>(parts - 1));
}

Compositions::Compositions(CompositionSpec spec) : spec_(spec) {
  if (spec.parts < 1) throw std::invalid_argument("compositions need at least one part");
}

Compositions::iterator::iterator(CompositionSpec spec, bool done) : spec_(spec), done_(done) {
  if (done_) return;
  if (spec.count() == 0) {
    done_ = true;
    return;
  }
  current_.assign(static_cast<std::size_t>(spec.parts), spec.min_part);
  current_.back() = spec.total - spec.min_part * (spec.parts - 1);
}

Compositions::iterator& Compositions::iterator::operator++() {
  if (done_) return *this;
  const int j = spec_.parts;
  if (j == 1) {
    done_ = true;
    return *this;
  }
  int i = j - 2;
  for (; i >= 0; --i) {
    // Increment x_i if the tail after it can still absorb one less.
    int tail = 0;
    for (int q = i + 1; q < j; ++q) tail += current_[static_cast<std::size_t>(q)];
    if (tail - 1 >= spec_.min_part * (j - i - 1)) break;
  }
  if (i < 0) {
    done_ = true;
    return *this;
  }
  ++current_[static_cast<std::size_t>(i)];
  int used = 0;
  for (int q = 0; q <= i; ++q) used += current_[static_cast<std::size_t>(q)];
  for (int q = i + 1; q < j - 1; ++q) {
    current_[static_cast<std::size_t>(q)] = spec_.min_part;
    used += spec_.min_part;
  }
  current_.back() = spec_.total - used;
  return *this;
}

double CsgValue::value() const { return std::exp(log_value); }

CsgValue c_sg(int n, int s, int g, std::uint64_t budget) {
  require_valid(n, s, g);
  if (g == 0) return {s, g, 0.0, Exactness::exact};
  return c_sg(table_for(n - s), n, s, g, budget);
}

CsgValue c_sg(const WnTable& table, int n, int s, int g, std::uint64_t budget) {
  require_valid(n, s, g);
  if (g == 0) return {s, g, 0.0, Exactness::exact};
  const CompositionSpec spec{n - s, g, 2};
  if (spec.count() > budget) return {s, g, log_djk_bound(n, s, g), Exactness::upper_bound};
  const auto logw = log_gap_weights(table, n - s);
  const double log_sum = log_composition_sum(logw, n - s, g);
  const double log_prefactor = log_binomial(s + 1, g) + log_factorial(n) - log_factorial(2.0 * n - s);
  return {s, g, log_prefactor + log_sum, Exactness::exact};
}

Rational c_sg_exact(int n, int s, int g) {
  require_valid(n, s, g);
  if (n > kMaxExactPairDimension) {
    throw GuardError("exact c_sg requires n <= " + std::to_string(kMaxExactPairDimension));
  }
  if (g == 0) return Rational(1);
  const WnTable t = w_exact(n - s);
  BigInt sum = 0;
  for (const auto& x : Compositions({n - s, g, 2})) {
    BigInt prod = 1;
    for (int xi : x) prod *= t.exact[static_cast<std::size_t>(xi)] * binomial_big(static_cast<unsigned>(2 * xi), static_cast<unsigned>(xi));
    sum += prod;
  }
  const BigInt num = binomial_big(static_cast<unsigned>(s + 1), static_cast<unsigned>(g)) *
                     factorial_big(static_cast<unsigned>(n)) * sum;
  return Rational(num, factorial_big(static_cast<unsigned>(2 * n - s)));
}

double log_djk_bound(int n, int s, int g) {
  require_valid(n, s, g);
  if (g < 1) throw std::invalid_argument("djk bound requires g >= 1");
  const int spare = n - s - g;
  return log_binomial(2.0 * (n - s), n - s) - log_binomial(2.0 * n - s, n) + log_binomial(s + 1, g) +
         (g - 1) * std::log(2.0) - log_factorial(g - 1) - (g - 1) * std::log(static_cast<double>(spare));
}

double djk_bound(int n, int s, int g) { return std::exp(log_djk_bound(n, s, g)); }

double f_exponent(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("f_exponent requires x in [0, 1]");
  if (x == 1.0) return 0.0;
  return (2.0 - x) * std::log(2.0 - x) - (1.0 - x) * std::log(4.0 * (1.0 - x));
}

PairSums pair_sums(int n, int k, std::uint64_t budget) {
  if (n < 2) throw std::invalid_argument("pair_sums requires n >= 2");
  if (k < 0 || k > n - 2) {
    throw std::invalid_argument("pair_sums requires 0 <= k <= n - 2, got k = " + std::to_string(k));
  }
  const WnTable table = table_for(n);
  PairSums out{n, k, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, false};
  for (int s = 0; s <= n - 2; ++s) {
    const double v = c_sg(table, n, s, 1, budget).value();
    (s <= k ? out.single_gap_head : out.single_gap_tail) += v;
  }
  for (int s = 0; s <= n - 4; ++s) {
    const int gmax = std::min(s + 1, (n - s) / 2);
    for (int g = 2; g <= gmax; ++g) {
      const CsgValue v = c_sg(table, n, s, g, budget);
      if (v.exactness == Exactness::exact) {
        out.multi_gap_lower += v.value();
        out.multi_gap_upper += v.value();
      } else {
        out.truncated = true;
        out.multi_gap_upper += v.value();
      }
    }
  }
  const double base = 1.0 + out.single_gap_head + out.single_gap_tail;
  out.second_moment_lower = base + out.multi_gap_lower;
  out.second_moment_upper = base + out.multi_gap_upper;
  return out;
}

Rational second_moment_exact(int n) {
  if (n < 1 || n > kMaxExactPairDimension) {
    throw GuardError("exact second moment requires 1 <= n <= " + std::to_string(kMaxExactPairDimension));
  }
  Rational total = 0;
  for (int s = 0; s <= n; ++s) {
    for (int g = 0; g <= s + 1; ++g) {
      if (is_valid_overlap_class(n, s, g)) total += c_sg_exact(n, s, g);
    }
  }
  return total;
}

std::vector<CsgGridRow> csg_grid(int n, std::uint64_t budget) {
  if (n < 2) throw std::invalid_argument("csg_grid requires n >= 2");
  const WnTable table = table_for(n);
  std::vector<CsgGridRow> rows;
  for (int s = 0; s <= n - 2; ++s) {
    const int gmax = std::min(s + 1, (n - s) / 2);
    for (int g = 1; g <= gmax; ++g) rows.push_back({s, g, c_sg(table, n, s, g, budget)});
  }
  return rows;
}

}  // namespace hyperpaths
