#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace hyperpaths {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
/// Roughly 64 significant decimal digits.
using HighReal = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<64>>;

BigInt factorial_big(unsigned n);
BigInt binomial_big(unsigned n, unsigned k);

inline double log_factorial(double n) { return std::lgamma(n + 1.0); }

inline double log_binomial(double n, double k) {
  if (k < 0 || k > n) return -INFINITY;
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

/// Numerator/denominator as "p/q" (or "p" when q = 1).
std::string to_string(const Rational& q);

/// Online log-sum-exp accumulator.
class LogSum {
 public:
  void add(double log_term) noexcept {
    if (log_term == -INFINITY) return;
    if (log_term > max_) {
      sum_ = sum_ * std::exp(max_ - log_term) + 1.0;
      max_ = log_term;
    } else {
      sum_ += std::exp(log_term - max_);
    }
  }
  double log_value() const noexcept { return sum_ == 0.0 ? -INFINITY : max_ + std::log(sum_); }
  double value() const noexcept { return std::exp(log_value()); }

 private:
  double max_ = -INFINITY;
  double sum_ = 0.0;
};

}  // namespace hyperpaths
