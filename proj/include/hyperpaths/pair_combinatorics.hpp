#pragma once

// Second-moment combinatorics of accessible path pairs: the edge-disjoint
// path counts w_n, integer compositions, the pair sums c_{s,g}, their upper
// bound, and the assembled E[X_n^2].

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <vector>

#include "hyperpaths/numeric.hpp"

namespace hyperpaths {

inline constexpr int kMaxExactWn = 500;
inline constexpr int kMaxExactPairDimension = 16;
inline constexpr std::uint64_t kDefaultCompositionBudget = 1'000'000;

/// w_n = number of full paths edge-disjoint from the canonical path, and
/// rho_n = w_n / n!.
struct WnTable {
  std::vector<BigInt> exact;  // empty in ratio mode
  std::vector<double> ratio;

  int max_index() const noexcept { return static_cast<int>(ratio.size()) - 1; }
};

/// Exact table w_0..w_N from n! = w_n + sum_{k=1}^{n} w_{k-1} (n-k)!. N <= 500.
WnTable w_exact(int max_index);
/// rho_0..rho_N in floating point from 1 = rho_n + sum_k rho_{k-1} / (k C(n,k)).
WnTable w_ratio(int max_index);

/// Compositions of `total` into `parts` parts, each at least `min_part`.
struct CompositionSpec {
  int total;
  int parts;
  int min_part;

  /// C(total - (min_part - 1) parts - 1, parts - 1), or 0 when infeasible.
  BigInt count() const;
};

/// Lexicographic enumeration of a CompositionSpec.
class Compositions {
 public:
  explicit Compositions(CompositionSpec spec);

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = std::vector<int>;
    using difference_type = std::ptrdiff_t;
    using pointer = const std::vector<int>*;
    using reference = const std::vector<int>&;

    iterator() = default;
    reference operator*() const noexcept { return current_; }
    pointer operator->() const noexcept { return &current_; }
    iterator& operator++();
    void operator++(int) { ++*this; }
    friend bool operator==(const iterator& a, const iterator& b) noexcept { return a.done_ == b.done_; }

   private:
    friend class Compositions;
    iterator(CompositionSpec spec, bool done);
    CompositionSpec spec_{0, 1, 0};
    std::vector<int> current_;
    bool done_ = true;
  };

  iterator begin() const { return iterator(spec_, false); }
  iterator end() const { return iterator(spec_, true); }

 private:
  CompositionSpec spec_;
};

enum class Exactness { exact, upper_bound };

struct CsgValue {
  int s;
  int g;
  double log_value;
  Exactness exactness;

  double value() const;
};

/// c_{s,g}: expected number of ordered accessible pairs sharing s edges in g
/// gaps. Evaluated in log space by enumerating compositions when there are at
/// most `budget` of them; otherwise the upper bound is returned and flagged.
CsgValue c_sg(int n, int s, int g, std::uint64_t budget = kDefaultCompositionBudget);
/// Same with a caller-supplied rho table (must cover index n - s).
CsgValue c_sg(const WnTable& table, int n, int s, int g, std::uint64_t budget = kDefaultCompositionBudget);

/// Exact rational c_{s,g} for n <= 16.
Rational c_sg_exact(int n, int s, int g);

/// Upper bound C(2(n-s), n-s)/C(2n-s, n) * C(s+1, g) * 2^{g-1} / ((g-1)! (n-s-g)^{g-1}).
/// Returns +inf when n - s - g = 0.
double djk_bound(int n, int s, int g);
double log_djk_bound(int n, int s, int g);

/// f(x) = log((2-x)^{2-x} / (4(1-x))^{1-x}) on [0, 1], with f(1) = 0.
double f_exponent(double x);

struct PairSums {
  int n;
  int k;
  double single_gap_head;  // s = 0..k, g = 1
  double single_gap_tail;  // s = k+1..n-2, g = 1
  double multi_gap_lower;  // g >= 2, exactly evaluated part
  double multi_gap_upper;  // plus bounds for truncated terms
  double second_moment_lower;
  double second_moment_upper;
  bool truncated;
};

/// Requires 0 <= k <= max(n - 2, 0).
PairSums pair_sums(int n, int k, std::uint64_t budget = kDefaultCompositionBudget);

/// Exact E[X_n^2] = 1 + sum over all valid (s, g) of c_{s,g}, n <= 16.
Rational second_moment_exact(int n);

struct CsgGridRow {
  int s;
  int g;
  CsgValue value;
};

/// c_{s,g} over the whole valid region except the diagonal (s, g) = (n, 0).
std::vector<CsgGridRow> csg_grid(int n, std::uint64_t budget = kDefaultCompositionBudget);

}  // namespace hyperpaths
