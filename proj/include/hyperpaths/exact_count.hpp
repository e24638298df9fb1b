#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hyperpaths/hypercube.hpp"
#include "hyperpaths/numeric.hpp"

namespace hyperpaths {

inline constexpr int kMaxDpDimension = 24;
inline constexpr int kMaxBruteForceDimension = 10;
inline constexpr std::size_t kDefaultListLimit = 1'000'000;

/// Number of accessible paths from the empty set to `subset` whose last step
/// adds `last_direction`.
struct DpState {
  Vertex subset;
  int last_direction;
  std::uint64_t count;
};

/// X_n for the realised weights via the subset recursion over
/// (subset, last direction). Counts are checked 64-bit; an overflow raises
/// GuardError rather than wrapping. Requires 1 <= n <= 24.
std::uint64_t count_accessible_dp(int n, const WeightOracle& oracle);

/// The DP states at the top vertex [n], one per last direction.
std::vector<DpState> top_states(int n, const WeightOracle& oracle);

/// Tests all n! permutations. Requires n <= 10.
std::uint64_t count_accessible_bruteforce(int n, const WeightOracle& oracle);

/// All accessible full paths, recovered by backtracking through the DP.
/// Raises GuardError if more than `limit` paths exist.
std::vector<DirectPath> list_accessible(int n, const WeightOracle& oracle,
                                        std::size_t limit = kDefaultListLimit);

/// P(pi and ref both accessible) = prod C(2 a_i, a_i) / (2n - s)! from the gap vector.
Rational joint_prob_formula(const GapEncoding& enc, int n);

/// Same probability by counting the orderings of the union of both edge sets
/// under which both paths increase. The union may hold at most 12 edges.
Rational joint_prob_bruteforce(const DirectPath& pi, const DirectPath& ref);

}  // namespace hyperpaths
