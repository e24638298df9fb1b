#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "hyperpaths/errors.hpp"
#include "hyperpaths/exact_count.hpp"
#include "hyperpaths/experiments.hpp"

using namespace hyperpaths;

namespace {

std::vector<DirectPath> all_full_paths(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 1);
  std::vector<DirectPath> out;
  do out.push_back(DirectPath::from_permutation(n, p));
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// Seeds whose n = 2 weights realise a requested pattern.
std::uint64_t find_seed_n2(bool first_increasing, bool second_increasing) {
  for (std::uint64_t seed = 0;; ++seed) {
    const WeightOracle o(seed, 2);
    const bool a = is_accessible(DirectPath::from_permutation(2, {1, 2}), o);
    const bool b = is_accessible(DirectPath::from_permutation(2, {2, 1}), o);
    if (a == first_increasing && b == second_increasing) return seed;
  }
}

}  // namespace

TEST(CountDp, DimensionOneIsAlwaysOne) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) EXPECT_EQ(count_accessible_dp(1, WeightOracle(seed, 1)), 1u);
}

TEST(CountDp, GuardsDimension) {
  EXPECT_THROW(count_accessible_dp(25, WeightOracle(0, 25)), GuardError);
  EXPECT_THROW(count_accessible_dp(0, WeightOracle(0, 1)), GuardError);
  EXPECT_THROW(count_accessible_bruteforce(11, WeightOracle(0, 11)), GuardError);
  EXPECT_THROW(count_accessible_dp(5, WeightOracle(0, 6)), std::invalid_argument);
}

TEST(CountDp, MatchesBruteForce) {
  for (int n = 2; n <= 8; ++n) {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
      const WeightOracle o(seed * 7919 + static_cast<std::uint64_t>(n), n);
      ASSERT_EQ(count_accessible_dp(n, o), count_accessible_bruteforce(n, o)) << "n=" << n << " seed=" << seed;
    }
  }
}

TEST(CountBruteForce, TwoDimensionalCases) {
  EXPECT_EQ(count_accessible_bruteforce(2, WeightOracle(find_seed_n2(true, false), 2)), 1u);
  EXPECT_EQ(count_accessible_bruteforce(2, WeightOracle(find_seed_n2(true, true), 2)), 2u);
  EXPECT_EQ(count_accessible_bruteforce(2, WeightOracle(find_seed_n2(false, false), 2)), 0u);
}

TEST(CountDp, TopStatesSumToCount) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const WeightOracle o(seed, 9);
    std::uint64_t total = 0;
    for (const DpState& s : top_states(9, o)) {
      EXPECT_EQ(s.subset, Vertex::full(9));
      EXPECT_TRUE(s.subset.contains(s.last_direction));
      EXPECT_LE(s.count, 40320u);
      total += s.count;
    }
    EXPECT_EQ(total, count_accessible_dp(9, o));
  }
}

TEST(CountDp, MeanIsOneAtTen) {
  const auto xs = sample_xn(10, 100'000, 0, 1);
  std::vector<double> v(xs.begin(), xs.end());
  const double mean = sample_mean(v);
  const double se = sample_stderr(v);
  EXPECT_NEAR(mean, 1.0, 3 * se) << "mean " << mean << " se " << se;
}

TEST(ListAccessible, DimensionOne) {
  const auto paths = list_accessible(1, WeightOracle(3, 1));
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_EQ(paths.front(), DirectPath::canonical(1));
}

TEST(ListAccessible, MatchesBruteForceSet) {
  for (int n = 2; n <= 8; ++n) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      const WeightOracle o(seed + 1000, n);
      const auto listed = list_accessible(n, o);
      ASSERT_EQ(listed.size(), count_accessible_dp(n, o));
      std::set<DirectPath> unique(listed.begin(), listed.end());
      ASSERT_EQ(unique.size(), listed.size());
      std::set<DirectPath> brute;
      for (const auto& p : all_full_paths(n)) {
        if (is_accessible(p, o)) brute.insert(p);
      }
      ASSERT_EQ(unique, brute);
    }
  }
}

TEST(ListAccessible, LargerDimensionConsistency) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const WeightOracle o(seed, 16);
    const auto listed = list_accessible(16, o);
    EXPECT_EQ(listed.size(), count_accessible_dp(16, o));
    for (const auto& p : listed) ASSERT_TRUE(is_accessible(p, o));
  }
}

TEST(ListAccessible, LimitGuard) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const WeightOracle o(seed, 8);
    if (count_accessible_dp(8, o) >= 2) {
      EXPECT_THROW(list_accessible(8, o, 1), GuardError);
      return;
    }
  }
  FAIL() << "no seed with two accessible paths";
}

TEST(JointProb, Diagonal) {
  for (int n = 1; n <= 6; ++n) {
    const DirectPath ref = DirectPath::canonical(n);
    const Rational expected = Rational(1) / Rational(factorial_big(static_cast<unsigned>(n)));
    EXPECT_EQ(joint_prob_formula(encode_gap(ref, ref), n), expected);
    EXPECT_EQ(joint_prob_bruteforce(ref, ref), expected);
  }
}

TEST(JointProb, DisjointPairAtTwo) {
  const DirectPath ref = DirectPath::canonical(2);
  const DirectPath other = DirectPath::from_permutation(2, {2, 1});
  EXPECT_EQ(joint_prob_formula(encode_gap(other, ref), 2), Rational(1, 4));
  EXPECT_EQ(joint_prob_bruteforce(other, ref), Rational(1, 4));
}

TEST(JointProb, TwoGapPathAtFive) {
  const DirectPath ref = DirectPath::canonical(5);
  const DirectPath two_gaps = DirectPath::from_permutation(5, {2, 1, 3, 5, 4});
  EXPECT_EQ(joint_prob_formula(encode_gap(two_gaps, ref), 5), Rational(36, 362880));
  EXPECT_EQ(joint_prob_bruteforce(two_gaps, ref), Rational(36, 362880));
}

TEST(JointProb, FormulaEqualsOrderingCountUpToFive) {
  for (int n = 2; n <= 5; ++n) {
    const auto paths = all_full_paths(n);
    for (const auto& ref : paths) {
      for (const auto& pi : paths) {
        ASSERT_EQ(joint_prob_formula(encode_gap(pi, ref), n), joint_prob_bruteforce(pi, ref))
            << "n=" << n;
      }
    }
  }
}

TEST(JointProb, RejectsLargeUnions) {
  const DirectPath ref = DirectPath::canonical(7);
  const DirectPath rev = DirectPath::from_permutation(7, {7, 6, 5, 4, 3, 2, 1});
  EXPECT_THROW(joint_prob_bruteforce(rev, ref), GuardError);
  EXPECT_THROW(joint_prob_formula(GapEncoding{0, {1, 3}, {{1}, {2, 3, 1}}}, 4), std::invalid_argument);
}
