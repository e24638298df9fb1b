#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "calibration.hpp"
#include "hyperpaths/experiments.hpp"
#include "hyperpaths/hypercube.hpp"

using namespace hyperpaths;

namespace {

std::vector<std::vector<int>> all_permutations(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 1);
  std::vector<std::vector<int>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::uint64_t factorial(int m) {
  std::uint64_t f = 1;
  for (int i = 2; i <= m; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

}  // namespace

TEST(Vertex, LevelAndMembership) {
  const Vertex v = Vertex::of(6, {1, 4, 6});
  EXPECT_EQ(v.level(), 3);
  EXPECT_TRUE(v.contains(4));
  EXPECT_FALSE(v.contains(2));
  EXPECT_FALSE(v.contains(7));
  EXPECT_EQ(v.complement(), Vertex::of(6, {2, 3, 5}));
  EXPECT_TRUE(Vertex::empty(6).subset_of(v));
  EXPECT_TRUE(v.subset_of(Vertex::full(6)));
  EXPECT_THROW(Vertex(3, 0b1000), std::invalid_argument);
  EXPECT_THROW(Vertex::of(3, {4}), std::invalid_argument);
  EXPECT_THROW(check_dimension(63), std::invalid_argument);
}

TEST(Edge, LevelAndValidation) {
  const Edge e(Vertex::of(5, {2, 3}), 5);
  EXPECT_EQ(e.level(), 3);
  EXPECT_EQ(e.upper(), Vertex::of(5, {2, 3, 5}));
  EXPECT_THROW(Edge(Vertex::of(5, {2}), 2), std::invalid_argument);
  EXPECT_THROW(Edge(Vertex::of(5, {2}), 6), std::invalid_argument);
  EXPECT_THROW(Edge(Vertex::of(5, {2}), 0), std::invalid_argument);
}

TEST(Edge, TextRoundTrip) {
  const Edge e(Vertex::of(10, {1, 5, 10}), 3);
  EXPECT_EQ(to_string(e), "v:211,d:3");
  EXPECT_EQ(parse_edge("v:211,d:3", 10), e);
  EXPECT_THROW(parse_edge("v:zz,d:3", 10), std::invalid_argument);
  EXPECT_THROW(parse_edge("v:1,d:1", 10), std::invalid_argument);
}

TEST(Edge, EnumerationCount) {
  for (int n = 1; n <= 16; ++n) {
    const auto edges = enumerate_edges(n);
    ASSERT_EQ(edges.size(), static_cast<std::size_t>(n) << (n - 1)) << "n=" << n;
    if (n <= 8) {
      std::set<Edge> unique(edges.begin(), edges.end());
      EXPECT_EQ(unique.size(), edges.size());
    }
  }
}

TEST(WeightOracle, Deterministic) {
  const WeightOracle a(42, 10);
  const WeightOracle b(42, 10);
  const WeightOracle c(43, 10);
  int differ = 0;
  for (const Edge& e : enumerate_edges(10)) {
    const double w = edge_weight(a, e);
    ASSERT_GT(w, 0.0);
    ASSERT_LT(w, 1.0);
    ASSERT_EQ(w, edge_weight(b, e));
    ASSERT_EQ(w, edge_weight(a, e));
    differ += w != edge_weight(c, e);
  }
  EXPECT_EQ(differ, 10 << 9);
}

TEST(WeightOracle, RejectsForeignEdges) {
  const WeightOracle oracle(1, 5);
  EXPECT_THROW(edge_weight(oracle, Edge(Vertex::empty(6), 6)), std::invalid_argument);
  EXPECT_THROW(WeightOracle(1, 0), std::invalid_argument);
}

TEST(WeightOracle, DirectionChangesWeight) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const WeightOracle oracle(seed, 12);
    for (std::uint64_t bits : {0ULL, 0b101ULL, 0b110000ULL}) {
      const Vertex v(12, bits);
      std::set<double> seen;
      int edges = 0;
      for (int d = 1; d <= 12; ++d) {
        if (v.contains(d)) continue;
        seen.insert(edge_weight(oracle, Edge(v, d)));
        ++edges;
      }
      ASSERT_EQ(seen.size(), static_cast<std::size_t>(edges));
    }
  }
}

TEST(WeightOracle, Uniformity) {
  std::vector<double> w;
  w.reserve(1'000'000);
  for (std::uint64_t seed = 0; w.size() < 1'000'000; ++seed) {
    const WeightOracle oracle(seed, 12);
    for (int i = 0; i < 100; ++i) {
      const auto bits = static_cast<std::uint64_t>(i * 37) & full_mask(12);
      for (int d = 1; d <= 12; ++d) {
        if (!(bits & dim_bit(d))) w.push_back(oracle.weight(Edge(Vertex(12, bits), d)));
      }
    }
  }
  w.resize(1'000'000);
  EXPECT_NEAR(sample_mean(w), 0.5, calibration::kUniformMeanTol);
  const double d = ks_statistic(w, [](double x) { return std::clamp(x, 0.0, 1.0); });
  EXPECT_GT(ks_pvalue(d, w.size()), calibration::kUniformKsMinPvalue) << "KS " << d;
}

TEST(WeightOracle, TopInversionIsExact) {
  for (std::uint64_t key : {0ULL, 1ULL, 0x123456789ABCDEFULL, ~0ULL}) {
    EXPECT_EQ(to_unit_open(~key), 1.0 - to_unit_open(key));
  }
}

TEST(WeightOracle, SubsetCodeMatchesBitsBelow64) {
  const std::vector<int> dims{1, 7, 33, 64};
  std::uint64_t bits = 0;
  for (int d : dims) bits |= std::uint64_t{1} << (d - 1);
  EXPECT_EQ(subset_code(dims), bits);
  const std::vector<int> wide{1, 70, 200};
  const std::vector<int> shuffled{200, 1, 70};
  EXPECT_EQ(subset_code(wide), subset_code(shuffled));
  EXPECT_NE(subset_code(wide), subset_code(std::vector<int>{1, 70}));
}

TEST(Accessibility, ManualWeights) {
  const std::vector<double> up{0.2, 0.5, 0.9};
  const std::vector<double> down{0.2, 0.9, 0.5};
  const std::vector<double> tie{0.2, 0.2};
  EXPECT_TRUE(is_strictly_increasing(up));
  EXPECT_FALSE(is_strictly_increasing(down));
  EXPECT_FALSE(is_strictly_increasing(tie));
}

TEST(Accessibility, LengthOneAlwaysAccessible) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const WeightOracle oracle(seed, 4);
    EXPECT_TRUE(is_accessible(DirectPath(Vertex::of(4, {2}), {3}), oracle));
    EXPECT_TRUE(is_accessible(DirectPath::canonical(1), WeightOracle(seed, 1)));
  }
}

TEST(Accessibility, FixedPathFrequency) {
  const DirectPath path = DirectPath::from_permutation(5, {3, 1, 5, 2, 4});
  const int seeds = 100'000;
  int hits = 0;
  for (int seed = 0; seed < seeds; ++seed) hits += is_accessible(path, WeightOracle(seed, 5));
  const double p = 1.0 / 120;
  const double sigma = std::sqrt(p * (1 - p) / seeds);
  EXPECT_NEAR(static_cast<double>(hits) / seeds, p, 3 * sigma);
}

TEST(DirectPath, Structure) {
  const DirectPath p(Vertex::of(6, {2}), {5, 1, 3});
  EXPECT_EQ(p.length(), 3);
  EXPECT_EQ(p.end(), Vertex::of(6, {1, 2, 3, 5}));
  EXPECT_EQ(p.end().level() - p.start().level(), p.length());
  const auto edges = p.edges();
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) EXPECT_EQ(edges[i].upper(), edges[i + 1].lower);
  EXPECT_THROW(DirectPath(Vertex::of(6, {2}), {2}), std::invalid_argument);
  EXPECT_THROW(DirectPath(Vertex::empty(6), {1, 1}), std::invalid_argument);
}

TEST(DirectPath, CountBetweenVertices) {
  const int n = 8;
  for (std::uint64_t from = 0; from < (1u << n); from += 7) {
    for (std::uint64_t to = 0; to < (1u << n); to += 11) {
      const Vertex a(n, from);
      const Vertex b(n, to);
      const auto paths = enumerate_direct_paths(a, b);
      if (!a.subset_of(b)) {
        EXPECT_TRUE(paths.empty());
        continue;
      }
      const int gap = b.level() - a.level();
      if (gap > 6) continue;
      ASSERT_EQ(paths.size(), factorial(gap));
      for (const auto& p : paths) ASSERT_EQ(p.end(), b);
    }
  }
}

TEST(GapEncoding, ReferenceIsAllZeros) {
  const DirectPath ref = DirectPath::canonical(5);
  const GapEncoding enc = encode_gap(ref, ref);
  EXPECT_EQ(enc.shared, 5);
  EXPECT_EQ(enc.gaps, std::vector<int>(6, 0));
  EXPECT_EQ(enc.nontrivial_gaps(), 0);
  EXPECT_EQ(decode_gap(enc, ref), ref);
}

TEST(GapEncoding, WorkedExamples) {
  const DirectPath ref = DirectPath::canonical(5);
  const GapEncoding two_gaps = encode_gap(DirectPath::from_permutation(5, {2, 1, 3, 5, 4}), ref);
  EXPECT_EQ(two_gaps.shared, 1);
  EXPECT_EQ(two_gaps.gaps, (std::vector<int>{2, 2}));
  const GapEncoding one_gap = encode_gap(DirectPath::from_permutation(5, {1, 3, 4, 2, 5}), ref);
  EXPECT_EQ(one_gap.shared, 2);
  EXPECT_EQ(one_gap.gaps, (std::vector<int>{0, 3, 0}));
  EXPECT_EQ(green.nontrivial_gaps(), 1);
}

TEST(GapEncoding, BijectionUpToSix) {
  for (int n = 1; n <= 6; ++n) {
    for (const auto& refp : {all_permutations(n).front(), all_permutations(n).back()}) {
      const DirectPath ref = DirectPath::from_permutation(n, refp);
      for (const auto& perm : all_permutations(n)) {
        const DirectPath pi = DirectPath::from_permutation(n, perm);
        const GapEncoding enc = encode_gap(pi, ref);
        ASSERT_NO_THROW(validate_gap_encoding(enc, n));
        ASSERT_EQ(decode_gap(enc, ref), pi);
        const int s = enc.shared;
        const int g = enc.nontrivial_gaps();
        if (s < n) {
          ASSERT_GE(g, 1);
          ASSERT_LE(g, std::min(s + 1, (n - s) / 2));
        } else {
          ASSERT_EQ(g, 0);
        }
        // s counts the edges the two paths have in common.
        const auto pe = pi.edges();
        const auto re = ref.edges();
        const std::set<Edge> rs(re.begin(), re.end());
        ASSERT_EQ(std::count_if(pe.begin(), pe.end(), [&](const Edge& e) { return rs.count(e) > 0; }), s);
      }
    }
  }
}

TEST(GapEncoding, EnumeratingAllEncodingsAtFour) {
  const int n = 4;
  const DirectPath ref = DirectPath::canonical(n);
  std::set<DirectPath> decoded;
  std::size_t encodings = 0;
  for (int s = 0; s <= n; ++s) {
    // Gap vectors of length s+1 with entries 0 or >= 2 summing to n - s.
    std::vector<int> a(static_cast<std::size_t>(s) + 1, 0);
    const std::function<void(std::size_t, int)> fill = [&](std::size_t i, int left) {
      if (i == a.size()) {
        if (left != 0) return;
        std::vector<std::vector<std::vector<int>>> options;
        for (int ai : a) options.push_back(edge_disjoint_permutations(ai));
        std::vector<std::vector<int>> sub(a.size());
        const std::function<void(std::size_t)> pick = [&](std::size_t j) {
          if (j == a.size()) {
            GapEncoding enc{s, a, sub};
            if (!is_valid_overlap_class(n, s, enc.nontrivial_gaps())) return;
            ++encodings;
            decoded.insert(decode_gap(enc, ref));
            return;
          }
          for (const auto& o : options[j]) {
            sub[j] = o;
            pick(j + 1);
          }
        };
        pick(0);
        return;
      }
      for (int v = 0; v <= left; ++v) {
        if (v == 1) continue;
        a[i] = v;
        fill(i + 1, left - v);
      }
    };
    fill(0, n - s);
  }
  EXPECT_EQ(encodings, 24u);
  EXPECT_EQ(decoded.size(), 24u);
}

TEST(GapEncoding, RejectsInconsistentEncodings) {
  const DirectPath ref = DirectPath::canonical(4);
  EXPECT_THROW(decode_gap(GapEncoding{1, {1, 2}, {{1}, {2, 1}}}, ref), std::invalid_argument);
  EXPECT_THROW(decode_gap(GapEncoding{0, {4}, {{1, 2, 3, 4}}}, ref), std::invalid_argument);
  EXPECT_THROW(decode_gap(GapEncoding{0, {3}, {{2, 3, 1}}}, ref), std::invalid_argument);
  EXPECT_THROW(encode_gap(DirectPath::canonical(3), ref), std::invalid_argument);
}

TEST(GapEncoding, EdgeDisjointPermutationsMatchBruteForce) {
  for (int m = 0; m <= 7; ++m) {
    std::set<std::vector<int>> expected;
    for (const auto& p : m == 0 ? std::vector<std::vector<int>>{{}} : all_permutations(m)) {
      // The canonical edge [i-1] -> [i] is used iff the first i entries are exactly 1..i.
      bool shares = false;
      int prefix_max = 0;
      for (int i = 1; i <= m; ++i) {
        prefix_max = std::max(prefix_max, p[static_cast<std::size_t>(i - 1)]);
        if (prefix_max == i && p[static_cast<std::size_t>(i - 1)] == i) shares = true;
      }
      if (!shares) expected.insert(p);
    }
    const auto got = edge_disjoint_permutations(m);
    EXPECT_EQ(std::set<std::vector<int>>(got.begin(), got.end()), expected) << "m=" << m;
    EXPECT_EQ(got.size(), expected.size());
  }
}
