#include "hyperpaths/exact_count.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <numeric>
#include <stdexcept>
#include <string>

#include "hyperpaths/errors.hpp"

namespace hyperpaths {
namespace {

void check_dp_dimension(int n) {
  if (n < 1 || n > kMaxDpDimension) {
    throw GuardError("exact counting requires 1 <= n <= " + std::to_string(kMaxDpDimension) +
                     ", got n = " + std::to_string(n));
  }
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw GuardError("accessible path count overflows 64 bits");
  return r;
}

std::uint64_t next_same_popcount(std::uint64_t v) noexcept {
  const std::uint64_t c = v & (~v + 1);
  const std::uint64_t r = v + c;
  return (((r ^ v) >> 2) / c) | r;
}

/// Calls fn(subset) for every subset of {1..n} of size k, in increasing order.
template <class Fn>
void for_each_subset_of_size(int n, int k, Fn&& fn) {
  if (k == 0) {
    fn(std::uint64_t{0});
    return;
  }
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::uint64_t v = (std::uint64_t{1} << k) - 1; v < limit; v = next_same_popcount(v)) fn(v);
}

// Reachability of DP states, indexed by subset * n + (last direction - 1).
class StateBits {
 public:
  StateBits(int n) : n_(n), words_(((std::size_t{1} << n) * static_cast<std::size_t>(n) + 63) / 64, 0) {}
  void set(std::uint64_t subset, int dir) noexcept {
    const std::size_t i = subset * static_cast<std::size_t>(n_) + static_cast<std::size_t>(dir - 1);
    words_[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
  bool test(std::uint64_t subset, int dir) const noexcept {
    const std::size_t i = subset * static_cast<std::size_t>(n_) + static_cast<std::size_t>(dir - 1);
    return (words_[i >> 6] >> (i & 63)) & 1;
  }

 private:
  int n_;
  std::vector<std::uint64_t> words_;
};

struct Incoming {
  std::uint64_t key;
  std::uint64_t count;
};

// Level-by-level forward recursion. Only two levels of counts are alive at a
// time; a state (S, i) at level k lives at rank(S) * k + (position of i in S).
// Returns the top-level counts indexed by direction - 1.
std::vector<std::uint64_t> run_dp(int n, const WeightOracle& oracle, StateBits* reach) {
  check_dp_dimension(n);
  if (oracle.n() != n) throw std::invalid_argument("oracle dimension differs from n");

  const std::uint64_t full = full_mask(n);
  if (n == 1) {
    if (reach) reach->set(1, 1);
    return {1};
  }

  std::vector<std::uint32_t> rank(std::size_t{1} << n);
  for (int k = 0; k <= n; ++k) {
    std::uint32_t r = 0;
    for_each_subset_of_size(n, k, [&](std::uint64_t s) { rank[s] = r++; });
  }

  std::vector<std::uint64_t> cur(static_cast<std::size_t>(n), 1);  // level 1: ({i}, i) = 1
  std::vector<std::uint64_t> next;
  std::array<Incoming, kMaxDpDimension> in{};
  std::array<std::uint64_t, kMaxDpDimension + 1> prefix{};

  std::uint64_t level_size = static_cast<std::uint64_t>(n);  // C(n, k-1) at the top of the loop
  for (int k = 2; k <= n; ++k) {
    const std::uint64_t next_size = level_size * static_cast<std::uint64_t>(n - k + 1) / static_cast<std::uint64_t>(k);
    next.assign(next_size * static_cast<std::size_t>(k), 0);
    const int below = k - 1;

    for_each_subset_of_size(n, below, [&](std::uint64_t t) {
      const std::size_t base = std::size_t{rank[t]} * static_cast<std::size_t>(below);
      int m = 0;
      int pos = 0;
      for (std::uint64_t rest = t; rest; rest &= rest - 1, ++pos) {
        const std::uint64_t c = cur[base + static_cast<std::size_t>(pos)];
        if (c == 0) continue;
        const int j = std::countr_zero(rest) + 1;
        if (reach) reach->set(t, j);
        in[static_cast<std::size_t>(m++)] = {oracle.raw_key(t & ~dim_bit(j), j), c};
      }
      if (m == 0) return;
      std::sort(in.begin(), in.begin() + m, [](const Incoming& a, const Incoming& b) { return a.key < b.key; });
      prefix[0] = 0;
      for (int q = 0; q < m; ++q) prefix[static_cast<std::size_t>(q) + 1] = checked_add(prefix[static_cast<std::size_t>(q)], in[static_cast<std::size_t>(q)].count);

      for (std::uint64_t out = full & ~t; out; out &= out - 1) {
        const int i = std::countr_zero(out) + 1;
        const std::uint64_t key = oracle.raw_key(t, i);
        const auto it = std::lower_bound(in.begin(), in.begin() + m, key,
                                         [](const Incoming& a, std::uint64_t kk) { return a.key < kk; });
        const std::uint64_t cnt = prefix[static_cast<std::size_t>(it - in.begin())];
        if (cnt == 0) continue;
        const std::uint64_t s = t | dim_bit(i);
        const int p = std::popcount(s & (dim_bit(i) - 1));
        next[std::size_t{rank[s]} * static_cast<std::size_t>(k) + static_cast<std::size_t>(p)] = cnt;
      }
    });
    cur.swap(next);
    level_size = next_size;
  }

  // cur holds level n: the single subset [n], positions = directions - 1.
  if (reach) {
    for (int i = 1; i <= n; ++i) {
      if (cur[static_cast<std::size_t>(i - 1)] != 0) reach->set(full, i);
    }
  }
  return cur;
}

}  // namespace

std::uint64_t count_accessible_dp(int n, const WeightOracle& oracle) {
  const auto top = run_dp(n, oracle, nullptr);
  std::uint64_t total = 0;
  for (std::uint64_t c : top) total = checked_add(total, c);
  return total;
}

std::vector<DpState> top_states(int n, const WeightOracle& oracle) {
  const auto top = run_dp(n, oracle, nullptr);
  std::vector<DpState> out;
  out.reserve(top.size());
  for (int i = 1; i <= n; ++i) out.push_back({Vertex::full(n), i, top[static_cast<std::size_t>(i - 1)]});
  return out;
}

std::uint64_t count_accessible_bruteforce(int n, const WeightOracle& oracle) {
  check_dimension(n);
  if (n > kMaxBruteForceDimension) {
    throw GuardError("brute-force counting requires n <= " + std::to_string(kMaxBruteForceDimension));
  }
  if (oracle.n() != n) throw std::invalid_argument("oracle dimension differs from n");
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 1);
  std::uint64_t count = 0;
  do {
    if (is_accessible(DirectPath::from_permutation(n, order), oracle)) ++count;
  } while (std::next_permutation(order.begin(), order.end()));
  return count;
}

std::vector<DirectPath> list_accessible(int n, const WeightOracle& oracle, std::size_t limit) {
  check_dp_dimension(n);
  StateBits reach(n);
  const auto top = run_dp(n, oracle, &reach);
  std::uint64_t total = 0;
  for (std::uint64_t c : top) total = checked_add(total, c);
  if (total > limit) {
    throw GuardError("accessible path count " + std::to_string(total) + " exceeds listing limit " +
                     std::to_string(limit));
  }

  std::vector<DirectPath> out;
  out.reserve(static_cast<std::size_t>(total));
  std::vector<int> reversed;  // directions from the top down
  reversed.reserve(static_cast<std::size_t>(n));

  // State (s, i): an accessible prefix ends at s with last step i; key is that edge's weight key.
  auto descend = [&](auto&& self, std::uint64_t s, int i, std::uint64_t key) -> void {
    reversed.push_back(i);
    const std::uint64_t below = s & ~dim_bit(i);
    if (below == 0) {
      out.emplace_back(Vertex::empty(n), std::vector<int>(reversed.rbegin(), reversed.rend()));
    } else {
      for (std::uint64_t rest = below; rest; rest &= rest - 1) {
        const int j = std::countr_zero(rest) + 1;
        if (!reach.test(below, j)) continue;
        const std::uint64_t kj = oracle.raw_key(below & ~dim_bit(j), j);
        if (kj < key) self(self, below, j, kj);
      }
    }
    reversed.pop_back();
  };

  const std::uint64_t full = full_mask(n);
  for (int i = 1; i <= n; ++i) {
    if (top[static_cast<std::size_t>(i - 1)] == 0) continue;
    descend(descend, full, i, oracle.raw_key(full & ~dim_bit(i), i));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Rational joint_prob_formula(const GapEncoding& enc, int n) {
  validate_gap_encoding(enc, n);
  BigInt num = 1;
  for (int a : enc.gaps) num *= binomial_big(static_cast<unsigned>(2 * a), static_cast<unsigned>(a));
  return Rational(num, factorial_big(static_cast<unsigned>(2 * n - enc.shared)));
}

Rational joint_prob_bruteforce(const DirectPath& pi, const DirectPath& ref) {
  if (pi.n() != ref.n()) throw std::invalid_argument("paths from different cubes");
  std::vector<Edge> nodes;
  auto node_of = [&](const Edge& e) {
    auto it = std::find(nodes.begin(), nodes.end(), e);
    if (it != nodes.end()) return static_cast<int>(it - nodes.begin());
    nodes.push_back(e);
    return static_cast<int>(nodes.size()) - 1;
  };
  std::vector<std::pair<int, int>> order_constraints;  // (earlier, later)
  for (const DirectPath* p : {&pi, &ref}) {
    int prev = -1;
    for (const Edge& e : p->edges()) {
      const int id = node_of(e);
      if (prev >= 0) order_constraints.emplace_back(prev, id);
      prev = id;
    }
  }
  const int m = static_cast<int>(nodes.size());
  if (m > 12) throw GuardError("ordering enumeration supports at most 12 edges in the union");

  // Orderings are counted by the set of edges already placed: an edge may be
  // placed next once every edge required before it is placed.
  std::vector<std::uint32_t> required(static_cast<std::size_t>(m), 0);
  for (auto [a, b] : order_constraints) required[static_cast<std::size_t>(b)] |= 1u << a;
  // At most 12! orderings, so 64-bit counts suffice.
  std::vector<std::uint64_t> ways(std::size_t{1} << m, 0);
  ways[0] = 1;
  for (std::uint32_t placed = 0; placed < (1u << m); ++placed) {
    if (ways[placed] == 0) continue;
    for (int v = 0; v < m; ++v) {
      if ((placed >> v) & 1) continue;
      if ((required[static_cast<std::size_t>(v)] & ~placed) != 0) continue;
      ways[placed | (1u << v)] += ways[placed];
    }
  }
  return Rational(BigInt(ways[(std::size_t{1} << m) - 1]), factorial_big(static_cast<unsigned>(m)));
}

}  // namespace hyperpaths
