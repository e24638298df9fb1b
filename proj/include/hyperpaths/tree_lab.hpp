#pragma once

// Greedy r-ary trees grown from both ends of the cube, their leaf functionals
// Z_{n,k,r} and Z_{inf,k,r}, the conditional mean lambda_{k,n} and the
// tree-restricted count X*_{k,n}.

#include <cstdint>
#include <vector>

#include "hyperpaths/hypercube.hpp"
#include "hyperpaths/rng.hpp"

namespace hyperpaths {

inline constexpr std::uint64_t kMaxTreeNodes = 10'000'000;

/// Rank sequence (i_1, ..., i_l), every entry in [1, r].
class TreeIndex {
 public:
  TreeIndex(int r, std::vector<int> ranks);

  int r() const noexcept { return r_; }
  int depth() const noexcept { return static_cast<int>(ranks_.size()); }
  const std::vector<int>& ranks() const noexcept { return ranks_; }

  /// Base-(r+1) packing, unique across depths.
  std::uint64_t pack() const noexcept;
  static TreeIndex unpack(int r, std::uint64_t packed);

  /// Position among the r^l nodes of its level, in lexicographic order.
  std::uint64_t level_offset() const noexcept;

  TreeIndex parent() const;
  /// Sibling with rank i_l - 1, or the parent when i_l = 1. Undefined for (1).
  TreeIndex predecessor() const;
  /// {(i_1, ..., i_{l'-1}, j) : l' in [l], j in [i_{l'}]}, ordered by level then j.
  std::vector<TreeIndex> predecessor_set() const;

  friend bool operator==(const TreeIndex&, const TreeIndex&) = default;

 private:
  int r_;
  std::vector<int> ranks_;
};

enum class TreeSide { bottom, top };

struct TreeNode {
  bool exists = false;
  int direction = 0;        // direction of the edge into this node
  std::uint64_t key = 0;    // comparison key of that edge, inverted on the top side
  double weight = 0.0;      // W on the bottom, 1 - W on the top
  double wtilde = 0.0;      // -log(1 - weight); +inf when missing
  int pool = 0;             // directions not excluded by ancestors, at this node
  int lighter = 0;          // pool edges out of this node lighter than the edge into it
};

/// Level-major storage: level l holds r^l nodes in lexicographic rank order.
class GreedyTree {
 public:
  TreeSide side() const noexcept { return side_; }
  int n() const noexcept { return n_; }
  int k() const noexcept { return k_; }
  int r() const noexcept { return r_; }

  const TreeNode& root() const noexcept { return levels_[0][0]; }
  const TreeNode& node(const TreeIndex& i) const;
  const std::vector<TreeNode>& level(int l) const { return levels_.at(static_cast<std::size_t>(l)); }
  const std::vector<TreeNode>& leaves() const { return levels_.back(); }

  /// Directions along the path from the root to i (top side: directions removed from [n]).
  std::vector<int> path_directions(const TreeIndex& i) const;
  /// Same for the node at position `offset` of level l.
  std::vector<int> path_directions(int l, std::size_t offset) const;
  /// Cube vertex of a node as a bitmask. Requires n <= 62.
  std::uint64_t vertex_bits(int l, std::size_t offset) const;

 private:
  friend GreedyTree build_tree(int n, int k, int r, const WeightOracle& oracle, TreeSide side);
  TreeSide side_ = TreeSide::bottom;
  int n_ = 0;
  int k_ = 0;
  int r_ = 0;
  std::vector<std::vector<TreeNode>> levels_;
};

/// Requires 1 <= r, 1 <= k, (k-1) r < n and r^k <= 10^7. Any n up to the
/// oracle limit; vertices are tracked through their (at most k) directions.
GreedyTree build_tree(int n, int k, int r, const WeightOracle& oracle, TreeSide side);

/// Sum over the leaves of exp(-n wtilde).
double z_functional(const GreedyTree& tree);

/// Increment Delta(j) the coupling assigns to every existing node j at depth
/// >= 1, level-major as in the tree; +inf for missing nodes.
std::vector<std::vector<double>> coupling_increments(const GreedyTree& tree);

/// i.i.d. Exp(1) increments for every node of [r]^{<=k}, level-major.
std::vector<std::vector<double>> sample_ideal_increments(int k, int r, CounterRng& rng);
/// Leaf sum of exp(-sum over P(i) of increments).
double z_ideal_from_increments(const std::vector<std::vector<double>>& inc, int r);
/// Same value through Z_l = sum_{i <= r} exp(-sum_{j <= i} Delta_j) Z_{l-1}^{(i)}.
double z_ideal_recursive(const std::vector<std::vector<double>>& inc, int r);

/// One draw of Z_{inf,k,r} via the level recursion. Requires r^k <= 10^7.
double z_ideal_sample(int k, int r, CounterRng& rng);

/// `count` approximate draws of Z_{inf,k,r} by population dynamics: each
/// level resamples r members of the previous level's population. No size guard.
std::vector<double> z_ideal_population(int k, int r, std::size_t count, CounterRng& rng);

/// sum over bottom leaves u and top leaves u' with u subset of u' and
/// w + w' <= 1 of (1 - w - w')^{n - 2k}. Requires matching trees with k <= n/2.
double lambda_kn(const GreedyTree& bottom, const GreedyTree& top);

/// Accessible empty-to-full paths whose first k edges follow the bottom tree
/// and last k edges follow the top tree. Requires n <= 24.
std::uint64_t x_star_count(int n, int k, int r, const WeightOracle& oracle);
std::uint64_t x_star_count(const GreedyTree& bottom, const GreedyTree& top, const WeightOracle& oracle);

int default_r(int k);
std::uint64_t guidance_n(int k, int r);

}  // namespace hyperpaths
