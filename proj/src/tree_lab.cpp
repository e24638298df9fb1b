#include "hyperpaths/tree_lab.hpp"

#include <algorithm>
#include <iterator>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "hyperpaths/errors.hpp"
#include "hyperpaths/exact_count.hpp"

namespace hyperpaths {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t checked_power(int r, int k) {
  std::uint64_t p = 1;
  for (int i = 0; i < k; ++i) {
    if (p > kMaxTreeNodes) return kMaxTreeNodes + 1;
    p *= static_cast<std::uint64_t>(r);
  }
  return p;
}

void check_tree_size(int k, int r) {
  if (r < 1 || k < 1) throw std::invalid_argument("tree requires k >= 1 and r >= 1");
  if (checked_power(r, k) > kMaxTreeNodes) {
    throw GuardError("r^k = " + std::to_string(r) + "^" + std::to_string(k) + " exceeds the node limit " +
                     std::to_string(kMaxTreeNodes));
  }
}

struct Candidate {
  std::uint64_t key;
  int direction;
};

}  // namespace

TreeIndex::TreeIndex(int r, std::vector<int> ranks) : r_(r), ranks_(std::move(ranks)) {
  if (r_ < 1) throw std::invalid_argument("r must be positive");
  if (ranks_.empty()) throw std::invalid_argument("tree index needs at least one rank");
  for (int i : ranks_) {
    if (i < 1 || i > r_) throw std::invalid_argument("rank out of [1, r]");
  }
}

std::uint64_t TreeIndex::pack() const noexcept {
  std::uint64_t p = 0;
  for (int i : ranks_) p = p * static_cast<std::uint64_t>(r_ + 1) + static_cast<std::uint64_t>(i);
  return p;
}

TreeIndex TreeIndex::unpack(int r, std::uint64_t packed) {
  std::vector<int> ranks;
  const auto base = static_cast<std::uint64_t>(r + 1);
  while (packed) {
    ranks.push_back(static_cast<int>(packed % base));
    packed /= base;
  }
  std::reverse(ranks.begin(), ranks.end());
  return TreeIndex(r, std::move(ranks));
}

std::uint64_t TreeIndex::level_offset() const noexcept {
  std::uint64_t o = 0;
  for (int i : ranks_) o = o * static_cast<std::uint64_t>(r_) + static_cast<std::uint64_t>(i - 1);
  return o;
}

TreeIndex TreeIndex::parent() const {
  if (ranks_.size() < 2) throw std::invalid_argument("depth-1 indices have the root as parent");
  return TreeIndex(r_, std::vector<int>(ranks_.begin(), ranks_.end() - 1));
}

TreeIndex TreeIndex::predecessor() const {
  if (ranks_.back() >= 2) {
    auto p = ranks_;
    --p.back();
    return TreeIndex(r_, std::move(p));
  }
  if (ranks_.size() == 1) throw std::invalid_argument("(1) has no predecessor");
  return parent();
}

std::vector<TreeIndex> TreeIndex::predecessor_set() const {
  std::vector<TreeIndex> out;
  for (std::size_t l = 0; l < ranks_.size(); ++l) {
    std::vector<int> prefix(ranks_.begin(), ranks_.begin() + static_cast<std::ptrdiff_t>(l));
    prefix.push_back(0);
    for (int j = 1; j <= ranks_[l]; ++j) {
      prefix.back() = j;
      out.emplace_back(r_, prefix);
    }
  }
  return out;
}

const TreeNode& GreedyTree::node(const TreeIndex& i) const {
  if (i.r() != r_ || i.depth() > k_) throw std::invalid_argument("index outside the tree");
  return levels_[static_cast<std::size_t>(i.depth())][static_cast<std::size_t>(i.level_offset())];
}

std::vector<int> GreedyTree::path_directions(const TreeIndex& i) const {
  if (i.r() != r_ || i.depth() > k_) throw std::invalid_argument("index outside the tree");
  return path_directions(i.depth(), static_cast<std::size_t>(i.level_offset()));
}

std::vector<int> GreedyTree::path_directions(int l, std::size_t offset) const {
  std::vector<int> dirs(static_cast<std::size_t>(l));
  for (int d = l; d >= 1; --d) {
    dirs[static_cast<std::size_t>(d - 1)] = levels_[static_cast<std::size_t>(d)][offset].direction;
    offset /= static_cast<std::size_t>(r_);
  }
  return dirs;
}

std::uint64_t GreedyTree::vertex_bits(int l, std::size_t offset) const {
  if (n_ > kMaxDimension) throw std::invalid_argument("vertex bitmasks need n <= 62");
  std::uint64_t bits = 0;
  for (int d : path_directions(l, offset)) bits |= dim_bit(d);
  return side_ == TreeSide::top ? (full_mask(n_) & ~bits) : bits;
}

namespace {

// Word layout of the full set [n].
std::uint64_t full_word(int n, std::size_t w) {
  const int rest = n - static_cast<int>(w) * 64;
  return rest >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << rest) - 1;
}

// Subset code of F \ removed, for the sorted-free list `removed`.
std::uint64_t complement_code(int n, std::uint64_t full_code, const std::vector<int>& removed,
                              std::vector<std::pair<std::size_t, std::uint64_t>>& touched) {
  touched.clear();
  for (int d : removed) {
    const auto w = static_cast<std::size_t>(d - 1) / 64;
    auto it = std::find_if(touched.begin(), touched.end(), [w](const auto& p) { return p.first == w; });
    if (it == touched.end()) {
      touched.emplace_back(w, full_word(n, w));
      it = touched.end() - 1;
    }
    it->second &= ~(std::uint64_t{1} << ((d - 1) % 64));
  }
  std::uint64_t code = full_code;
  for (const auto& [w, word] : touched) code ^= word_code(w, full_word(n, w)) ^ word_code(w, word);
  return code;
}

}  // namespace

GreedyTree build_tree(int n, int k, int r, const WeightOracle& oracle, TreeSide side) {
  if (oracle.n() != n) throw std::invalid_argument("oracle dimension differs from n");
  check_tree_size(k, r);
  if (static_cast<long long>(k - 1) * r >= n) {
    throw std::invalid_argument("infeasible tree: (k - 1) r = " + std::to_string((k - 1) * r) +
                                " must be below n = " + std::to_string(n));
  }
  const bool top = side == TreeSide::top;

  std::uint64_t full_code = 0;
  for (std::size_t w = 0; w * 64 < static_cast<std::size_t>(n); ++w) full_code ^= word_code(w, full_word(n, w));

  GreedyTree t;
  t.side_ = side;
  t.n_ = n;
  t.k_ = k;
  t.r_ = r;
  t.levels_.resize(static_cast<std::size_t>(k) + 1);

  TreeNode root;
  root.exists = true;
  root.pool = n;
  t.levels_[0].push_back(root);

  std::vector<std::vector<int>> excluded{{}};  // proper ancestors' child directions, per node
  std::vector<char> blocked(static_cast<std::size_t>(n) + 1, 0);
  std::vector<Candidate> cand;
  cand.reserve(static_cast<std::size_t>(n));
  std::vector<std::pair<std::size_t, std::uint64_t>> touched;

  for (int l = 0; l < k; ++l) {
    auto& cur = t.levels_[static_cast<std::size_t>(l)];
    std::vector<TreeNode> next(cur.size() * static_cast<std::size_t>(r));
    std::vector<std::vector<int>> next_excluded(next.size());

    for (std::size_t o = 0; o < cur.size(); ++o) {
      TreeNode& node = cur[o];
      if (!node.exists) continue;
      const std::vector<int> dims = t.path_directions(l, o);
      for (int d : excluded[o]) blocked[static_cast<std::size_t>(d)] = 1;
      for (int d : dims) blocked[static_cast<std::size_t>(d)] = 1;

      // Bottom: the edge from the node's vertex c adds d, so the lower end is c.
      // Top: the edge from F \ c removes d, so the lower end is F \ (c + d).
      const std::uint64_t base = top ? complement_code(n, full_code, dims, touched) : subset_code(dims);
      cand.clear();
      int lighter = 0;
      for (int d = 1; d <= n; ++d) {
        if (blocked[static_cast<std::size_t>(d)]) continue;
        std::uint64_t key;
        if (!top) {
          key = oracle.raw_key(base, d);
        } else {
          const auto w = static_cast<std::size_t>(d - 1) / 64;
          std::uint64_t word = full_word(n, w);
          for (const auto& [tw, tword] : touched) {
            if (tw == w) word = tword;
          }
          const std::uint64_t lowered = word & ~(std::uint64_t{1} << ((d - 1) % 64));
          key = ~oracle.raw_key(base ^ word_code(w, word) ^ word_code(w, lowered), d);
        }
        if (l == 0 || key > node.key) {
          cand.push_back({key, d});
        } else {
          ++lighter;
        }
      }
      for (int d : excluded[o]) blocked[static_cast<std::size_t>(d)] = 0;
      for (int d : dims) blocked[static_cast<std::size_t>(d)] = 0;
      node.lighter = lighter;

      const std::size_t take = std::min<std::size_t>(cand.size(), static_cast<std::size_t>(r));
      std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(take), cand.end(),
                        [](const Candidate& a, const Candidate& b) { return a.key < b.key; });
      std::vector<int> child_excluded = excluded[o];
      for (std::size_t j = 0; j < take; ++j) child_excluded.push_back(cand[j].direction);

      for (std::size_t j = 0; j < static_cast<std::size_t>(r); ++j) {
        const std::size_t idx = o * static_cast<std::size_t>(r) + j;
        TreeNode& child = next[idx];
        if (j >= take) {
          child.wtilde = kInf;
          continue;
        }
        child.exists = true;
        child.direction = cand[j].direction;
        child.key = cand[j].key;
        child.weight = to_unit_open(cand[j].key);
        child.wtilde = -std::log1p(-child.weight);
        child.pool = n - static_cast<int>(child_excluded.size());
        next_excluded[idx] = child_excluded;
      }
    }
    t.levels_[static_cast<std::size_t>(l) + 1] = std::move(next);
    excluded.swap(next_excluded);
  }
  return t;
}

double z_functional(const GreedyTree& tree) {
  const double n = tree.n();
  double z = 0.0;
  for (const TreeNode& leaf : tree.leaves()) {
    if (leaf.exists) z += std::exp(-n * leaf.wtilde);
  }
  return z;
}

std::vector<std::vector<double>> coupling_increments(const GreedyTree& tree) {
  const int r = tree.r();
  std::vector<std::vector<double>> inc(static_cast<std::size_t>(tree.k()) + 1);
  for (int l = 1; l <= tree.k(); ++l) {
    const auto& nodes = tree.level(l);
    const auto& parents = tree.level(l - 1);
    auto& out = inc[static_cast<std::size_t>(l)];
    out.assign(nodes.size(), kInf);
    for (std::size_t o = 0; o < nodes.size(); ++o) {
      const TreeNode& node = nodes[o];
      if (!node.exists) continue;
      const TreeNode& parent = parents[o / static_cast<std::size_t>(r)];
      const int rank = static_cast<int>(o % static_cast<std::size_t>(r)) + 1;
      const double prev = rank == 1 ? parent.wtilde : nodes[o - 1].wtilde;
      const int remaining = parent.pool - (rank - 1) - parent.lighter;
      out[o] = (node.wtilde - prev) * remaining;
    }
  }
  return inc;
}

std::vector<std::vector<double>> sample_ideal_increments(int k, int r, CounterRng& rng) {
  check_tree_size(k, r);
  std::vector<std::vector<double>> inc(static_cast<std::size_t>(k) + 1);
  std::size_t width = 1;
  for (int l = 1; l <= k; ++l) {
    width *= static_cast<std::size_t>(r);
    auto& level = inc[static_cast<std::size_t>(l)];
    level.resize(width);
    for (double& d : level) d = rng.exponential();
  }
  return inc;
}

double z_ideal_from_increments(const std::vector<std::vector<double>>& inc, int r) {
  const int k = static_cast<int>(inc.size()) - 1;
  if (k < 1) throw std::invalid_argument("increments need at least one level");
  double z = 0.0;
  auto rec = [&](auto&& self, int l, std::size_t offset, double partial) -> void {
    const auto& level = inc[static_cast<std::size_t>(l)];
    double s = partial;
    for (std::size_t i = 0; i < static_cast<std::size_t>(r); ++i) {
      const std::size_t idx = offset * static_cast<std::size_t>(r) + i;
      s += level[idx];
      if (l == k) {
        z += std::exp(-s);
      } else {
        self(self, l + 1, idx, s);
      }
    }
  };
  rec(rec, 1, 0, 0.0);
  return z;
}

double z_ideal_recursive(const std::vector<std::vector<double>>& inc, int r) {
  const int k = static_cast<int>(inc.size()) - 1;
  if (k < 1) throw std::invalid_argument("increments need at least one level");
  std::vector<double> below(inc[static_cast<std::size_t>(k)].size(), 1.0);
  // below[o] = value of the subtree under node o at the level being processed.
  for (int l = k; l >= 1; --l) {
    const auto& level = inc[static_cast<std::size_t>(l)];
    std::vector<double> up(level.size() / static_cast<std::size_t>(r));
    for (std::size_t p = 0; p < up.size(); ++p) {
      double s = 0.0;
      double acc = 0.0;
      for (std::size_t i = 0; i < static_cast<std::size_t>(r); ++i) {
        const std::size_t idx = p * static_cast<std::size_t>(r) + i;
        s += level[idx];
        acc += std::exp(-s) * below[idx];
      }
      up[p] = acc;
    }
    below.swap(up);
  }
  return below[0];
}

double z_ideal_sample(int k, int r, CounterRng& rng) {
  check_tree_size(k, r);
  auto rec = [&](auto&& self, int depth) -> double {
    double s = 0.0;
    double acc = 0.0;
    for (int i = 0; i < r; ++i) {
      s += rng.exponential();
      acc += std::exp(-s) * (depth == 1 ? 1.0 : self(self, depth - 1));
    }
    return acc;
  };
  return rec(rec, k);
}

std::vector<double> z_ideal_population(int k, int r, std::size_t count, CounterRng& rng) {
  if (k < 1 || r < 1) throw std::invalid_argument("population sampler requires k >= 1 and r >= 1");
  if (count == 0) throw std::invalid_argument("population size must be positive");
  std::vector<double> pop(count, 1.0);
  std::vector<double> next(count);
  for (int l = 0; l < k; ++l) {
    for (double& out : next) {
      double s = 0.0;
      double acc = 0.0;
      for (int i = 0; i < r; ++i) {
        s += rng.exponential();
        const auto pick = static_cast<std::size_t>(rng.uniform() * static_cast<double>(count));
        acc += std::exp(-s) * pop[std::min(pick, count - 1)];
      }
      out = acc;
    }
    pop.swap(next);
  }
  return pop;
}

double lambda_kn(const GreedyTree& bottom, const GreedyTree& top) {
  if (bottom.side() != TreeSide::bottom || top.side() != TreeSide::top) {
    throw std::invalid_argument("lambda_kn expects a bottom tree and a top tree");
  }
  if (bottom.n() != top.n() || bottom.k() != top.k() || bottom.r() != top.r()) {
    throw std::invalid_argument("mismatched (n, k, r) between the trees");
  }
  const int n = bottom.n();
  const int k = bottom.k();
  if (2 * k > n) throw std::invalid_argument("lambda_kn requires k <= n / 2");

  struct Leaf {
    std::vector<int> dims;  // sorted
    double weight;
  };
  auto collect = [k](const GreedyTree& t) {
    std::vector<Leaf> out;
    const auto& leaves = t.leaves();
    for (std::size_t o = 0; o < leaves.size(); ++o) {
      if (!leaves[o].exists) continue;
      auto dims = t.path_directions(k, o);
      std::sort(dims.begin(), dims.end());
      out.push_back({std::move(dims), leaves[o].weight});
    }
    return out;
  };
  const auto low = collect(bottom);
  const auto high = collect(top);

  const double e = n - 2 * k;
  double lambda = 0.0;
  std::vector<int> common;
  for (const Leaf& u : low) {
    for (const Leaf& v : high) {
      // u is a subset of [n] \ v.dims exactly when the two direction sets are disjoint.
      common.clear();
      std::set_intersection(u.dims.begin(), u.dims.end(), v.dims.begin(), v.dims.end(), std::back_inserter(common));
      if (!common.empty()) continue;
      // 1 - w - w' is the gap between the top leaf's edge weight and the bottom one.
      const double gap = (1.0 - v.weight) - u.weight;
      if (gap < 0) continue;
      lambda += e == 0 ? 1.0 : std::exp(e * std::log(gap));
    }
  }
  return lambda;
}

std::uint64_t x_star_count(int n, int k, int r, const WeightOracle& oracle) {
  if (n > kMaxDpDimension) throw GuardError("x_star_count requires n <= " + std::to_string(kMaxDpDimension));
  const GreedyTree bottom = build_tree(n, k, r, oracle, TreeSide::bottom);
  const GreedyTree top = build_tree(n, k, r, oracle, TreeSide::top);
  return x_star_count(bottom, top, oracle);
}

std::uint64_t x_star_count(const GreedyTree& bottom, const GreedyTree& top, const WeightOracle& oracle) {
  const int n = bottom.n();
  const int k = bottom.k();
  if (n > kMaxDpDimension) throw GuardError("x_star_count requires n <= " + std::to_string(kMaxDpDimension));
  if (top.n() != n || top.k() != k || top.r() != bottom.r()) {
    throw std::invalid_argument("mismatched (n, k, r) between the trees");
  }
  if (2 * k > n) throw std::invalid_argument("x_star_count requires k <= n / 2");

  // Directions of every existing root-to-leaf path, keyed by leaf vertex.
  auto leaf_paths = [k](const GreedyTree& t) {
    std::unordered_map<std::uint64_t, std::vector<int>> out;
    const auto& leaves = t.leaves();
    for (std::size_t o = 0; o < leaves.size(); ++o) {
      if (leaves[o].exists) out.emplace(t.vertex_bits(k, o), t.path_directions(k, o));
    }
    return out;
  };
  const auto low = leaf_paths(bottom);
  const auto high = leaf_paths(top);
  if (low.empty() || high.empty()) return 0;

  std::uint64_t count = 0;
  for (const DirectPath& p : list_accessible(n, oracle, std::numeric_limits<std::size_t>::max())) {
    const auto& d = p.directions();
    const auto lo = low.find(p.vertex_after(k).bits());
    if (lo == low.end() || !std::equal(lo->second.begin(), lo->second.end(), d.begin())) continue;
    const auto hi = high.find(p.vertex_after(n - k).bits());
    if (hi == high.end() || !std::equal(hi->second.begin(), hi->second.end(), d.rbegin())) continue;
    ++count;
  }
  return count;
}

int default_r(int k) {
  if (k < 2) throw std::invalid_argument("default_r requires k >= 2");
  return static_cast<int>(std::ceil(1.5 * std::log(static_cast<double>(k))));
}

std::uint64_t guidance_n(int k, int r) {
  if (k < 1 || r < 1) throw std::invalid_argument("guidance_n requires k, r >= 1");
  const double v = 2.0 * std::pow(k, 4) * r * r * std::log(static_cast<double>(r));
  return static_cast<std::uint64_t>(std::ceil(v));
}

}  // namespace hyperpaths
