#pragma once

// Vertices, edges, direct paths and the seeded edge-weight oracle of the
// n-dimensional hypercube. A vertex is a subset of {1, ..., n}; dimension d
// lives in bit d-1.

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hyperpaths/rng.hpp"

namespace hyperpaths {

inline constexpr int kMaxDimension = 62;
/// Weight oracles (unlike vertices) also serve the sparse tree code for large n.
inline constexpr int kMaxOracleDimension = 1 << 20;

constexpr std::uint64_t dim_bit(int d) noexcept { return std::uint64_t{1} << (d - 1); }
constexpr std::uint64_t full_mask(int n) noexcept {
  return n == 0 ? 0 : (~std::uint64_t{0} >> (64 - n));
}

/// Throws std::invalid_argument unless 1 <= n <= kMaxDimension.
void check_dimension(int n);

class Vertex {
 public:
  Vertex(int n, std::uint64_t bits);

  static Vertex empty(int n) { return Vertex(n, 0); }
  static Vertex full(int n) { return Vertex(n, full_mask(n)); }
  static Vertex of(int n, std::initializer_list<int> dims);

  int n() const noexcept { return n_; }
  std::uint64_t bits() const noexcept { return bits_; }
  int level() const noexcept { return std::popcount(bits_); }
  bool contains(int d) const noexcept { return d >= 1 && d <= n_ && (bits_ & dim_bit(d)) != 0; }
  bool subset_of(const Vertex& other) const noexcept {
    return n_ == other.n_ && (bits_ & ~other.bits_) == 0;
  }

  Vertex with(int d) const;
  Vertex without(int d) const;
  Vertex complement() const noexcept { return Vertex(n_, full_mask(n_) & ~bits_, Unchecked{}); }

  friend bool operator==(const Vertex&, const Vertex&) = default;
  friend auto operator<=>(const Vertex&, const Vertex&) = default;

 private:
  struct Unchecked {};
  Vertex(int n, std::uint64_t bits, Unchecked) noexcept : n_(n), bits_(bits) {}

  int n_;
  std::uint64_t bits_;
};

/// An edge, keyed by its lower endpoint and the dimension it adds.
struct Edge {
  Edge(Vertex lower_vertex, int dir);

  Vertex lower;
  int direction;

  Vertex upper() const { return lower.with(direction); }
  /// An edge from level k-1 to level k has level k.
  int level() const noexcept { return lower.level() + 1; }

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Canonical text form "v:<hex bits>,d:<direction>".
std::string to_string(const Edge& e);
Edge parse_edge(std::string_view text, int n);

/// All n * 2^(n-1) edges, ordered by (lower bits, direction). n <= 16.
std::vector<Edge> enumerate_edges(int n);

/// Hash code of a subset of [n] stored as 64-bit words, word w holding
/// dimensions 64w+1 .. 64w+64. Word 0 enters unchanged and the others through
/// word_code, so for n <= 64 the code is the plain bitmask.
constexpr std::uint64_t word_code(std::size_t w, std::uint64_t word) noexcept {
  if (w == 0) return word;
  return word == 0 ? 0 : mix64(word + static_cast<std::uint64_t>(w) * 0x9E3779B97F4A7C15ULL);
}
/// XOR of word_code over the words of the subset given by its dimensions.
std::uint64_t subset_code(std::span<const int> dims);

/// Deterministic i.i.d. uniform edge weights. The weight of an edge is a
/// hash of (seed, lower bits, direction); comparisons use the full 64-bit
/// key, and weight() exposes the top 52 bits as a double in (0, 1).
class WeightOracle {
 public:
  WeightOracle(std::uint64_t seed, int n);

  std::uint64_t seed() const noexcept { return seed_; }
  int n() const noexcept { return n_; }

  std::uint64_t key(const Edge& e) const;
  double weight(const Edge& e) const { return to_unit_open(key(e)); }

  /// Unchecked hot-path variant: caller guarantees dir in [1, n] and dir not in lower.
  /// For n > 64 pass the subset code of the lower vertex instead of its bits.
  std::uint64_t raw_key(std::uint64_t lower_code, int dir) const noexcept {
    return mix64(mix64(seed_key_ ^ lower_code) + static_cast<std::uint64_t>(dir) * 0xD1B54A32D192ED03ULL);
  }

 private:
  std::uint64_t seed_;
  int n_;
  std::uint64_t seed_key_;
};

/// Weight of e under the oracle; throws std::invalid_argument for an edge
/// that does not belong to the oracle's cube.
double edge_weight(const WeightOracle& oracle, const Edge& e);

/// A direct path: a start vertex and an ordered list of distinct dimensions
/// not in the start vertex.
class DirectPath {
 public:
  DirectPath(Vertex start, std::vector<int> directions);

  /// The path from the empty set adding 1, 2, ..., n in order.
  static DirectPath canonical(int n);
  /// The empty-set-to-full path adding dimensions in the given order.
  static DirectPath from_permutation(int n, std::vector<int> order) {
    return DirectPath(Vertex::empty(n), std::move(order));
  }

  int n() const noexcept { return start_.n(); }
  const Vertex& start() const noexcept { return start_; }
  const std::vector<int>& directions() const noexcept { return directions_; }
  int length() const noexcept { return static_cast<int>(directions_.size()); }
  Vertex end() const;

  /// Vertex after `steps` edges (0 <= steps <= length()).
  Vertex vertex_after(int steps) const;
  /// The i-th edge, 0-based.
  Edge edge(int i) const;
  std::vector<Edge> edges() const;

  friend bool operator==(const DirectPath&, const DirectPath&) = default;
  friend auto operator<=>(const DirectPath&, const DirectPath&) = default;

 private:
  Vertex start_;
  std::vector<int> directions_;
};

bool is_strictly_increasing(std::span<const double> weights) noexcept;
bool is_strictly_increasing(std::span<const std::uint64_t> keys) noexcept;

/// True iff the edge weights strictly increase along the path. Ties are not accessible.
bool is_accessible(const DirectPath& path, const WeightOracle& oracle);

/// All direct paths from `from` to `to`; empty when from is not a subset of to.
/// The level difference is limited to 10.
std::vector<DirectPath> enumerate_direct_paths(const Vertex& from, const Vertex& to);

/// Encoding of a full path relative to a reference full path: the gap vector
/// a = (a_0, ..., a_s) between the s shared edges, and the gap subpaths, each
/// stored as a permutation of {1, ..., a_i} edge-disjoint from the canonical
/// path of that subcube.
struct GapEncoding {
  int shared = 0;
  std::vector<int> gaps;
  std::vector<std::vector<int>> subpaths;

  /// g: the number of nonzero gaps.
  int nontrivial_gaps() const noexcept;

  friend bool operator==(const GapEncoding&, const GapEncoding&) = default;
};

/// (s, g) is realised by some pair of full paths in the n-cube.
bool is_valid_overlap_class(int n, int s, int g) noexcept;

/// Throws std::invalid_argument when the encoding is inconsistent for dimension n.
void validate_gap_encoding(const GapEncoding& enc, int n);

GapEncoding encode_gap(const DirectPath& pi, const DirectPath& ref);
DirectPath decode_gap(const GapEncoding& enc, const DirectPath& ref);

/// Permutations of {1..m} that share no edge with the canonical m-path.
/// m <= 10.
std::vector<std::vector<int>> edge_disjoint_permutations(int m);

}  // namespace hyperpaths
