#include "hyperpaths/hypercube.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <stdexcept>

#include "hyperpaths/errors.hpp"

namespace hyperpaths {

void check_dimension(int n) {
  if (n < 1 || n > kMaxDimension) {
    throw std::invalid_argument("dimension must lie in [1, " + std::to_string(kMaxDimension) +
                                "], got " + std::to_string(n));
  }
}

Vertex::Vertex(int n, std::uint64_t bits) : n_(n), bits_(bits) {
  if (n < 0 || n > kMaxDimension) throw std::invalid_argument("vertex dimension out of range");
  if ((bits & ~full_mask(n)) != 0) throw std::invalid_argument("vertex has a dimension above n");
}

Vertex Vertex::of(int n, std::initializer_list<int> dims) {
  std::uint64_t bits = 0;
  for (int d : dims) {
    if (d < 1 || d > n) throw std::invalid_argument("dimension out of range");
    bits |= dim_bit(d);
  }
  return Vertex(n, bits);
}

Vertex Vertex::with(int d) const {
  if (d < 1 || d > n_) throw std::invalid_argument("dimension out of range");
  return Vertex(n_, bits_ | dim_bit(d), Unchecked{});
}

Vertex Vertex::without(int d) const {
  if (d < 1 || d > n_) throw std::invalid_argument("dimension out of range");
  return Vertex(n_, bits_ & ~dim_bit(d), Unchecked{});
}

Edge::Edge(Vertex lower_vertex, int dir) : lower(lower_vertex), direction(dir) {
  if (dir < 1 || dir > lower.n()) throw std::invalid_argument("edge direction out of range");
  if (lower.contains(dir)) throw std::invalid_argument("edge direction already in lower vertex");
}

std::string to_string(const Edge& e) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, e.lower.bits(), 16);
  return "v:" + std::string(buf, res.ptr) + ",d:" + std::to_string(e.direction);
}

Edge parse_edge(std::string_view text, int n) {
  auto fail = [&] { throw std::invalid_argument("malformed edge text: " + std::string(text)); };
  if (!text.starts_with("v:")) fail();
  auto comma = text.find(",d:");
  if (comma == std::string_view::npos) fail();
  std::uint64_t bits = 0;
  int dir = 0;
  auto hex = text.substr(2, comma - 2);
  auto dec = text.substr(comma + 3);
  if (hex.empty() || dec.empty()) fail();
  auto r1 = std::from_chars(hex.data(), hex.data() + hex.size(), bits, 16);
  auto r2 = std::from_chars(dec.data(), dec.data() + dec.size(), dir);
  if (r1.ec != std::errc{} || r1.ptr != hex.data() + hex.size()) fail();
  if (r2.ec != std::errc{} || r2.ptr != dec.data() + dec.size()) fail();
  return Edge(Vertex(n, bits), dir);
}

std::vector<Edge> enumerate_edges(int n) {
  check_dimension(n);
  if (n > 16) throw GuardError("edge enumeration supports n <= 16");
  std::vector<Edge> out;
  out.reserve(static_cast<std::size_t>(n) << (n - 1));
  for (std::uint64_t v = 0; v <= full_mask(n); ++v) {
    for (int d = 1; d <= n; ++d) {
      if ((v & dim_bit(d)) == 0) out.emplace_back(Vertex(n, v), d);
    }
  }
  return out;
}

WeightOracle::WeightOracle(std::uint64_t seed, int n)
    : seed_(seed), n_(n), seed_key_(mix64(seed + 0x243F6A8885A308D3ULL)) {
  if (n < 1 || n > kMaxOracleDimension) {
    throw std::invalid_argument("oracle dimension must lie in [1, " + std::to_string(kMaxOracleDimension) +
                                "], got " + std::to_string(n));
  }
}

std::uint64_t subset_code(std::span<const int> dims) {
  std::vector<int> sorted(dims.begin(), dims.end());
  std::sort(sorted.begin(), sorted.end());
  std::uint64_t code = 0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    const auto w = static_cast<std::size_t>(sorted[i] - 1) / 64;
    std::uint64_t word = 0;
    for (; i < sorted.size() && static_cast<std::size_t>(sorted[i] - 1) / 64 == w; ++i) {
      word |= std::uint64_t{1} << ((sorted[i] - 1) % 64);
    }
    code ^= word_code(w, word);
  }
  return code;
}

std::uint64_t WeightOracle::key(const Edge& e) const {
  if (e.lower.n() != n_) throw std::invalid_argument("edge belongs to a cube of another dimension");
  return raw_key(e.lower.bits(), e.direction);
}

double edge_weight(const WeightOracle& oracle, const Edge& e) { return oracle.weight(e); }

DirectPath::DirectPath(Vertex start, std::vector<int> directions)
    : start_(start), directions_(std::move(directions)) {
  std::uint64_t seen = start_.bits();
  for (int d : directions_) {
    if (d < 1 || d > start_.n()) throw std::invalid_argument("path direction out of range");
    if (seen & dim_bit(d)) throw std::invalid_argument("path repeats a dimension");
    seen |= dim_bit(d);
  }
}

DirectPath DirectPath::canonical(int n) {
  std::vector<int> dirs(static_cast<std::size_t>(n));
  std::iota(dirs.begin(), dirs.end(), 1);
  return DirectPath(Vertex::empty(n), std::move(dirs));
}

Vertex DirectPath::end() const { return vertex_after(length()); }

Vertex DirectPath::vertex_after(int steps) const {
  if (steps < 0 || steps > length()) throw std::out_of_range("path step out of range");
  std::uint64_t bits = start_.bits();
  for (int i = 0; i < steps; ++i) bits |= dim_bit(directions_[static_cast<std::size_t>(i)]);
  return Vertex(n(), bits);
}

Edge DirectPath::edge(int i) const {
  if (i < 0 || i >= length()) throw std::out_of_range("path edge out of range");
  return Edge(vertex_after(i), directions_[static_cast<std::size_t>(i)]);
}

std::vector<Edge> DirectPath::edges() const {
  std::vector<Edge> out;
  out.reserve(directions_.size());
  std::uint64_t bits = start_.bits();
  for (int d : directions_) {
    out.emplace_back(Vertex(n(), bits), d);
    bits |= dim_bit(d);
  }
  return out;
}

bool is_strictly_increasing(std::span<const double> weights) noexcept {
  return std::adjacent_find(weights.begin(), weights.end(),
                            [](double a, double b) { return !(a < b); }) == weights.end();
}

bool is_strictly_increasing(std::span<const std::uint64_t> keys) noexcept {
  return std::adjacent_find(keys.begin(), keys.end(),
                            [](std::uint64_t a, std::uint64_t b) { return !(a < b); }) == keys.end();
}

bool is_accessible(const DirectPath& path, const WeightOracle& oracle) {
  if (path.n() != oracle.n()) throw std::invalid_argument("path and oracle dimensions differ");
  std::uint64_t bits = path.start().bits();
  std::uint64_t prev = 0;
  bool first = true;
  for (int d : path.directions()) {
    const std::uint64_t k = oracle.raw_key(bits, d);
    if (!first && !(prev < k)) return false;
    prev = k;
    first = false;
    bits |= dim_bit(d);
  }
  return true;
}

std::vector<DirectPath> enumerate_direct_paths(const Vertex& from, const Vertex& to) {
  if (from.n() != to.n()) throw std::invalid_argument("vertices from different cubes");
  if (!from.subset_of(to)) return {};
  std::vector<int> dims;
  for (int d = 1; d <= from.n(); ++d) {
    if (to.contains(d) && !from.contains(d)) dims.push_back(d);
  }
  if (dims.size() > 10) throw GuardError("path enumeration supports level gaps <= 10");
  std::vector<DirectPath> out;
  do {
    out.emplace_back(from, dims);
  } while (std::next_permutation(dims.begin(), dims.end()));
  return out;
}

int GapEncoding::nontrivial_gaps() const noexcept {
  return static_cast<int>(std::count_if(gaps.begin(), gaps.end(), [](int a) { return a > 0; }));
}

bool is_valid_overlap_class(int n, int s, int g) noexcept {
  if (s == n) return g == 0;
  if (s < 0 || s > n - 2) return false;
  return g >= 1 && g <= std::min(s + 1, (n - s) / 2);
}

namespace {

// A permutation p of {1..m} shares edge t (1-based) with the canonical path
// iff p_t == t and {p_1..p_{t-1}} = {1..t-1}, i.e. the running max before t is t-1.
bool shares_no_canonical_edge(const std::vector<int>& p) {
  int running_max = 0;
  for (std::size_t t = 0; t < p.size(); ++t) {
    if (p[t] == static_cast<int>(t) + 1 && running_max == static_cast<int>(t)) return false;
    running_max = std::max(running_max, p[t]);
  }
  return true;
}

// Relabel so that ref becomes the canonical path: label[d] = position of d in ref (1-based).
std::vector<int> relabeling(const DirectPath& ref) {
  std::vector<int> label(static_cast<std::size_t>(ref.n()) + 1, 0);
  for (int t = 0; t < ref.length(); ++t) label[static_cast<std::size_t>(ref.directions()[static_cast<std::size_t>(t)])] = t + 1;
  return label;
}

void require_full_path(const DirectPath& p, int n, const char* name) {
  if (p.n() != n || p.start().bits() != 0 || p.length() != n) {
    throw std::invalid_argument(std::string(name) + " must be a direct path from the empty set to [n]");
  }
}

}  // namespace

void validate_gap_encoding(const GapEncoding& enc, int n) {
  const int s = enc.shared;
  if (s < 0 || s > n) throw std::invalid_argument("shared-edge count out of range");
  if (enc.gaps.size() != static_cast<std::size_t>(s) + 1 || enc.subpaths.size() != enc.gaps.size()) {
    throw std::invalid_argument("gap vector must have s + 1 entries");
  }
  int total = 0;
  for (std::size_t i = 0; i < enc.gaps.size(); ++i) {
    const int a = enc.gaps[i];
    if (a < 0 || a == 1) throw std::invalid_argument("gap entries must be 0 or at least 2");
    total += a;
    const auto& sub = enc.subpaths[i];
    if (sub.size() != static_cast<std::size_t>(a)) throw std::invalid_argument("gap subpath length mismatch");
    std::vector<int> sorted(sub);
    std::sort(sorted.begin(), sorted.end());
    for (int t = 0; t < a; ++t) {
      if (sorted[static_cast<std::size_t>(t)] != t + 1) throw std::invalid_argument("gap subpath is not a permutation");
    }
    if (!shares_no_canonical_edge(sub)) throw std::invalid_argument("gap subpath shares an edge with the reference");
  }
  if (total != n - s) throw std::invalid_argument("gap vector must sum to n - s");
  if (!is_valid_overlap_class(n, s, enc.nontrivial_gaps())) {
    throw std::invalid_argument("(s, g) outside the realisable region");
  }
}

GapEncoding encode_gap(const DirectPath& pi, const DirectPath& ref) {
  const int n = ref.n();
  require_full_path(ref, n, "reference");
  require_full_path(pi, n, "path");
  const auto label = relabeling(ref);
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) p[static_cast<std::size_t>(t)] = label[static_cast<std::size_t>(pi.directions()[static_cast<std::size_t>(t)])];

  GapEncoding enc;
  int running_max = 0;
  int gap_start = 0;  // number of edges before the current gap
  for (int t = 0; t < n; ++t) {
    const int dir = p[static_cast<std::size_t>(t)];
    if (dir == t + 1 && running_max == t) {
      const int a = t - gap_start;
      enc.gaps.push_back(a);
      std::vector<int> sub;
      for (int u = gap_start; u < t; ++u) sub.push_back(p[static_cast<std::size_t>(u)] - gap_start);
      enc.subpaths.push_back(std::move(sub));
      ++enc.shared;
      gap_start = t + 1;
    }
    running_max = std::max(running_max, dir);
  }
  const int a = n - gap_start;
  enc.gaps.push_back(a);
  std::vector<int> sub;
  for (int u = gap_start; u < n; ++u) sub.push_back(p[static_cast<std::size_t>(u)] - gap_start);
  enc.subpaths.push_back(std::move(sub));
  return enc;
}

DirectPath decode_gap(const GapEncoding& enc, const DirectPath& ref) {
  const int n = ref.n();
  require_full_path(ref, n, "reference");
  validate_gap_encoding(enc, n);
  std::vector<int> dirs;
  dirs.reserve(static_cast<std::size_t>(n));
  int offset = 0;
  for (std::size_t i = 0; i < enc.gaps.size(); ++i) {
    for (int d : enc.subpaths[i]) dirs.push_back(ref.directions()[static_cast<std::size_t>(offset + d - 1)]);
    offset += enc.gaps[i];
    if (i + 1 < enc.gaps.size()) {
      dirs.push_back(ref.directions()[static_cast<std::size_t>(offset)]);
      ++offset;
    }
  }
  return DirectPath(Vertex::empty(n), std::move(dirs));
}

std::vector<std::vector<int>> edge_disjoint_permutations(int m) {
  if (m < 0) throw std::invalid_argument("negative subcube dimension");
  if (m > 10) throw GuardError("edge-disjoint enumeration supports m <= 10");
  std::vector<int> p(static_cast<std::size_t>(m));
  std::iota(p.begin(), p.end(), 1);
  std::vector<std::vector<int>> out;
  do {
    if (shares_no_canonical_edge(p)) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace hyperpaths
