#include "hyperpaths/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hyperpaths/errors.hpp"
#include "hyperpaths/exact_count.hpp"
#include "hyperpaths/hypercube.hpp"
#include "hyperpaths/limit_law.hpp"
#include "hyperpaths/rng.hpp"
#include "hyperpaths/tree_lab.hpp"

namespace hyperpaths {
namespace {

void require_samples(const ExperimentConfig& c) {
  if (c.samples < 1) throw std::invalid_argument("samples must be at least 1");
}

PmfEstimate pmf_of(const std::vector<std::uint64_t>& v) { return estimate_pmf(v); }

}  // namespace

Json ExperimentConfig::to_json() const {
  Json j;
  j["which"] = which;
  j["n"] = n;
  if (!n_grid.empty()) j["n_grid"] = n_grid;
  j["samples"] = samples;
  j["base_seed"] = base_seed;
  j["k"] = k;
  j["r"] = r;
  return j;
}

Interval wilson_interval(std::uint64_t count, std::uint64_t total, double z) {
  if (total == 0) return {0.0, 1.0};
  const double m = static_cast<double>(total);
  const double p = static_cast<double>(count) / m;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / m;
  const double centre = (p + z2 / (2 * m)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / m + z2 / (4 * m * m)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double PmfEstimate::frequency(std::size_t x) const {
  if (total == 0 || x >= counts.size()) return 0.0;
  return static_cast<double>(counts[x]) / static_cast<double>(total);
}

PmfEstimate estimate_pmf(const std::vector<std::uint64_t>& samples) {
  PmfEstimate e;
  e.total = samples.size();
  if (samples.empty()) return e;
  const std::uint64_t max = *std::max_element(samples.begin(), samples.end());
  e.counts.assign(static_cast<std::size_t>(max) + 1, 0);
  double s1 = 0, s2 = 0, s3 = 0;
  for (std::uint64_t x : samples) {
    ++e.counts[static_cast<std::size_t>(x)];
    const double d = static_cast<double>(x);
    s1 += d;
    s2 += d * d;
    s3 += d * d * d;
  }
  const double m = static_cast<double>(e.total);
  e.mean = s1 / m;
  e.second_moment = s2 / m;
  e.third_moment = s3 / m;
  const double var = e.total > 1 ? (s2 - m * e.mean * e.mean) / (m - 1) : 0.0;
  e.mean_stderr = std::sqrt(std::max(0.0, var) / m);
  for (std::uint64_t c : e.counts) e.ci.push_back(wilson_interval(c, e.total));
  e.tv_to_limit = tv_to_limit(e);
  return e;
}

std::vector<double> limit_pmf(int max_x) {
  std::vector<double> p;
  p.reserve(static_cast<std::size_t>(max_x) + 1);
  static const LimitLawContext ctx = make_limit_context(kMaxExactPmf, 40);
  for (int x = 0; x <= max_x; ++x) p.push_back(x <= kMaxExactPmf ? pmf_exact(x, ctx).value : pmf_quadrature(x));
  return p;
}

double tv_to_limit(const PmfEstimate& est) {
  if (est.total == 0) return 0.0;
  const int max_x = static_cast<int>(est.counts.size()) - 1;
  const auto ref = limit_pmf(max_x);
  double sum = 0.0;
  for (int x = 0; x <= max_x; ++x) sum += std::abs(est.frequency(static_cast<std::size_t>(x)) - ref[static_cast<std::size_t>(x)]);
  sum += tail_quadrature(max_x);
  return 0.5 * sum;
}

double tv_distance(const PmfEstimate& a, const PmfEstimate& b) {
  const std::size_t m = std::max(a.counts.size(), b.counts.size());
  double sum = 0.0;
  for (std::size_t x = 0; x < m; ++x) sum += std::abs(a.frequency(x) - b.frequency(x));
  return 0.5 * sum;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_statistic needs at least one sample");
  std::sort(samples.begin(), samples.end());
  const double m = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / m - f, f - static_cast<double>(i) / m});
  }
  return std::clamp(d, 0.0, 1.0);
}

double ks_pvalue(double d, std::size_t m) {
  const double t = std::sqrt(static_cast<double>(m)) * d;
  if (t < 0.2) return 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * t * t);
    sum += (j % 2 ? 2.0 : -2.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

double exp1_cdf(double x) { return x <= 0 ? 0.0 : -std::expm1(-x); }

std::vector<std::uint64_t> sample_xn(int n, std::uint64_t samples, std::uint64_t base_seed, unsigned threads) {
  if (n < 1 || n > kMaxDpDimension) {
    throw GuardError("simulation requires 1 <= n <= " + std::to_string(kMaxDpDimension));
  }
  return parallel_map<std::uint64_t>(samples, threads, [&](std::uint64_t i) {
    return count_accessible_dp(n, WeightOracle(derive_seed(base_seed, i), n));
  });
}

PmfEstimate run_pmf(const ExperimentConfig& config) {
  require_samples(config);
  return pmf_of(sample_xn(config.n, config.samples, config.base_seed, config.threads));
}

std::vector<double> exact_law_n2() {
  const auto edges = enumerate_edges(2);
  const std::vector<DirectPath> paths{DirectPath::from_permutation(2, {1, 2}), DirectPath::from_permutation(2, {2, 1})};
  std::vector<int> rank(edges.size());
  std::iota(rank.begin(), rank.end(), 0);
  std::vector<double> law(3, 0.0);
  double orderings = 0;
  do {
    int x = 0;
    for (const DirectPath& p : paths) {
      int prev = -1;
      bool ok = true;
      for (const Edge& e : p.edges()) {
        const auto pos = static_cast<std::size_t>(std::find(edges.begin(), edges.end(), e) - edges.begin());
        if (rank[pos] <= prev) ok = false;
        prev = rank[pos];
      }
      x += ok;
    }
    law[static_cast<std::size_t>(x)] += 1;
    orderings += 1;
  } while (std::next_permutation(rank.begin(), rank.end()));
  for (double& v : law) v /= orderings;
  return law;
}

std::uint64_t OverlapHistogram::total_pairs() const {
  std::uint64_t t = 0;
  for (const auto& [key, c] : pairs) t += c;
  return t;
}

double OverlapHistogram::mean_partners() const {
  return paths == 0 ? 0.0 : static_cast<double>(total_pairs()) / static_cast<double>(paths);
}

double OverlapHistogram::multi_gap_fraction() const {
  const std::uint64_t t = total_pairs();
  if (t == 0) return 0.0;
  std::uint64_t multi = 0;
  for (const auto& [key, c] : pairs) {
    if (key.second >= 2) multi += c;
  }
  return static_cast<double>(multi) / static_cast<double>(t);
}

OverlapHistogram run_pair_overlap(const ExperimentConfig& config) {
  require_samples(config);
  const int n = config.n;
  if (n < 1 || n > kMaxDpDimension) {
    throw GuardError("pair overlap requires 1 <= n <= " + std::to_string(kMaxDpDimension));
  }
  using Local = std::pair<std::map<std::pair<int, int>, std::uint64_t>, std::uint64_t>;
  const auto per_seed = parallel_map<Local>(config.samples, config.threads, [&](std::uint64_t i) {
    const WeightOracle oracle(derive_seed(config.base_seed, i), n);
    const auto paths = list_accessible(n, oracle);
    Local local{{}, paths.size()};
    for (std::size_t a = 0; a < paths.size(); ++a) {
      for (std::size_t b = 0; b < paths.size(); ++b) {
        if (a == b) continue;
        const GapEncoding enc = encode_gap(paths[a], paths[b]);
        ++local.first[{enc.shared, enc.nontrivial_gaps()}];
      }
    }
    return local;
  });
  OverlapHistogram h;
  h.seeds = config.samples;
  for (const auto& [m, count] : per_seed) {
    h.paths += count;
    for (const auto& [key, c] : m) h.pairs[key] += c;
  }
  return h;
}

double sample_mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_stderr(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = sample_mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

double sample_correlation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) throw std::invalid_argument("correlation needs two equal samples");
  const double ma = sample_mean(a);
  const double mb = sample_mean(b);
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0 || sbb == 0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

TreeCampaign run_tree_campaign(const ExperimentConfig& config) {
  require_samples(config);
  const int n = config.n;
  const int k = config.k;
  const int r = config.r;
  if (2 * k > n) throw std::invalid_argument("tree campaign requires k <= n / 2");
  const bool counts = n <= kMaxDpDimension;

  TreeCampaign c;
  c.rows = parallel_map<TreeSampleRow>(config.samples, config.threads, [&](std::uint64_t i) {
    const std::uint64_t seed = derive_seed(config.base_seed, i);
    const WeightOracle oracle(seed, n);
    const GreedyTree bottom = build_tree(n, k, r, oracle, TreeSide::bottom);
    const GreedyTree top = build_tree(n, k, r, oracle, TreeSide::top);
    TreeSampleRow row{seed, z_functional(bottom), z_functional(top), lambda_kn(bottom, top), counts, 0, 0, 0};
    if (counts) {
      row.x = count_accessible_dp(n, oracle);
      row.x_star = x_star_count(bottom, top, oracle);
      CounterRng rng(seed, 1);
      row.poisson_lambda = sample_poisson(row.lambda, rng);
    }
    return row;
  });

  std::vector<double> zb, zt, prod, lam;
  for (const auto& row : c.rows) {
    zb.push_back(row.z_bottom);
    zt.push_back(row.z_top);
    prod.push_back(row.z_bottom * row.z_top);
    lam.push_back(row.lambda);
  }
  c.ks_z_bottom = ks_statistic(zb, exp1_cdf);
  c.mean_z_bottom = sample_mean(zb);
  c.mean_z_product = sample_mean(prod);
  c.se_z_product = sample_stderr(prod);
  c.mean_lambda = sample_mean(lam);
  c.se_lambda = sample_stderr(lam);
  if (c.rows.size() >= 2) {
    c.corr_z = sample_correlation(zb, zt);
    c.lambda_z_correlation = sample_correlation(lam, prod);
  }
  if (counts) {
    std::vector<std::uint64_t> xs, ps;
    std::uint64_t equal = 0;
    for (const auto& row : c.rows) {
      equal += row.x == row.x_star;
      xs.push_back(row.x_star);
      ps.push_back(row.poisson_lambda);
    }
    c.frac_x_equals_x_star = static_cast<double>(equal) / static_cast<double>(c.rows.size());
    c.tv_x_star_poisson = tv_distance(estimate_pmf(xs), estimate_pmf(ps));
  }
  c.below_guidance = k >= 2 && static_cast<std::uint64_t>(n) < guidance_n(k, r);
  return c;
}

Report pmf_report(const ExperimentConfig& config, const PmfEstimate& est) {
  Report rep;
  rep.config = config.to_json();
  const auto ref = limit_pmf(static_cast<int>(est.counts.size()) - 1);
  for (std::size_t x = 0; x < est.counts.size(); ++x) {
    Json row;
    row["x"] = x;
    row["count"] = est.counts[x];
    row["frequency"] = est.frequency(x);
    row["ci_lo"] = est.ci[x].lo;
    row["ci_hi"] = est.ci[x].hi;
    row["limit_pmf"] = ref[x];
    rep.rows.push_back(row);
  }
  rep.summary["samples"] = est.total;
  rep.summary["mean"] = est.mean;
  rep.summary["mean_stderr"] = est.mean_stderr;
  rep.summary["second_moment"] = est.second_moment;
  rep.summary["third_moment"] = est.third_moment;
  rep.summary["tv_to_limit"] = est.tv_to_limit;
  rep.summary["mean_within_3sigma"] = std::abs(est.mean - 1.0) <= 3 * est.mean_stderr;
  rep.summary["third_moment_status"] = "report-only";
  return rep;
}

Report overlap_report(const ExperimentConfig& config, const OverlapHistogram& hist) {
  Report rep;
  rep.config = config.to_json();
  const std::uint64_t total = hist.total_pairs();
  for (const auto& [key, c] : hist.pairs) {
    Json row;
    row["s"] = key.first;
    row["g"] = key.second;
    row["pairs"] = c;
    row["fraction"] = total ? static_cast<double>(c) / static_cast<double>(total) : 0.0;
    rep.rows.push_back(row);
  }
  rep.summary["seeds"] = hist.seeds;
  rep.summary["accessible_paths"] = hist.paths;
  rep.summary["ordered_pairs"] = total;
  rep.summary["mean_partners"] = hist.mean_partners();
  rep.summary["multi_gap_fraction"] = hist.multi_gap_fraction();
  return rep;
}

Report tree_report(const ExperimentConfig& config, const TreeCampaign& c) {
  Report rep;
  rep.config = config.to_json();
  for (const auto& row : c.rows) {
    Json j;
    j["seed"] = row.seed;
    j["z_bottom"] = row.z_bottom;
    j["z_top"] = row.z_top;
    j["lambda"] = row.lambda;
    if (row.has_counts) {
      j["x"] = row.x;
      j["x_star"] = row.x_star;
    }
    rep.rows.push_back(j);
  }
  const double expected = std::pow(1.0 - std::ldexp(1.0, -config.r), 2 * config.k);
  rep.summary["ks_z_bottom_exp1"] = c.ks_z_bottom;
  rep.summary["mean_z_bottom"] = c.mean_z_bottom;
  rep.summary["mean_z_product"] = c.mean_z_product;
  rep.summary["expected_z_product"] = expected;
  rep.summary["z_product_within_3sigma"] = std::abs(c.mean_z_product - expected) <= 3 * c.se_z_product;
  rep.summary["corr_z_bottom_top"] = c.corr_z;
  rep.summary["mean_lambda"] = c.mean_lambda;
  rep.summary["lambda_z_product_correlation"] = c.lambda_z_correlation;
  if (config.n <= kMaxDpDimension) {
    rep.summary["fraction_x_equals_x_star"] = c.frac_x_equals_x_star;
    rep.summary["tv_x_star_poisson_lambda"] = c.tv_x_star_poisson;
  }
  rep.summary["below_guidance_n"] = c.below_guidance;
  return rep;
}

}  // namespace hyperpaths
