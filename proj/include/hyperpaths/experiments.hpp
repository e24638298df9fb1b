#pragma once

// Monte Carlo campaigns. Sample i always uses seed base_seed ^ i, results are
// stored by index and reduced in index order, so output does not depend on
// the number of worker threads.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "hyperpaths/output.hpp"

namespace hyperpaths {

struct ExperimentConfig {
  std::string which;
  int n = 0;
  std::vector<int> n_grid;
  std::uint64_t samples = 1;
  std::uint64_t base_seed = 0;
  int k = 0;
  int r = 0;
  unsigned threads = 1;

  Json to_json() const;
};

inline std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) noexcept { return base_seed ^ index; }

/// Calls fn(i) for i in [0, count) on up to `threads` workers (0 = hardware
/// concurrency) and returns the results in index order.
template <class T>
std::vector<T> parallel_map(std::uint64_t count, unsigned threads, const std::function<T(std::uint64_t)>& fn);

struct Interval {
  double lo;
  double hi;
};

/// Wilson score interval for count successes out of total trials.
Interval wilson_interval(std::uint64_t count, std::uint64_t total, double z = 1.96);

struct PmfEstimate {
  std::vector<std::uint64_t> counts;  // counts[x]
  std::uint64_t total = 0;
  std::vector<Interval> ci;
  double mean = 0.0;
  double second_moment = 0.0;
  double third_moment = 0.0;
  double mean_stderr = 0.0;
  double tv_to_limit = 0.0;

  double frequency(std::size_t x) const;
};

/// Empirical law of the given nonnegative integer samples.
PmfEstimate estimate_pmf(const std::vector<std::uint64_t>& samples);

/// Limit-law probabilities P(X = 0..max_x), exact coefficients where available.
std::vector<double> limit_pmf(int max_x);

/// TV distance between an empirical law and the limit law, counting the limit
/// mass beyond the largest observed value.
double tv_to_limit(const PmfEstimate& est);

/// TV distance between two empirical laws on the nonnegative integers.
double tv_distance(const PmfEstimate& a, const PmfEstimate& b);

/// sup_x |F_m(x) - F(x)|. Requires a nonempty sample.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);
/// Asymptotic Kolmogorov tail P(K > sqrt(m) d).
double ks_pvalue(double d, std::size_t m);
double exp1_cdf(double x);

/// X_n over seeds base_seed ^ i.
std::vector<std::uint64_t> sample_xn(int n, std::uint64_t samples, std::uint64_t base_seed, unsigned threads);
PmfEstimate run_pmf(const ExperimentConfig& config);

/// Exact law of X_2 by enumerating all 4! edge orderings.
std::vector<double> exact_law_n2();

struct OverlapHistogram {
  std::map<std::pair<int, int>, std::uint64_t> pairs;  // (s, g) -> ordered pairs of distinct paths
  std::uint64_t paths = 0;                              // accessible paths over all seeds
  std::uint64_t seeds = 0;

  std::uint64_t total_pairs() const;
  double mean_partners() const;
  double multi_gap_fraction() const;
};

OverlapHistogram run_pair_overlap(const ExperimentConfig& config);

struct TreeSampleRow {
  std::uint64_t seed;
  double z_bottom;
  double z_top;
  double lambda;
  bool has_counts;
  std::uint64_t x;
  std::uint64_t x_star;
  std::uint64_t poisson_lambda;  // one draw of Poisson(lambda)
};

struct TreeCampaign {
  std::vector<TreeSampleRow> rows;
  double ks_z_bottom = 0.0;
  double mean_z_bottom = 0.0;
  double mean_z_product = 0.0;
  double se_z_product = 0.0;
  double corr_z = 0.0;
  double mean_lambda = 0.0;
  double se_lambda = 0.0;
  double frac_x_equals_x_star = 0.0;
  double tv_x_star_poisson = 0.0;
  double lambda_z_correlation = 0.0;
  bool below_guidance = false;
};

/// Builds both trees per seed; X and X* are counted when n <= 24.
TreeCampaign run_tree_campaign(const ExperimentConfig& config);

double sample_mean(const std::vector<double>& v);
double sample_stderr(const std::vector<double>& v);
double sample_correlation(const std::vector<double>& a, const std::vector<double>& b);

Report pmf_report(const ExperimentConfig& config, const PmfEstimate& est);
Report overlap_report(const ExperimentConfig& config, const OverlapHistogram& hist);
Report tree_report(const ExperimentConfig& config, const TreeCampaign& campaign);

// Implementation of the template above.
template <class T>
std::vector<T> parallel_map(std::uint64_t count, unsigned threads, const std::function<T(std::uint64_t)>& fn) {
  std::vector<T> out(static_cast<std::size_t>(count));
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const auto workers = static_cast<unsigned>(std::min<std::uint64_t>(threads, count));
  if (workers <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = fn(i);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::uint64_t i = w; i < count; i += workers) out[static_cast<std::size_t>(i)] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace hyperpaths
