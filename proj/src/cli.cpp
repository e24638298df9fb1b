#include "hyperpaths/cli.hpp"

#include <iostream>
#include <map>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "hyperpaths/errors.hpp"
#include "hyperpaths/exact_count.hpp"
#include "hyperpaths/experiments.hpp"
#include "hyperpaths/limit_law.hpp"
#include "hyperpaths/output.hpp"
#include "hyperpaths/pair_combinatorics.hpp"
#include "hyperpaths/tree_lab.hpp"

namespace hyperpaths {
namespace {

struct Globals {
  std::uint64_t seed = 0;
  OutputFormat format = OutputFormat::csv;
  std::string out;
  unsigned threads = 1;
};

struct Options {
  int n = 10;
  std::uint64_t samples = 1000;
  int k = 0;
  int r = 0;
  int x_max = 10;
  int k_max = 6;
  int digits = 12;
  std::uint64_t budget = kDefaultCompositionBudget;
  bool list = false;
  bool exact = false;
  bool grid = false;
};

Json rational_json(const Rational& q) { return to_string(q); }

void emit(const Globals& g, const Report& rep) { write_output(render(rep, g.format), g.out); }

Json base_config(const char* which, const Globals& g) {
  Json c;
  c["command"] = which;
  c["seed"] = g.seed;
  return c;
}

void cmd_simulate(const Globals& g, const Options& o) {
  ExperimentConfig c{"simulate", o.n, {}, o.samples, g.seed, 0, 0, g.threads};
  emit(g, pmf_report(c, run_pmf(c)));
}

void cmd_exact(const Globals& g, const Options& o) {
  if (o.n < 1 || o.n > kMaxDpDimension) {
    throw GuardError("exact counting requires 1 <= n <= " + std::to_string(kMaxDpDimension) + " (got n = " +
                     std::to_string(o.n) + ")");
  }
  Report rep;
  rep.config = base_config("exact", g);
  rep.config["n"] = o.n;
  const WeightOracle oracle(g.seed, o.n);
  if (o.list) {
    std::size_t index = 0;
    for (const DirectPath& p : list_accessible(o.n, oracle)) {
      std::string dirs;
      for (int d : p.directions()) dirs += (dirs.empty() ? "" : " ") + std::to_string(d);
      Json row;
      row["index"] = index++;
      row["directions"] = dirs;
      rep.rows.push_back(row);
    }
    rep.summary["x"] = rep.rows.size();
  } else {
    std::uint64_t total = 0;
    for (const DpState& s : top_states(o.n, oracle)) {
      Json row;
      row["last_direction"] = s.last_direction;
      row["count"] = s.count;
      rep.rows.push_back(row);
      total += s.count;
    }
    rep.summary["x"] = total;
  }
  emit(g, rep);
}

void cmd_pair_overlap(const Globals& g, const Options& o) {
  ExperimentConfig c{"pair-overlap", o.n, {}, o.samples, g.seed, 0, 0, g.threads};
  emit(g, overlap_report(c, run_pair_overlap(c)));
}

void cmd_limit_pmf(const Globals& g, const Options& o) {
  if (o.x_max < 0) throw std::invalid_argument("--x-max must be nonnegative");
  Report rep;
  rep.config = base_config("limit-pmf", g);
  rep.config["x_max"] = o.x_max;
  const LimitLawContext ctx = make_limit_context(std::min(o.x_max, kMaxExactPmf), 40);
  for (int x = 0; x <= o.x_max; ++x) {
    Json row;
    row["x"] = x;
    if (x <= ctx.max_x()) {
      const PmfValue v = pmf_exact(x, ctx);
      row["coeff_delta"] = rational_json(v.coeffs.a);
      row["coeff_const"] = rational_json(v.coeffs.b);
      row["value"] = v.value;
      row["method"] = "exact";
    } else {
      row["coeff_delta"] = "";
      row["coeff_const"] = "";
      row["value"] = pmf_quadrature(x);
      row["method"] = "quadrature";
    }
    rep.rows.push_back(row);
  }
  emit(g, rep);
}

void cmd_moments(const Globals& g, const Options& o) {
  Report rep;
  rep.config = base_config("moments", g);
  rep.config["k_max"] = o.k_max;
  for (int k = 1; k <= o.k_max; ++k) {
    Json row;
    row["k"] = k;
    row["moment"] = moment(k).str();
    rep.rows.push_back(row);
  }
  emit(g, rep);
}

void cmd_second_moment(const Globals& g, const Options& o) {
  Report rep;
  rep.config = base_config("second-moment", g);
  rep.config["n"] = o.n;
  if (o.exact) {
    const Rational m2 = second_moment_exact(o.n);
    for (int s = 0; s <= o.n; ++s) {
      for (int gg = 0; gg <= s + 1; ++gg) {
        if (!is_valid_overlap_class(o.n, s, gg)) continue;
        const Rational c = c_sg_exact(o.n, s, gg);
        Json row;
        row["s"] = s;
        row["g"] = gg;
        row["value"] = rational_json(c);
        row["decimal"] = c.convert_to<double>();
        rep.rows.push_back(row);
      }
    }
    rep.summary["second_moment"] = rational_json(m2);
    rep.summary["second_moment_decimal"] = m2.convert_to<double>();
    emit(g, rep);
    return;
  }
  rep.config["budget"] = o.budget;
  if (o.grid) {
    for (const CsgGridRow& row : csg_grid(o.n, o.budget)) {
      Json j;
      j["s"] = row.s;
      j["g"] = row.g;
      j["value"] = row.value.value();
      j["exactness"] = row.value.exactness == Exactness::exact ? "exact" : "upper_bound";
      rep.rows.push_back(j);
    }
  }
  const int k = o.k > 0 ? o.k : std::min(20, std::max(0, o.n - 2));
  rep.config["k"] = k;
  const PairSums ps = pair_sums(o.n, k, o.budget);
  rep.summary["single_gap_head"] = ps.single_gap_head;
  rep.summary["single_gap_tail"] = ps.single_gap_tail;
  rep.summary["multi_gap_lower"] = ps.multi_gap_lower;
  rep.summary["multi_gap_upper"] = ps.multi_gap_upper;
  rep.summary["second_moment_lower"] = ps.second_moment_lower;
  rep.summary["second_moment_upper"] = ps.second_moment_upper;
  rep.summary["truncated"] = ps.truncated;
  emit(g, rep);
}

void cmd_tree(const Globals& g, const Options& o) {
  const int k = o.k > 0 ? o.k : 2;
  const int r = o.r > 0 ? o.r : default_r(std::max(2, k));
  ExperimentConfig c{"tree", o.n, {}, o.samples, g.seed, k, r, g.threads};
  if (k >= 2 && static_cast<std::uint64_t>(o.n) < guidance_n(k, r)) {
    std::cerr << "warning: n = " << o.n << " is below the coupling scale " << guidance_n(k, r) << " for (k, r) = ("
              << k << ", " << r << ")\n";
  }
  emit(g, tree_report(c, run_tree_campaign(c)));
}

void cmd_gompertz(const Globals& g, const Options& o) {
  const HighReal delta = gompertz_delta(std::min(kMaxDeltaDigits, o.digits + 5));
  const std::string text = delta.str(o.digits, std::ios::fixed);
  if (g.format == OutputFormat::csv) {
    write_output(text + "\n", g.out);
    return;
  }
  Report rep;
  rep.config = base_config("gompertz", g);
  rep.config["digits"] = o.digits;
  Json row;
  row["delta"] = text;
  rep.rows.push_back(row);
  emit(g, rep);
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Accessible paths in the randomly weighted hypercube"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Read options from a TOML or INI file");

  Globals g;
  Options o;
  const std::map<std::string, OutputFormat> formats{{"csv", OutputFormat::csv}, {"json", OutputFormat::json}};
  app.add_option("--seed", g.seed, "Base seed")->capture_default_str();
  app.add_option("--format", g.format, "Output format")->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  app.add_option("--out", g.out, "Output file (standard output when omitted)");
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)")->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "Empirical law of X_n");
  simulate->add_option("--n", o.n, "Dimension")->capture_default_str();
  simulate->add_option("--samples", o.samples, "Number of seeds")->capture_default_str();

  auto* exact = app.add_subcommand("exact", "Exact accessible path count for one seed");
  exact->add_option("--n", o.n, "Dimension")->capture_default_str();
  exact->add_flag("--list", o.list, "List every accessible path");

  auto* overlap = app.add_subcommand("pair-overlap", "Overlap classes of accessible path pairs");
  overlap->add_option("--n", o.n, "Dimension")->capture_default_str();
  overlap->add_option("--samples", o.samples, "Number of seeds")->capture_default_str();

  auto* pmf = app.add_subcommand("limit-pmf", "Limit law probabilities");
  pmf->add_option("--x-max", o.x_max, "Largest x")->capture_default_str();

  auto* moments = app.add_subcommand("moments", "Exact moments of the limit law");
  moments->add_option("--k-max", o.k_max, "Largest order")->check(CLI::Range(1, kMaxMomentOrder))->capture_default_str();

  auto* second = app.add_subcommand("second-moment", "Pair sums and the second moment of X_n");
  second->add_option("--n", o.n, "Dimension")->capture_default_str();
  second->add_option("--k", o.k, "Head cutoff for single-gap sums");
  second->add_option("--budget", o.budget, "Composition budget per (s, g)")->capture_default_str();
  second->add_flag("--exact", o.exact, "Exact rationals (n <= 16)");
  second->add_flag("--grid", o.grid, "Emit the full c_{s,g} grid");

  auto* tree = app.add_subcommand("tree", "Greedy tree functionals per seed");
  tree->add_option("--n", o.n, "Dimension")->capture_default_str();
  tree->add_option("--k", o.k, "Tree depth");
  tree->add_option("--r", o.r, "Children per node");
  tree->add_option("--samples", o.samples, "Number of seeds")->capture_default_str();

  auto* gompertz = app.add_subcommand("gompertz", "Gompertz constant");
  gompertz->add_option("--digits", o.digits, "Decimal places")->check(CLI::Range(1, kMaxDeltaDigits - 5))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*simulate) cmd_simulate(g, o);
    else if (*exact) cmd_exact(g, o);
    else if (*overlap) cmd_pair_overlap(g, o);
    else if (*pmf) cmd_limit_pmf(g, o);
    else if (*moments) cmd_moments(g, o);
    else if (*second) cmd_second_moment(g, o);
    else if (*tree) cmd_tree(g, o);
    else if (*gompertz) cmd_gompertz(g, o);
  } catch (const GuardError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace hyperpaths
