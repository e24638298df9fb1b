#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "hyperpaths/cli.hpp"
#include "hyperpaths/errors.hpp"
#include "hyperpaths/exact_count.hpp"
#include "hyperpaths/experiments.hpp"
#include "hyperpaths/limit_law.hpp"
#include "hyperpaths/pair_combinatorics.hpp"
#include "hyperpaths/tree_lab.hpp"

namespace py = pybind11;
using namespace hyperpaths;

namespace {

py::object fraction(const Rational& q) {
  static py::object cls = py::module_::import("fractions").attr("Fraction");
  return cls(py::int_(py::str(numerator(q).str())), py::int_(py::str(denominator(q).str())));
}

py::dict campaign_dict(const TreeCampaign& t) {
  py::dict d;
  py::list rows;
  for (const auto& row : t.rows) {
    py::dict r;
    r["seed"] = row.seed;
    r["z_bottom"] = row.z_bottom;
    r["z_top"] = row.z_top;
    r["lambda"] = row.lambda;
    if (row.has_counts) {
      r["x"] = row.x;
      r["x_star"] = row.x_star;
    }
    rows.append(r);
  }
  d["rows"] = rows;
  d["mean_z_bottom"] = t.mean_z_bottom;
  d["mean_z_product"] = t.mean_z_product;
  d["corr_z"] = t.corr_z;
  d["mean_lambda"] = t.mean_lambda;
  d["frac_x_equals_x_star"] = t.frac_x_equals_x_star;
  d["tv_x_star_poisson"] = t.tv_x_star_poisson;
  d["lambda_z_correlation"] = t.lambda_z_correlation;
  d["below_guidance"] = t.below_guidance;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Accessible paths in the randomly weighted hypercube";
  py::register_exception<GuardError>(m, "GuardError", PyExc_ValueError);

  m.def("gompertz_delta", [](int digits) { return gompertz_delta(digits + 5).str(digits, std::ios::fixed); },
        py::arg("digits") = 12);
  m.def(
      "pmf_exact",
      [](int x) {
        const PmfValue v = pmf_exact(x, make_limit_context(std::max(x, 0), 40));
        return py::make_tuple(v.value, fraction(v.coeffs.a), fraction(v.coeffs.b));
      },
      py::arg("x"), "(value, A, B) with P(X = x) = A delta + B.");
  m.def("pmf_quadrature", &pmf_quadrature, py::arg("x"));
  m.def("tail_quadrature", &tail_quadrature, py::arg("x"));
  m.def("moment", [](int k) { return py::int_(py::str(moment(k).str())); }, py::arg("k"));

  m.def("count_accessible", [](int n, std::uint64_t seed) { return count_accessible_dp(n, WeightOracle(seed, n)); },
        py::arg("n"), py::arg("seed"));
  m.def(
      "list_accessible",
      [](int n, std::uint64_t seed) {
        std::vector<std::vector<int>> out;
        for (const DirectPath& p : list_accessible(n, WeightOracle(seed, n))) out.push_back(p.directions());
        return out;
      },
      py::arg("n"), py::arg("seed"));
  m.def("sample_xn", &sample_xn, py::arg("n"), py::arg("samples"), py::arg("seed") = 0, py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>());

  m.def("second_moment_exact", [](int n) { return fraction(second_moment_exact(n)); }, py::arg("n"));
  m.def("c_sg_exact", [](int n, int s, int g) { return fraction(c_sg_exact(n, s, g)); }, py::arg("n"), py::arg("s"),
        py::arg("g"));
  m.def(
      "c_sg",
      [](int n, int s, int g) {
        const CsgValue v = c_sg(n, s, g);
        return py::make_tuple(v.value(), v.exactness == Exactness::exact);
      },
      py::arg("n"), py::arg("s"), py::arg("g"));
  m.def(
      "pair_sums",
      [](int n, int k) {
        const PairSums ps = pair_sums(n, k);
        py::dict d;
        d["single_gap_head"] = ps.single_gap_head;
        d["single_gap_tail"] = ps.single_gap_tail;
        d["multi_gap_lower"] = ps.multi_gap_lower;
        d["multi_gap_upper"] = ps.multi_gap_upper;
        d["second_moment_lower"] = ps.second_moment_lower;
        d["second_moment_upper"] = ps.second_moment_upper;
        d["truncated"] = ps.truncated;
        return d;
      },
      py::arg("n"), py::arg("k"));

  m.def(
      "tree_campaign",
      [](int n, int k, int r, std::uint64_t samples, std::uint64_t seed, unsigned threads) {
        ExperimentConfig c{"tree", n, {}, samples, seed, k, r, threads};
        TreeCampaign t;
        {
          py::gil_scoped_release release;
          t = run_tree_campaign(c);
        }
        return campaign_dict(t);
      },
      py::arg("n"), py::arg("k"), py::arg("r"), py::arg("samples"), py::arg("seed") = 0, py::arg("threads") = 1);
  m.def(
      "z_ideal_samples",
      [](int k, int r, std::size_t count, std::uint64_t seed) {
        CounterRng rng(seed, 0);
        std::vector<double> out;
        for (std::size_t i = 0; i < count; ++i) out.push_back(z_ideal_sample(k, r, rng));
        return out;
      },
      py::arg("k"), py::arg("r"), py::arg("count"), py::arg("seed") = 0);

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "hyperpaths");
        std::vector<char*> argv;
        for (auto& a : args) argv.push_back(a.data());
        return run_cli(static_cast<int>(argv.size()), argv.data());
      },
      py::arg("args"));
}
