// Copyright 2026 The PCS Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Python bindings: thin wrappers that take numpy arrays and return plain
// dicts, with library errors raised as pcs.PcsError subclasses of ValueError.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pcs/breakdown_lab.hpp"
#include "pcs/dataset.hpp"
#include "pcs/error.hpp"
#include "pcs/fixtures.hpp"
#include "pcs/incongruence.hpp"
#include "pcs/report.hpp"
#include "pcs/solver.hpp"

namespace py = pybind11;

namespace {

pcs::Dataset make_dataset(const pcs::Matrix& x, bool allow_duplicates) {
  pcs::DatasetOptions opts;
  opts.allow_duplicates = allow_duplicates;
  return pcs::Dataset(x, opts);
}

std::size_t pick_h(const pcs::Dataset& data, std::optional<std::size_t> h) {
  return h ? pcs::make_subset_size(data.n(), data.p(), *h).h : pcs::default_h(data.n(), data.p()).h;
}

pcs::SolverConfig make_config(const std::string& mode, std::optional<std::uint64_t> seed,
                              std::uint64_t n_starts, std::uint64_t n_isteps,
                              std::uint64_t k_directions, std::uint64_t subset_cap,
                              std::size_t threads) {
  pcs::SolverConfig cfg;
  cfg.mode = pcs::parse_solver_mode(mode);
  cfg.seed = seed;
  cfg.n_starts = n_starts;
  cfg.n_isteps = n_isteps;
  cfg.k_directions = k_directions;
  cfg.subset_cap = subset_cap;
  cfg.threads = threads;
  cfg.validate();
  return cfg;
}

py::dict fit_dict(const pcs::PcsFit& fit) {
  py::dict out;
  out["mode"] = pcs::to_string(fit.mode);
  out["h"] = fit.h;
  out["h_star"] = fit.h_star.rows();  // 0-based, as is usual in Python
  out["location"] = Eigen::VectorXd(fit.location);
  out["scatter"] = Eigen::MatrixXd(fit.scatter);
  out["index_value"] = fit.index_value;
  out["exact_fit"] = static_cast<bool>(fit.exact_fit);
  out["seed"] = fit.seed;
  out["candidates_evaluated"] = fit.diagnostics.candidates_evaluated;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Projection congruent subset estimation of location and scatter";
  m.attr("__version__") = pcs::kVersion;

  static py::exception<pcs::Error> error(m, "PcsError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const pcs::Error& e) {
      py::set_error(error, e.what());
    }
  });

  m.def("default_h", [](std::size_t n, std::size_t p) { return pcs::default_h(n, p).h; },
        py::arg("n"), py::arg("p"), "ceil((n + p + 1) / 2)");

  m.def(
      "breakdown_bound",
      [](std::size_t n, std::size_t h) {
        const auto r = pcs::breakdown_bound(n, h);
        return py::make_tuple(r.num, r.den);
      },
      py::arg("n"), py::arg("h"), "(n - h + 1) / n as a reduced (numerator, denominator) pair");

  m.def(
      "fit",
      [](const pcs::Matrix& x, std::optional<std::size_t> h, const std::string& mode,
         std::optional<std::uint64_t> seed, std::uint64_t n_starts, std::uint64_t n_isteps,
         std::uint64_t k_directions, std::uint64_t subset_cap, std::size_t threads,
         bool allow_duplicates) {
        const auto data = make_dataset(x, allow_duplicates);
        const auto cfg = make_config(mode, seed, n_starts, n_isteps, k_directions, subset_cap, threads);
        pcs::PcsFit fit;
        {
          py::gil_scoped_release release;
          fit = pcs::solve(data, pick_h(data, h), cfg);
        }
        return fit_dict(fit);
      },
      py::arg("x"), py::arg("h") = py::none(), py::arg("mode") = "exact",
      py::arg("seed") = py::none(), py::arg("n_starts") = 500, py::arg("n_isteps") = 3,
      py::arg("k_directions") = 250, py::arg("subset_cap") = 200'000, py::arg("threads") = 1,
      py::arg("allow_duplicates") = false);

  m.def(
      "incongruence",
      [](const pcs::Matrix& x, std::vector<std::size_t> subset, std::optional<std::size_t> h) {
        const auto data = make_dataset(x, true);
        const std::size_t hh = pick_h(data, h);
        const pcs::HSubset s(std::move(subset), data.n());
        const auto report = pcs::incongruence_index(data, s, pcs::enumerate_directions(data, s.rows()), hh);
        std::vector<double> curve;
        for (const auto& point : pcs::sorted_curve(report)) curve.push_back(point.value);
        py::dict out;
        out["aggregate"] = report.aggregate;
        out["sorted_values"] = curve;
        out["directions"] = report.per_direction.size();
        return out;
      },
      py::arg("x"), py::arg("subset"), py::arg("h") = py::none(),
      "I(H) with every direction spanned by the subset, plus its sorted curve");

  m.def(
      "robust_distances",
      [](const pcs::Matrix& x, const Eigen::VectorXd& location, const Eigen::MatrixXd& scatter) {
        pcs::PcsFit fit;
        fit.location = location;
        fit.scatter = scatter;
        return pcs::robust_distances(make_dataset(x, true), fit);
      },
      py::arg("x"), py::arg("location"), py::arg("scatter"));

  m.def(
      "check_general_position",
      [](const pcs::Matrix& x, double tol_gp_rel) {
        pcs::GeneralPositionOptions opts;
        opts.tol_gp_rel = tol_gp_rel;
        const auto rep = pcs::check_general_position(make_dataset(x, true), opts);
        py::dict out;
        out["in_general_position"] = rep.in_general_position;
        out["witness"] = rep.witness;
        out["subsets_checked"] = rep.subsets_checked;
        return out;
      },
      py::arg("x"), py::arg("tol_gp_rel") = 1e-10);

  m.def(
      "breakdown_sweep",
      [](const pcs::Matrix& x, std::vector<std::size_t> c_range, std::vector<double> L_grid,
         std::optional<std::size_t> h, std::uint64_t seed, const std::string& placement,
         std::size_t threads) {
        const auto data = make_dataset(x, false);
        pcs::SweepConfig cfg;
        cfg.c_range = std::move(c_range);
        cfg.L_grid = std::move(L_grid);
        cfg.seed = seed;
        cfg.placement = pcs::parse_placement(placement);
        cfg.threads = threads;
        const std::size_t hh = pick_h(data, h);
        pcs::SweepResult res;
        {
          py::gil_scoped_release release;
          res = pcs::breakdown_sweep(data, hh, cfg);
        }
        py::list records;
        for (const auto& r : res.records) {
          py::dict d;
          d["c"] = r.c;
          d["epsilon"] = r.epsilon;
          d["L"] = r.L;
          d["location_bias"] = r.location_bias;
          d["scatter_bias"] = r.scatter_bias;
          d["h_star_outlier_count"] = r.h_star_outlier_count;
          records.append(d);
        }
        py::dict out;
        out["records"] = records;
        out["theoretical"] = res.estimate.theoretical.str();
        out["empirical"] = res.estimate.empirical ? py::object(py::str(res.estimate.empirical->str()))
                                                  : py::object(py::none());
        out["verdict"] = pcs::describe_breakdown(res.estimate);
        return out;
      },
      py::arg("x"), py::arg("c_range"), py::arg("L_grid") = std::vector<double>{1e3, 1e6, 1e9},
      py::arg("h") = py::none(), py::arg("seed") = 0, py::arg("placement") = "point-mass",
      py::arg("threads") = 1);

  m.def(
      "equivariance_trial",
      [](const pcs::Matrix& x, std::uint64_t seed, std::optional<std::size_t> h) {
        const auto data = make_dataset(x, false);
        const auto rep = pcs::equivariance_trial(data, pick_h(data, h), pcs::SolverConfig{}, seed);
        py::dict out;
        out["passed"] = rep.passed;
        out["h_star_equal"] = rep.h_star_equal;
        out["location_error"] = rep.location_error;
        out["scatter_error"] = rep.scatter_error;
        out["condition"] = rep.condition;
        return out;
      },
      py::arg("x"), py::arg("seed"), py::arg("h") = py::none());

  m.def(
      "distant_cluster",
      [](std::uint64_t seed) {
        const auto sc = pcs::fixtures::distant_cluster(seed);
        py::dict out;
        out["x"] = pcs::Matrix(sc.data.rows());
        out["cluster_rows"] = sc.cluster_rows;
        out["clean_subset"] = sc.clean_subset.rows();
        out["contaminated_subset"] = sc.contaminated_subset.rows();
        return out;
      },
      py::arg("seed"), "The 100-row scenario with a compact distant 30-row cluster");
}
