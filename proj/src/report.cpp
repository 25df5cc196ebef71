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

#include "pcs/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "pcs/rng.hpp"

namespace pcs {
namespace {

nlohmann::json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

nlohmann::json one_based(const std::vector<std::size_t>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t r : rows) out.push_back(r + 1);
  return out;
}

std::string rows_field(const std::vector<std::size_t>& rows) {
  std::string out;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (k) out += ' ';
    out += std::to_string(rows[k] + 1);
  }
  return out;
}

}  // namespace

std::string format_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string canonical_config(const SolverConfig& config) {
  std::ostringstream out;
  out << "mode=" << to_string(config.mode) << ";subset_cap=" << config.subset_cap
      << ";n_starts=" << config.n_starts << ";n_isteps=" << config.n_isteps
      << ";k_directions=" << config.k_directions
      << ";seed=" << (config.seed ? std::to_string(*config.seed) : "none")
      << ";cond_cap=" << format_double(config.geometry.cond_cap)
      << ";tol_fit_rel=" << format_double(config.geometry.tol_fit_rel)
      << ";direction_cap=" << config.geometry.direction_cap
      << ";tol_zero_rel=" << format_double(config.incongruence.tol_zero_rel);
  return out.str();
}

nlohmann::json reproducibility_block(const std::optional<std::uint64_t>& seed,
                                     const std::string& canonical) {
  char hash[17];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(hash_string(canonical)));
  nlohmann::json block;
  block["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
  block["config_hash"] = hash;
  block["version"] = kVersion;
  return block;
}

nlohmann::json config_to_json(const SolverConfig& config) {
  return {
      {"mode", to_string(config.mode)},
      {"subset_cap", config.subset_cap},
      {"n_starts", config.n_starts},
      {"n_isteps", config.n_isteps},
      {"k_directions", config.k_directions},
      {"cond_cap", config.geometry.cond_cap},
      {"tol_fit_rel", config.geometry.tol_fit_rel},
      {"direction_cap", config.geometry.direction_cap},
      {"tol_zero_rel", config.incongruence.tol_zero_rel},
      {"covariance_divisor", "n_subset"},
  };
}

nlohmann::json fit_to_json(const PcsFit& fit, const SolverConfig& config) {
  nlohmann::json out;
  out["index_base"] = 1;
  out["mode"] = to_string(fit.mode);
  out["h"] = fit.h;
  out["h_star"] = one_based(fit.h_star.rows());
  nlohmann::json location = nlohmann::json::array();
  for (Eigen::Index k = 0; k < fit.location.size(); ++k) location.push_back(number(fit.location(k)));
  out["location"] = location;
  nlohmann::json scatter = nlohmann::json::array();
  for (Eigen::Index i = 0; i < fit.scatter.rows(); ++i) {
    for (Eigen::Index j = 0; j < fit.scatter.cols(); ++j) scatter.push_back(number(fit.scatter(i, j)));
  }
  out["scatter"] = scatter;
  out["index_value"] = number(fit.index_value);
  if (fit.exact_fit) {
    nlohmann::json a = nlohmann::json::array();
    for (Eigen::Index k = 0; k < fit.exact_fit->direction.a.size(); ++k) {
      a.push_back(fit.exact_fit->direction.a(k));
    }
    const Eigen::VectorXd eig =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(fit.scatter, Eigen::EigenvaluesOnly)
            .eigenvalues();
    out["exact_fit"] = {
        {"direction", a},
        {"source_rows", one_based(fit.exact_fit->direction.source_rows)},
        {"subset", one_based(fit.exact_fit->subset.rows())},
        {"scatter_singular", !(eig(0) > 1e-14 * eig(eig.size() - 1))},
    };
  } else {
    out["exact_fit"] = nullptr;
  }
  out["seed"] = fit.seed ? nlohmann::json(*fit.seed) : nlohmann::json(nullptr);
  out["config"] = config_to_json(config);
  out["diagnostics"] = {
      {"candidates_evaluated", fit.diagnostics.candidates_evaluated},
      {"directions_per_candidate", fit.diagnostics.directions_per_candidate},
      {"singular_directions", fit.diagnostics.singular_directions},
      {"degenerate_starts", fit.diagnostics.degenerate_starts},
  };
  out["reproducibility"] = reproducibility_block(fit.seed, canonical_config(config));
  return out;
}

std::string curves_to_csv(const std::vector<std::vector<CurvePoint>>& curves) {
  std::ostringstream out;
  out << "# index_base=1\nrank";
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const std::string suffix = curves.size() > 1 ? "_" + std::to_string(c + 1) : "";
    out << ",direction_index" << suffix << ",I_value" << suffix << ",source_rows" << suffix;
  }
  out << '\n';
  std::size_t longest = 0;
  for (const auto& curve : curves) longest = std::max(longest, curve.size());
  for (std::size_t r = 0; r < longest; ++r) {
    out << r + 1;
    for (const auto& curve : curves) {
      if (r < curve.size()) {
        out << ',' << curve[r].direction_index << ',' << format_double(curve[r].value) << ','
            << rows_field(curve[r].source_rows);
      } else {
        out << ",,,";
      }
    }
    out << '\n';
  }
  return out.str();
}

std::string sweep_to_csv(const SweepResult& sweep) {
  std::ostringstream out;
  out << "c,epsilon,L,location_bias,scatter_bias,h_star_outlier_count\n";
  for (const auto& r : sweep.records) {
    out << r.c << ',' << format_double(r.epsilon) << ',' << format_double(r.L) << ','
        << format_double(r.location_bias) << ',' << format_double(r.scatter_bias) << ','
        << r.h_star_outlier_count << '\n';
  }
  return out.str();
}

std::string describe_breakdown(const BreakdownEstimate& estimate) {
  if (!estimate.empirical) {
    return "no divergence detected (empirical breakdown > " +
           std::to_string(estimate.max_tested_c) + "/n)";
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", estimate.empirical->value());
  return "diverged at ε = " + std::string(buf) + " (" + estimate.empirical->str() + ", " +
         estimate.diverged_on + ")";
}

nlohmann::json sweep_summary_json(const SweepResult& sweep, std::size_t n, std::size_t h) {
  nlohmann::json out;
  out["n"] = n;
  out["h"] = h;
  out["theoretical"] = {{"fraction", sweep.estimate.theoretical.str()},
                        {"value", sweep.estimate.theoretical.value()}};
  if (sweep.estimate.empirical) {
    out["empirical"] = {{"fraction", sweep.estimate.empirical->str()},
                        {"value", sweep.estimate.empirical->value()}};
  } else {
    out["empirical"] = nullptr;
  }
  out["diverged_on"] = sweep.estimate.diverged_on;
  out["max_tested_c"] = sweep.estimate.max_tested_c;
  out["verdict"] = describe_breakdown(sweep.estimate);
  out["matches_theory"] =
      sweep.estimate.empirical && *sweep.estimate.empirical == sweep.estimate.theoretical;
  out["note"] =
      "the sweep is a lower-bound probe over a fixed adversarial menu; absence of divergence "
      "does not contradict the theoretical bound";
  return out;
}

}  // namespace pcs
