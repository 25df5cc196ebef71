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

// Bias functionals and contamination sweeps that probe the finite sample
// breakdown point (n - h + 1) / n empirically.

#ifndef PCS_BREAKDOWN_LAB_HPP_
#define PCS_BREAKDOWN_LAB_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcs/dataset.hpp"
#include "pcs/solver.hpp"

namespace pcs {

enum class Placement { kPointMass, kPointMassJitter, kCustom };

std::string to_string(Placement placement);
Placement parse_placement(const std::string& text);

struct ContaminationSpec {
  std::size_t c = 0;
  Placement placement = Placement::kPointMass;
  double L = 1e6;
  // Unit displacement direction; nullopt draws one from the seed.
  std::optional<Vector> direction;
  // Jitter standard deviation relative to the genuine diameter.
  double jitter_scale = 1e-3;
  Matrix custom_rows;  // c x p, used by Placement::kCustom
};

// Replaces the last c rows; the first n - c rows are kept bit-exactly and
// remain the only duplicate-checked block.
Dataset contaminate(const Dataset& data, const ContaminationSpec& spec, std::uint64_t seed);

// |t(X^e) - t(X)|
double bias_location(const PcsFit& clean, const PcsFit& contaminated);

// Condition number of S(X)^-1/2 S(X^e) S(X)^-1/2; +inf when the contaminated
// scatter is singular. Throws Error(kDegenerate) for a singular clean scatter.
double bias_scatter(const PcsFit& clean, const PcsFit& contaminated);
double bias_scatter(const Eigen::MatrixXd& clean, const Eigen::MatrixXd& contaminated);

struct BiasRecord {
  std::size_t c = 0;
  double epsilon = 0.0;
  double L = 0.0;
  double location_bias = 0.0;
  double scatter_bias = 1.0;
  std::size_t h_star_outlier_count = 0;
  // Per-fit quantities behind the boundedness checks.
  double location_norm = 0.0;      // |t*(X^e)|
  double max_h_star_norm = 0.0;    // max over H* of |x_i^e|
  double scatter_lambda1 = 0.0;    // largest eigenvalue of S*(X^e)
  bool exact_fit = false;
};

struct BreakdownEstimate {
  // Smallest tested c/n that diverged; nullopt if none did.
  std::optional<Rational> empirical;
  Rational theoretical;
  std::string diverged_on;  // "location", "scatter", "both" or "none"
  std::size_t max_tested_c = 0;
};

struct SweepConfig {
  std::vector<double> L_grid{1e3, 1e6, 1e9};
  std::vector<std::size_t> c_range;
  Placement placement = Placement::kPointMass;
  std::optional<Vector> direction;
  double jitter_scale = 1e-3;
  // Divergence: every consecutive L step multiplies the bias by this much.
  double growth_threshold = 10.0;
  SolverConfig solver;
  std::uint64_t seed = 0;
  bool require_general_position = true;
  GeneralPositionOptions general_position;
  std::size_t threads = 1;
};

struct SweepResult {
  PcsFit clean_fit;
  std::vector<BiasRecord> records;  // ordered by (c, L)
  BreakdownEstimate estimate;
};

SweepResult breakdown_sweep(const Dataset& data, std::size_t h, const SweepConfig& config);

struct EquivarianceReport {
  bool passed = false;
  bool h_star_equal = false;
  double location_error = 0.0;
  double location_tol = 0.0;
  double scatter_error = 0.0;
  double scatter_tol = 0.0;
  double condition = 1.0;
  Eigen::MatrixXd B;
  Vector b;
  std::string message;
};

// Fits X and {B x_i + b} with identical solver configuration and compares
// H*, t* and S* against the equivariant predictions.
EquivarianceReport equivariance_check(const Dataset& data, std::size_t h,
                                      const SolverConfig& config, const Eigen::MatrixXd& B,
                                      const Vector& b, double rel_tol = 1e-8);

// Draws B with standard normal entries (condition number <= max_condition)
// and b, then runs equivariance_check.
EquivarianceReport equivariance_trial(const Dataset& data, std::size_t h,
                                      const SolverConfig& config, std::uint64_t seed,
                                      double max_condition = 1e4, double rel_tol = 1e-8);

}  // namespace pcs

#endif  // PCS_BREAKDOWN_LAB_HPP_
