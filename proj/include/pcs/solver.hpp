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

#ifndef PCS_SOLVER_HPP_
#define PCS_SOLVER_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcs/dataset.hpp"
#include "pcs/geometry.hpp"
#include "pcs/incongruence.hpp"

namespace pcs {

enum class SolverMode { kExact, kRandomized };

std::string to_string(SolverMode mode);
SolverMode parse_solver_mode(const std::string& text);

struct SolverConfig {
  SolverMode mode = SolverMode::kExact;
  // Exact mode refuses more than subset_cap candidate h-subsets.
  std::uint64_t subset_cap = 200'000;
  std::uint64_t n_starts = 500;
  std::uint64_t n_isteps = 3;
  std::uint64_t k_directions = 250;
  // Required in randomized mode; there is no clock-based default.
  std::optional<std::uint64_t> seed;
  std::size_t threads = 1;
  GeometryOptions geometry;
  IncongruenceOptions incongruence;

  // Throws Error(kValidation) for n_starts == 0, k_directions == 0, or a
  // missing seed in randomized mode.
  void validate() const;
};

struct ExactFit {
  Direction direction;
  HSubset subset;  // every row on the hyperplane, |subset| >= h
};

struct SolverDiagnostics {
  std::uint64_t candidates_evaluated = 0;
  std::uint64_t directions_per_candidate = 0;
  std::uint64_t singular_directions = 0;
  std::uint64_t degenerate_starts = 0;
};

struct PcsFit {
  SolverMode mode = SolverMode::kExact;
  std::size_t h = 0;
  HSubset h_star;
  Vector location;
  Eigen::MatrixXd scatter;
  double index_value = 0.0;
  std::optional<ExactFit> exact_fit;
  std::optional<std::uint64_t> seed;
  SolverDiagnostics diagnostics;
};

struct Estimate {
  Vector location;
  Eigen::MatrixXd scatter;  // divisor |subset|
};

// Mean and population covariance of the rows in `subset`.
Estimate estimate(const Dataset& data, const HSubset& subset);

// Minimizes I(H) over all C(n, h) subsets with exhaustive directions. Ties go
// to the lexicographically smallest subset. A candidate exposing a
// hyperplane with h or more zero distances ends the search with that
// hyperplane's full zero set as H*.
PcsFit solve_exact(const Dataset& data, std::size_t h, const SolverConfig& config = {});

// Seeded multi-start congruence search. Deterministic in (data, h, config) and
// independent of config.threads.
PcsFit solve_randomized(const Dataset& data, std::size_t h, const SolverConfig& config);

// Dispatches on config.mode.
PcsFit solve(const Dataset& data, std::size_t h, const SolverConfig& config);

// Mahalanobis distances sqrt((x - t)' S^-1 (x - t)) for every row. Throws
// Error(kDegenerate) when the scatter is not positive definite.
std::vector<double> robust_distances(const Dataset& data, const PcsFit& fit);

}  // namespace pcs

#endif  // PCS_SOLVER_HPP_
