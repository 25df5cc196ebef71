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

// Hyperplanes {x : x'a = 1} through p observations and squared orthogonal
// distances to them.

#ifndef PCS_GEOMETRY_HPP_
#define PCS_GEOMETRY_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pcs/dataset.hpp"

namespace pcs {

struct GeometryOptions {
  // A p-subset whose system has condition number above cond_cap is singular.
  double cond_cap = 1e12;
  // Spanning points must satisfy d^2 <= tol_fit_rel * (1 + |x|^2).
  double tol_fit_rel = 1e-8;
  std::uint64_t direction_cap = 1'000'000;
  // sample_directions gives up after retry_factor * k + 1000 draws.
  std::uint64_t retry_factor = 100;
};

struct Direction {
  Vector a;
  std::vector<std::size_t> source_rows;  // sorted, 0-based
  double norm_sq = 0.0;
};

struct DirectionSet {
  std::vector<Direction> directions;
  std::vector<std::size_t> subset;
  bool exhaustive = false;
  std::uint64_t skipped_singular = 0;
};

// Solves x_i'a = 1 for the p rows of `points`. nullopt signals a singular
// or ill-conditioned system (for example a hyperplane through the origin).
std::optional<Direction> solve_direction(const Matrix& points,
                                         std::vector<std::size_t> source_rows = {},
                                         const GeometryOptions& options = {});

std::optional<Direction> solve_direction(const Dataset& data,
                                         std::span<const std::size_t> rows,
                                         const GeometryOptions& options = {});

// (a'x - 1)^2 / |a|^2
inline double distance_sq(const Direction& dir, const Eigen::Ref<const Vector>& x) {
  const double r = dir.a.dot(x) - 1.0;
  return r * r / dir.norm_sq;
}

template <typename RowExpr>
double distance_sq_row(const Direction& dir, const RowExpr& row) {
  const double r = row.dot(dir.a.transpose()) - 1.0;
  return r * r / dir.norm_sq;
}

// Every non-singular p-subset of `subset`, in lexicographic order of
// source rows. Throws Error(kCap) when C(|subset|, p) > direction_cap.
DirectionSet enumerate_directions(const Dataset& data, std::span<const std::size_t> subset,
                                  const GeometryOptions& options = {});

// k distinct non-singular p-subsets drawn uniformly without replacement.
// Output depends only on (subset, k, seed); falls back to enumeration when
// k >= C(|subset|, p).
DirectionSet sample_directions(const Dataset& data, std::span<const std::size_t> subset,
                               std::uint64_t k, std::uint64_t seed,
                               const GeometryOptions& options = {});

}  // namespace pcs

#endif  // PCS_GEOMETRY_HPP_
