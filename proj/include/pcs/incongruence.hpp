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

// The incongruence index of an h-subset: along a direction a, the log ratio
// of the mean squared distance of the subset's members to the mean over the
// h observations closest to the hyperplane of a; averaged over directions.

#ifndef PCS_INCONGRUENCE_HPP_
#define PCS_INCONGRUENCE_HPP_

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "pcs/dataset.hpp"
#include "pcs/geometry.hpp"

namespace pcs {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// A sorted set of distinct 0-based row indices.
class HSubset {
 public:
  HSubset() = default;
  // Sorts and validates; throws Error(kValidation) on repeats or rows >= n.
  HSubset(std::vector<std::size_t> rows, std::size_t n);

  static HSubset from_sorted(std::vector<std::size_t> rows) {
    HSubset s;
    s.rows_ = std::move(rows);
    return s;
  }

  const std::vector<std::size_t>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool contains(std::size_t row) const;

  friend bool operator==(const HSubset&, const HSubset&) = default;
  friend auto operator<=>(const HSubset& a, const HSubset& b) { return a.rows_ <=> b.rows_; }

 private:
  std::vector<std::size_t> rows_;
};

struct IncongruenceOptions {
  // d^2 <= tol_zero_rel * (1 + median d^2) is treated as exactly zero.
  double tol_zero_rel = 1e-10;
};

// Everything about one direction that does not depend on the subset being
// scored: all n squared distances and the statistics of H^a.
struct DirectionProfile {
  std::vector<double> d2;        // zero-clamped squared distances, all rows
  double tol_zero = 0.0;
  double kth = 0.0;              // h-th smallest d^2
  double den = 0.0;              // mean of the h smallest d^2
  std::size_t zero_count = 0;    // rows with d^2 == 0 after clamping
  std::size_t neighborhood_size = 0;  // |H^a|, >= h when ties occur

  bool exact_fit(std::size_t h) const { return zero_count >= h; }
  bool in_neighborhood(std::size_t row) const { return d2[row] <= kth; }
};

DirectionProfile profile_direction(const Dataset& data, const Direction& dir, std::size_t h,
                                   const IncongruenceOptions& options = {});

// I(H, a) from a precomputed profile. +inf when H^a has zero mean distance
// but the subset does not; 0 when both means vanish.
double incongruence_from_profile(const DirectionProfile& profile,
                                 std::span<const std::size_t> subset_rows);

// H^a = {i : d_i^2(a) <= d_(h)^2(a)}; ties at the h-th value are kept.
HSubset h_neighborhood(const Dataset& data, const Direction& dir, std::size_t h,
                       const IncongruenceOptions& options = {});

double incongruence_along(const Dataset& data, const HSubset& subset, const Direction& dir,
                          std::size_t h, const IncongruenceOptions& options = {});

struct DirectionValue {
  Direction direction;
  double value = 0.0;
};

struct IncongruenceReport {
  HSubset subset;
  std::vector<DirectionValue> per_direction;  // canonical source-row order
  double aggregate = 0.0;
  // First direction (canonical order) with at least h zero-distance rows.
  std::optional<Direction> exact_fit;
  std::size_t degenerate_zero_over_zero = 0;
  std::uint64_t skipped_singular = 0;
};

IncongruenceReport incongruence_index(const Dataset& data, const HSubset& subset,
                                      const DirectionSet& dirs, std::size_t h,
                                      const IncongruenceOptions& options = {});

// The enlarged subset of all rows lying on the report's exact-fit
// hyperplane, or nullopt when no direction carries h zero distances.
std::optional<HSubset> detect_exact_fit(const Dataset& data, const IncongruenceReport& report,
                                        std::size_t h, const IncongruenceOptions& options = {});

struct CurvePoint {
  std::size_t direction_index = 0;  // 1-based position in canonical order
  double value = 0.0;
  std::vector<std::size_t> source_rows;
};

// Per-direction values sorted ascending, ties kept in canonical order.
std::vector<CurvePoint> sorted_curve(const IncongruenceReport& report);

}  // namespace pcs

#endif  // PCS_INCONGRUENCE_HPP_
