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

#include "pcs/incongruence.hpp"

#include <algorithm>
#include <cmath>

#include "pcs/error.hpp"

namespace pcs {

HSubset::HSubset(std::vector<std::size_t> rows, std::size_t n) : rows_(std::move(rows)) {
  std::sort(rows_.begin(), rows_.end());
  if (std::adjacent_find(rows_.begin(), rows_.end()) != rows_.end()) {
    throw Error(ErrorKind::kValidation, "subset contains a repeated row index");
  }
  if (!rows_.empty() && rows_.back() >= n) {
    throw Error(ErrorKind::kValidation, "subset row " + std::to_string(rows_.back() + 1) +
                                            " out of range (n=" + std::to_string(n) + ")");
  }
}

bool HSubset::contains(std::size_t row) const {
  return std::binary_search(rows_.begin(), rows_.end(), row);
}

DirectionProfile profile_direction(const Dataset& data, const Direction& dir, std::size_t h,
                                   const IncongruenceOptions& options) {
  const std::size_t n = data.n();
  if (h == 0 || h > n) throw Error(ErrorKind::kValidation, "profile_direction: bad h");
  DirectionProfile prof;
  const Vector residual = data.rows() * dir.a - Vector::Ones(static_cast<Eigen::Index>(n));
  prof.d2.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = residual(static_cast<Eigen::Index>(i));
    prof.d2[i] = r * r / dir.norm_sq;
  }

  std::vector<double> scratch = prof.d2;
  const auto mid = scratch.begin() + static_cast<std::ptrdiff_t>((n - 1) / 2);
  std::nth_element(scratch.begin(), mid, scratch.end());
  prof.tol_zero = options.tol_zero_rel * (1.0 + *mid);
  for (double& v : prof.d2) {
    if (v <= prof.tol_zero) {
      v = 0.0;
      ++prof.zero_count;
    }
  }

  scratch = prof.d2;
  const auto kth = scratch.begin() + static_cast<std::ptrdiff_t>(h - 1);
  std::nth_element(scratch.begin(), kth, scratch.end());
  prof.kth = *kth;

  // Summed in row order so that a subset equal to H^a reproduces the same
  // floating-point total in the numerator.
  double sum = 0.0;
  std::size_t members = 0;
  for (double v : prof.d2) {
    if (v <= prof.kth) {
      sum += v;
      ++members;
    }
  }
  prof.neighborhood_size = members;
  if (members > h) sum -= static_cast<double>(members - h) * prof.kth;
  prof.den = std::max(0.0, sum) / static_cast<double>(h);
  return prof;
}

double incongruence_from_profile(const DirectionProfile& profile,
                                 std::span<const std::size_t> subset_rows) {
  if (subset_rows.empty()) throw Error(ErrorKind::kValidation, "empty subset");
  double sum = 0.0;
  for (std::size_t i : subset_rows) sum += profile.d2[i];
  const double num = sum / static_cast<double>(subset_rows.size());
  if (profile.den == 0.0) return num == 0.0 ? 0.0 : kInfinity;
  // Mathematically num >= den; clamp rounding below zero.
  return std::max(0.0, std::log(num / profile.den));
}

HSubset h_neighborhood(const Dataset& data, const Direction& dir, std::size_t h,
                       const IncongruenceOptions& options) {
  const auto prof = profile_direction(data, dir, h, options);
  std::vector<std::size_t> rows;
  rows.reserve(prof.neighborhood_size);
  for (std::size_t i = 0; i < prof.d2.size(); ++i) {
    if (prof.in_neighborhood(i)) rows.push_back(i);
  }
  return HSubset::from_sorted(std::move(rows));
}

double incongruence_along(const Dataset& data, const HSubset& subset, const Direction& dir,
                          std::size_t h, const IncongruenceOptions& options) {
  if (subset.size() < data.p()) {
    throw Error(ErrorKind::kValidation, "incongruence_along: subset smaller than p");
  }
  return incongruence_from_profile(profile_direction(data, dir, h, options), subset.rows());
}

IncongruenceReport incongruence_index(const Dataset& data, const HSubset& subset,
                                      const DirectionSet& dirs, std::size_t h,
                                      const IncongruenceOptions& options) {
  if (dirs.directions.empty()) {
    throw Error(ErrorKind::kDegenerate, "incongruence_index: empty direction set");
  }
  IncongruenceReport report;
  report.subset = subset;
  report.skipped_singular = dirs.skipped_singular;
  report.per_direction.reserve(dirs.directions.size());
  for (const auto& dir : dirs.directions) {
    report.per_direction.push_back({dir, 0.0});
  }
  std::sort(report.per_direction.begin(), report.per_direction.end(),
            [](const DirectionValue& a, const DirectionValue& b) {
              return a.direction.source_rows < b.direction.source_rows;
            });

  double total = 0.0;
  for (auto& entry : report.per_direction) {
    const auto prof = profile_direction(data, entry.direction, h, options);
    entry.value = incongruence_from_profile(prof, subset.rows());
    if (prof.den == 0.0 && entry.value == 0.0) ++report.degenerate_zero_over_zero;
    if (prof.exact_fit(h) && !report.exact_fit) report.exact_fit = entry.direction;
    total += entry.value;
  }
  report.aggregate = std::isinf(total)
                         ? kInfinity
                         : total / static_cast<double>(report.per_direction.size());
  return report;
}

std::optional<HSubset> detect_exact_fit(const Dataset& data, const IncongruenceReport& report,
                                        std::size_t h, const IncongruenceOptions& options) {
  if (!report.exact_fit) return std::nullopt;
  const auto prof = profile_direction(data, *report.exact_fit, h, options);
  if (!prof.exact_fit(h)) return std::nullopt;
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < prof.d2.size(); ++i) {
    if (prof.d2[i] == 0.0) rows.push_back(i);
  }
  return HSubset::from_sorted(std::move(rows));
}

std::vector<CurvePoint> sorted_curve(const IncongruenceReport& report) {
  std::vector<CurvePoint> curve;
  curve.reserve(report.per_direction.size());
  for (std::size_t k = 0; k < report.per_direction.size(); ++k) {
    const auto& entry = report.per_direction[k];
    curve.push_back({k + 1, entry.value, entry.direction.source_rows});
  }
  std::stable_sort(curve.begin(), curve.end(), [](const CurvePoint& a, const CurvePoint& b) {
    return a.value < b.value;
  });
  return curve;
}

}  // namespace pcs
