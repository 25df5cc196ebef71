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

#include "pcs/geometry.hpp"

#include <algorithm>
#include <set>

#include "pcs/combinatorics.hpp"
#include "pcs/error.hpp"
#include "pcs/rng.hpp"

namespace pcs {
namespace {

std::vector<std::size_t> sorted_unique(std::span<const std::size_t> rows) {
  std::vector<std::size_t> out(rows.begin(), rows.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::size_t> pick(const std::vector<std::size_t>& subset,
                              std::span<const std::size_t> positions) {
  std::vector<std::size_t> rows;
  rows.reserve(positions.size());
  for (std::size_t pos : positions) rows.push_back(subset[pos]);
  return rows;
}

void sort_canonical(std::vector<Direction>& dirs) {
  std::sort(dirs.begin(), dirs.end(), [](const Direction& a, const Direction& b) {
    return a.source_rows < b.source_rows;
  });
}

}  // namespace

std::optional<Direction> solve_direction(const Matrix& points,
                                         std::vector<std::size_t> source_rows,
                                         const GeometryOptions& options) {
  const Eigen::Index p = points.cols();
  if (points.rows() != p) {
    throw Error(ErrorKind::kValidation, "solve_direction needs exactly p points");
  }
  const Eigen::MatrixXd system = points;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(system);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(p - 1);
  if (!(smin > 0.0) || smax / smin > options.cond_cap) return std::nullopt;

  Direction dir;
  dir.a = system.partialPivLu().solve(Vector::Ones(p));
  dir.norm_sq = dir.a.squaredNorm();
  if (!(dir.norm_sq > 0.0) || !dir.a.allFinite()) return std::nullopt;
  for (Eigen::Index i = 0; i < p; ++i) {
    const double d2 = distance_sq_row(dir, points.row(i));
    if (d2 > options.tol_fit_rel * (1.0 + points.row(i).squaredNorm())) return std::nullopt;
  }
  dir.source_rows = std::move(source_rows);
  return dir;
}

std::optional<Direction> solve_direction(const Dataset& data,
                                         std::span<const std::size_t> rows,
                                         const GeometryOptions& options) {
  const auto p = static_cast<Eigen::Index>(data.p());
  if (static_cast<Eigen::Index>(rows.size()) != p) {
    throw Error(ErrorKind::kValidation, "solve_direction needs exactly p rows");
  }
  Matrix points(p, p);
  for (Eigen::Index k = 0; k < p; ++k) {
    points.row(k) = data.row(rows[static_cast<std::size_t>(k)]);
  }
  return solve_direction(points, std::vector<std::size_t>(rows.begin(), rows.end()), options);
}

DirectionSet enumerate_directions(const Dataset& data, std::span<const std::size_t> subset,
                                  const GeometryOptions& options) {
  DirectionSet set;
  set.subset = sorted_unique(subset);
  set.exhaustive = true;
  const std::size_t m = set.subset.size();
  const std::size_t p = data.p();
  const std::uint64_t total = binomial(m, p);
  if (total > options.direction_cap) {
    throw Error(ErrorKind::kCap, "C(" + std::to_string(m) + "," + std::to_string(p) +
                                     ") directions exceed the direction cap; sample instead");
  }
  if (m < p) return set;
  set.directions.reserve(total);
  std::vector<std::size_t> comb(p);
  for (std::size_t i = 0; i < p; ++i) comb[i] = i;
  do {
    const auto rows = pick(set.subset, comb);
    if (auto dir = solve_direction(data, rows, options)) {
      set.directions.push_back(std::move(*dir));
    } else {
      ++set.skipped_singular;
    }
  } while (next_combination(comb, m));
  return set;
}

DirectionSet sample_directions(const Dataset& data, std::span<const std::size_t> subset,
                               std::uint64_t k, std::uint64_t seed,
                               const GeometryOptions& options) {
  if (k == 0) throw Error(ErrorKind::kValidation, "sample_directions needs k >= 1");
  const auto rows = sorted_unique(subset);
  const std::size_t m = rows.size();
  const std::size_t p = data.p();
  const std::uint64_t total = binomial(m, p);
  if (k >= total) return enumerate_directions(data, rows, options);

  DirectionSet set;
  set.subset = rows;
  set.exhaustive = false;
  set.directions.reserve(k);
  Rng rng(seed, hash_indices(rows));

  // Dense regime: shuffle the full index space and keep the first k
  // non-singular members. Uniform, and avoids slow rejection near saturation.
  if (total <= 4 * k && total <= options.direction_cap) {
    std::vector<std::uint64_t> ranks(total);
    for (std::uint64_t r = 0; r < total; ++r) ranks[r] = r;
    for (std::uint64_t i = total - 1; i > 0; --i) {
      std::swap(ranks[i], ranks[rng.below(i + 1)]);
    }
    for (std::uint64_t r : ranks) {
      if (set.directions.size() == k) break;
      const auto positions = unrank_combination(r, m, p);
      if (auto dir = solve_direction(data, pick(rows, positions), options)) {
        set.directions.push_back(std::move(*dir));
      } else {
        ++set.skipped_singular;
      }
    }
    if (set.directions.size() < k) {
      throw Error(ErrorKind::kDegenerate, "sample_directions: fewer than k non-singular p-subsets");
    }
    sort_canonical(set.directions);
    return set;
  }

  std::set<std::vector<std::size_t>> seen;
  const std::uint64_t max_draws = options.retry_factor * k + 1000;
  std::uint64_t draws = 0;
  std::vector<std::size_t> positions;
  while (set.directions.size() < k) {
    if (++draws > max_draws) {
      throw Error(ErrorKind::kDegenerate,
                  "sample_directions: retry cap exhausted after " + std::to_string(draws - 1) +
                      " draws (" + std::to_string(set.skipped_singular) + " singular)");
    }
    positions.clear();
    while (positions.size() < p) {
      const std::size_t cand = rng.below(m);
      if (std::find(positions.begin(), positions.end(), cand) == positions.end()) {
        positions.push_back(cand);
      }
    }
    std::sort(positions.begin(), positions.end());
    if (!seen.insert(positions).second) continue;
    if (auto dir = solve_direction(data, pick(rows, positions), options)) {
      set.directions.push_back(std::move(*dir));
    } else {
      ++set.skipped_singular;
    }
  }
  sort_canonical(set.directions);
  return set;
}

}  // namespace pcs
