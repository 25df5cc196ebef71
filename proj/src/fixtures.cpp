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

#include "pcs/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pcs/error.hpp"
#include "pcs/rng.hpp"

namespace pcs::fixtures {
namespace {

std::vector<std::size_t> nearest(const Matrix& rows, const std::vector<std::size_t>& pool,
                                 const Vector& center, std::size_t count) {
  std::vector<std::size_t> order = pool;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return (rows.row(static_cast<Eigen::Index>(a)).transpose() - center).squaredNorm() <
           (rows.row(static_cast<Eigen::Index>(b)).transpose() - center).squaredNorm();
  });
  order.resize(count);
  return order;
}

}  // namespace

Matrix gaussian_rows(std::size_t n, std::size_t p, std::uint64_t seed, double scale,
                     double offset) {
  Rng rng(seed, 0x6761757373ULL);
  Matrix rows(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (Eigen::Index j = 0; j < rows.cols(); ++j) rows(i, j) = offset + scale * rng.normal();
  }
  return rows;
}

Dataset general_position_sample(std::size_t n, std::size_t p, std::uint64_t seed) {
  for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
    Dataset data(gaussian_rows(n, p, derive_seed(seed, attempt), 1.0, 0.25));
    GeneralPositionOptions gp;
    gp.allow_sampling = true;
    if (check_general_position(data, gp).in_general_position) return data;
  }
  throw Error(ErrorKind::kDegenerate, "could not draw a sample in general position");
}

ClusterScenario distant_cluster(std::uint64_t seed) {
  constexpr std::size_t kGenuine = 70;
  constexpr std::size_t kCluster = 30;
  Rng rng(seed, 0x636c7573ULL);
  Matrix rows(kGenuine + kCluster, 2);
  for (std::size_t i = 0; i < kGenuine; ++i) {
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    rows(static_cast<Eigen::Index>(i), 0) = 1.0 + z1;
    rows(static_cast<Eigen::Index>(i), 1) = 2.0 + 0.6 * z1 + 0.8 * z2;
  }
  for (std::size_t i = kGenuine; i < kGenuine + kCluster; ++i) {
    rows(static_cast<Eigen::Index>(i), 0) = 8.0 + 0.25 * rng.normal();
    rows(static_cast<Eigen::Index>(i), 1) = 2.0 + 0.25 * rng.normal();
  }
  std::vector<std::size_t> genuine(kGenuine);
  std::iota(genuine.begin(), genuine.end(), std::size_t{0});
  std::vector<std::size_t> cluster(kCluster);
  std::iota(cluster.begin(), cluster.end(), kGenuine);

  Vector genuine_center(2);
  genuine_center << 1.0, 2.0;
  Vector cluster_center(2);
  cluster_center << 8.0, 2.0;
  auto clean = nearest(rows, genuine, genuine_center, 52);
  auto dirty = nearest(rows, cluster, cluster_center, 27);
  const auto bridge = nearest(rows, genuine, cluster_center, 25);
  dirty.insert(dirty.end(), bridge.begin(), bridge.end());

  Dataset data(rows);
  const std::size_t n = data.n();
  return {std::move(data), cluster, HSubset(std::move(clean), n), HSubset(std::move(dirty), n)};
}

ExactFitScenario collinear_majority(std::size_t n_line, std::size_t n_off, std::uint64_t seed) {
  const std::size_t n = n_line + n_off;
  Rng rng(seed, 0x6c696e65ULL);
  std::vector<std::size_t> slots(n);
  std::iota(slots.begin(), slots.end(), std::size_t{0});
  for (std::size_t i = n - 1; i > 0; --i) std::swap(slots[i], slots[rng.below(i + 1)]);
  std::vector<std::size_t> line_rows(slots.begin(),
                                     slots.begin() + static_cast<std::ptrdiff_t>(n_line));
  std::sort(line_rows.begin(), line_rows.end());

  Matrix rows(static_cast<Eigen::Index>(n), 2);
  std::size_t on = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    if (std::binary_search(line_rows.begin(), line_rows.end(), i)) {
      // Dyadic abscissae keep the points exactly on the line in binary.
      const double x = -3.0 + 0.5 * static_cast<double>(on++);
      rows(r, 0) = x;
      rows(r, 1) = 0.5 * x + 1.0;
    } else {
      double x;
      double y;
      do {
        x = 3.0 * rng.normal();
        y = 3.0 * rng.normal();
      } while (std::abs(y - (0.5 * x + 1.0)) < 0.5);
      rows(r, 0) = x;
      rows(r, 1) = y;
    }
  }
  return {Dataset(std::move(rows)), std::move(line_rows)};
}

}  // namespace pcs::fixtures
