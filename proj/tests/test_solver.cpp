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

#include <cmath>
#include <numeric>

#include "doctest.h"
#include "pcs/fixtures.hpp"
#include "pcs/solver.hpp"
#include "test_util.hpp"

using pcs::Dataset;
using pcs::HSubset;
using pcs::SolverConfig;
using pcs::SolverMode;
using testutil::matrix;

namespace {

SolverConfig randomized(std::uint64_t seed, std::uint64_t starts = 50) {
  SolverConfig cfg;
  cfg.mode = SolverMode::kRandomized;
  cfg.seed = seed;
  cfg.n_starts = starts;
  cfg.k_directions = 60;
  return cfg;
}

}  // namespace

TEST_CASE("solver mode names round-trip") {
  CHECK(pcs::parse_solver_mode("exact") == SolverMode::kExact);
  CHECK(pcs::parse_solver_mode(pcs::to_string(SolverMode::kRandomized)) == SolverMode::kRandomized);
  CHECK_THROWS_AS(pcs::parse_solver_mode("fast"), pcs::Error);
}

TEST_CASE("config validation") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.mode = SolverMode::kRandomized;
  CHECK_THROWS_AS(cfg.validate(), pcs::Error);
  cfg.seed = 1;
  CHECK_NOTHROW(cfg.validate());
  cfg.k_directions = 0;
  CHECK_THROWS_AS(cfg.validate(), pcs::Error);
}

TEST_CASE("estimate returns mean and population covariance") {
  const Dataset data(matrix({{0, 0}, {2, 0}, {0, 2}, {2, 2}, {1, 1}, {9, 9}}));
  const auto est = pcs::estimate(data, HSubset({0, 1, 2, 3, 4}, 6));
  CHECK(est.location(0) == doctest::Approx(1.0));
  CHECK(est.location(1) == doctest::Approx(1.0));
  CHECK(est.scatter(0, 0) == doctest::Approx(0.8));
  CHECK(est.scatter(1, 1) == doctest::Approx(0.8));
  CHECK(est.scatter(0, 1) == doctest::Approx(0.0));
  CHECK(est.scatter(1, 0) == est.scatter(0, 1));
}

TEST_CASE("estimate of collinear rows is singular") {
  const Dataset data(matrix({{0, 1}, {1, 2}, {2, 3}, {5, 0}, {7, 1}}));
  const auto est = pcs::estimate(data, HSubset({0, 1, 2}, 5));
  CHECK(std::abs(est.scatter.determinant()) < 1e-12);
}

TEST_CASE("exact solver evaluates every candidate with every direction") {
  const Dataset data = pcs::fixtures::general_position_sample(6, 2, 17);
  const std::size_t h = pcs::default_h(6, 2).h;
  REQUIRE(h == 5);
  const auto fit = pcs::solve_exact(data, h);
  CHECK(fit.diagnostics.candidates_evaluated == 6);
  CHECK(fit.diagnostics.directions_per_candidate == 10);
  CHECK(fit.h_star.size() == 5);
  CHECK_FALSE(fit.exact_fit);
}

TEST_CASE("exact solver drops a distant point") {
  const Dataset data(matrix({{0, 0.1}, {1, 0.2}, {0.3, 1}, {1.1, 0.9}, {0.5, 0.45}, {40, -25}}));
  const std::size_t h = 5;
  const auto fit = pcs::solve_exact(data, h);
  CHECK(fit.h_star.rows() == std::vector<std::size_t>{0, 1, 2, 3, 4});
  const auto want = oracle::pcs_argmin(testutil::to_rows(data), 2, h);
  CHECK(fit.h_star.rows() == want.subset);
  CHECK(fit.index_value == doctest::Approx(want.value).epsilon(1e-10));
}

TEST_CASE("exact solver agrees with brute force") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const std::size_t p = seed % 2 == 0 ? 3 : 2;
    const std::size_t n = p == 2 ? 9 : 8;
    const Dataset data = pcs::fixtures::general_position_sample(n, p, seed);
    const std::size_t h = pcs::default_h(n, p).h;
    const auto fit = pcs::solve_exact(data, h);
    const auto rows = testutil::to_rows(data);
    const auto want = oracle::pcs_argmin(rows, p, h);
    CHECK(fit.diagnostics.candidates_evaluated == want.evaluated);
    CHECK(fit.h_star.rows() == want.subset);
    CHECK(fit.index_value == doctest::Approx(want.value).epsilon(1e-10));
    // Optimality: no subset beats H*.
    oracle::for_each_subset(n, h, [&](const std::vector<std::size_t>& s) {
      CHECK(oracle::subset_index(rows, s, p, h) >= fit.index_value - 1e-12);
    });
  }
}

TEST_CASE("exact solver is independent of thread count") {
  const Dataset data = pcs::fixtures::general_position_sample(11, 2, 9);
  const std::size_t h = pcs::default_h(11, 2).h;
  SolverConfig one;
  SolverConfig many;
  many.threads = 4;
  const auto a = pcs::solve_exact(data, h, one);
  const auto b = pcs::solve_exact(data, h, many);
  CHECK(a.h_star == b.h_star);
  CHECK(a.index_value == b.index_value);
  CHECK(a.location == b.location);
  CHECK(a.scatter == b.scatter);
}

TEST_CASE("exact solver refuses too many candidates") {
  const Dataset data = pcs::fixtures::general_position_sample(30, 2, 2);
  try {
    pcs::solve_exact(data, pcs::default_h(30, 2).h);
    FAIL("expected a cap error");
  } catch (const pcs::Error& e) {
    CHECK(e.kind() == pcs::ErrorKind::kCap);
  }
}

TEST_CASE("exact fit stops the search with the whole line as H*") {
  const auto sc = pcs::fixtures::collinear_majority(12, 8, 3);
  const std::size_t h = pcs::default_h(20, 2).h;
  REQUIRE(h == 12);
  for (const SolverConfig& cfg : {SolverConfig{}, randomized(4)}) {
    SolverConfig c = cfg;
    c.subset_cap = 1'000'000;
    const auto fit = pcs::solve(sc.data, h, c);
    REQUIRE(fit.exact_fit);
    CHECK(fit.h_star.rows() == sc.line_rows);
    CHECK(fit.exact_fit->subset.rows() == sc.line_rows);
    CHECK(fit.index_value == 0.0);
    CHECK(std::abs(fit.scatter.determinant()) < 1e-10);
  }
}

TEST_CASE("randomized solver is reproducible and thread independent") {
  const auto sc = pcs::fixtures::distant_cluster(2);
  const std::size_t h = 52;
  SolverConfig a = randomized(11, 40);
  SolverConfig b = a;
  b.threads = 3;
  const auto fa = pcs::solve_randomized(sc.data, h, a);
  const auto fb = pcs::solve_randomized(sc.data, h, b);
  const auto fc = pcs::solve_randomized(sc.data, h, a);
  CHECK(fa.h_star == fb.h_star);
  CHECK(fa.h_star == fc.h_star);
  CHECK(fa.index_value == fb.index_value);
  CHECK(fa.seed == std::optional<std::uint64_t>(11));
  CHECK(fa.h_star.size() == h);
}

TEST_CASE("randomized solver requires a seed") {
  const Dataset data = pcs::fixtures::general_position_sample(8, 2, 1);
  SolverConfig cfg;
  cfg.mode = SolverMode::kRandomized;
  CHECK_THROWS_AS(pcs::solve(data, 6, cfg), pcs::Error);
}

TEST_CASE("randomized solver with enough starts matches the exact solver") {
  const Dataset data = pcs::fixtures::general_position_sample(8, 2, 5);
  const std::size_t h = pcs::default_h(8, 2).h;
  SolverConfig cfg = randomized(3, 28);  // C(8, 6) = 28
  cfg.k_directions = 1000;
  const auto fast = pcs::solve(data, h, cfg);
  const auto exact = pcs::solve_exact(data, h);
  CHECK(fast.h_star == exact.h_star);
  CHECK(fast.index_value == doctest::Approx(exact.index_value).epsilon(1e-12));
}

TEST_CASE("randomized solver ignores a distant cluster") {
  const auto sc = pcs::fixtures::distant_cluster(1);
  const auto fit = pcs::solve(sc.data, 52, randomized(1, 100));
  std::size_t outliers = 0;
  for (std::size_t r : fit.h_star.rows()) outliers += r >= 70;
  CHECK(outliers == 0);
}

TEST_CASE("robust distances") {
  const Dataset data(matrix({{0, 0}, {3, 4}, {1, 0}, {0, 1}}));
  pcs::PcsFit fit;
  fit.location = Eigen::Vector2d(0, 0);
  fit.scatter = Eigen::Matrix2d::Identity();
  const auto d = pcs::robust_distances(data, fit);
  CHECK(d[0] == 0.0);
  CHECK(d[1] == doctest::Approx(5.0));
  CHECK(d[2] == doctest::Approx(1.0));

  fit.scatter = Eigen::Matrix2d::Zero();
  CHECK_THROWS_AS(pcs::robust_distances(data, fit), pcs::Error);
}
