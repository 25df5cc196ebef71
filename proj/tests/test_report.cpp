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
#include <sstream>

#include "doctest.h"
#include "pcs/fixtures.hpp"
#include "pcs/report.hpp"
#include "test_util.hpp"

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.123456789, -2.5}) {
    CHECK(std::stod(pcs::format_double(v)) == v);
  }
  CHECK(pcs::format_double(pcs::kInfinity) == "inf");
  CHECK(pcs::format_double(std::nan("")) == "nan");
}

TEST_CASE("reproducibility block hashes the configuration") {
  pcs::SolverConfig a;
  pcs::SolverConfig b;
  b.n_starts = 501;
  const auto ba = pcs::reproducibility_block(7, pcs::canonical_config(a));
  const auto bb = pcs::reproducibility_block(7, pcs::canonical_config(b));
  CHECK(ba["seed"] == 7);
  CHECK(ba["version"] == pcs::kVersion);
  CHECK(ba["config_hash"].get<std::string>().size() == 16);
  CHECK(ba["config_hash"] != bb["config_hash"]);
  CHECK(ba == pcs::reproducibility_block(7, pcs::canonical_config(a)));
  CHECK(pcs::reproducibility_block(std::nullopt, "")["seed"].is_null());
}

TEST_CASE("fit JSON uses one-based rows and round-trips numbers") {
  const auto data = pcs::fixtures::general_position_sample(8, 2, 3);
  const pcs::SolverConfig cfg;
  const auto fit = pcs::solve_exact(data, 6, cfg);
  const auto j = nlohmann::json::parse(pcs::fit_to_json(fit, cfg).dump());
  CHECK(j["index_base"] == 1);
  CHECK(j["h"] == 6);
  REQUIRE(j["h_star"].size() == 6);
  for (std::size_t k = 0; k < 6; ++k) CHECK(j["h_star"][k] == fit.h_star.rows()[k] + 1);
  CHECK(j["location"][0].get<double>() == fit.location(0));
  CHECK(j["scatter"][1].get<double>() == fit.scatter(0, 1));
  CHECK(j["scatter"].size() == 4);
  CHECK(j["index_value"].get<double>() == fit.index_value);
  CHECK(j["exact_fit"].is_null());
  CHECK(j["config"]["covariance_divisor"] == "n_subset");
  CHECK(j["reproducibility"].contains("config_hash"));
}

TEST_CASE("exact fit is reported") {
  const auto sc = pcs::fixtures::collinear_majority(12, 8, 3);
  const pcs::SolverConfig cfg;
  const auto j = pcs::fit_to_json(pcs::solve_exact(sc.data, 12, cfg), cfg);
  REQUIRE(j["exact_fit"].is_object());
  CHECK(j["exact_fit"]["subset"].size() == 12);
  CHECK(j["exact_fit"]["scatter_singular"] == true);
  CHECK(j["index_value"] == 0.0);
}

TEST_CASE("curve CSV layout") {
  std::vector<pcs::CurvePoint> a{{2, 0.5, {0, 3}}, {1, 1.25, {0, 1}}};
  std::vector<pcs::CurvePoint> b{{1, 0.0, {2, 4}}};
  const std::string one = pcs::curves_to_csv({a});
  CHECK(one == "# index_base=1\nrank,direction_index,I_value,source_rows\n1,2,0.5,1 4\n2,1,1.25,1 2\n");
  const std::string two = pcs::curves_to_csv({a, b});
  std::istringstream in(two);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  CHECK(line ==
        "rank,direction_index_1,I_value_1,source_rows_1,direction_index_2,I_value_2,source_rows_2");
  std::getline(in, line);
  CHECK(line == "1,2,0.5,1 4,1,0,3 5");
  std::getline(in, line);
  CHECK(line == "2,1,1.25,1 2,,,");
}

TEST_CASE("breakdown descriptions") {
  pcs::BreakdownEstimate e;
  e.theoretical = pcs::Rational{9, 20};
  e.max_tested_c = 8;
  e.diverged_on = "none";
  CHECK(pcs::describe_breakdown(e) == "no divergence detected (empirical breakdown > 8/n)");
  e.empirical = pcs::Rational{9, 20};
  e.diverged_on = "both";
  CHECK(pcs::describe_breakdown(e) == "diverged at ε = 0.45 (9/20, both)");

  pcs::SweepResult sweep;
  sweep.estimate = e;
  pcs::BiasRecord r;
  r.c = 9;
  r.epsilon = 0.45;
  r.L = 1e3;
  r.location_bias = 750;
  r.scatter_bias = pcs::kInfinity;
  r.h_star_outlier_count = 9;
  sweep.records.push_back(r);
  CHECK(pcs::sweep_to_csv(sweep) ==
        "c,epsilon,L,location_bias,scatter_bias,h_star_outlier_count\n9,0.45000000000000001,1000,750,inf,9\n");
  const auto j = pcs::sweep_summary_json(sweep, 20, 12);
  CHECK(j["matches_theory"] == true);
  CHECK(j["theoretical"]["fraction"] == "9/20");
}
