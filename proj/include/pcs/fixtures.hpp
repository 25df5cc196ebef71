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

// Synthetic datasets shared by the tests, the acceptance suite, the CLI
// `generate` subcommand and the Python bindings.

#ifndef PCS_FIXTURES_HPP_
#define PCS_FIXTURES_HPP_

#include <cstdint>
#include <vector>

#include "pcs/dataset.hpp"
#include "pcs/incongruence.hpp"

namespace pcs::fixtures {

// n x p standard normal rows, scaled and shifted by `offset` in every
// coordinate. A nonzero offset keeps spanning hyperplanes off the origin.
Matrix gaussian_rows(std::size_t n, std::size_t p, std::uint64_t seed, double scale = 1.0,
                     double offset = 0.0);

// Gaussian data redrawn until it passes the general position check.
Dataset general_position_sample(std::size_t n, std::size_t p, std::uint64_t seed);

// 70 genuine bivariate normal rows followed by a compact 30-row cluster far
// to the right, with one clean and one contaminated 52-subset.
struct ClusterScenario {
  Dataset data;
  std::vector<std::size_t> cluster_rows;
  HSubset clean_subset;
  HSubset contaminated_subset;  // 27 cluster rows and 25 genuine rows
};
ClusterScenario distant_cluster(std::uint64_t seed);

// n_line rows exactly on the line y = 0.5 x + 1 interleaved with n_off
// rows in general position off that line.
struct ExactFitScenario {
  Dataset data;
  std::vector<std::size_t> line_rows;
};
ExactFitScenario collinear_majority(std::size_t n_line, std::size_t n_off, std::uint64_t seed);

}  // namespace pcs::fixtures

#endif  // PCS_FIXTURES_HPP_
