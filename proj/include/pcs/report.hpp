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

#ifndef PCS_REPORT_HPP_
#define PCS_REPORT_HPP_

#include <string>
#include <vector>

#include <json.hpp>

#include "pcs/breakdown_lab.hpp"
#include "pcs/incongruence.hpp"
#include "pcs/solver.hpp"

namespace pcs {

inline constexpr const char* kVersion = "0.1.0";

// seed, a 64-bit FNV-1a hash of the canonical configuration string, and the
// library version.
nlohmann::json reproducibility_block(const std::optional<std::uint64_t>& seed,
                                     const std::string& canonical_config);

// Stable key=value rendering of every field that can change a result.
std::string canonical_config(const SolverConfig& config);

nlohmann::json config_to_json(const SolverConfig& config);

// Row indices are written 1-based. Non-finite numbers become null.
nlohmann::json fit_to_json(const PcsFit& fit, const SolverConfig& config);

// One sorted curve per subset, side by side: rank, then for every curve
// direction_index, I_value and source_rows (1-based, space separated).
std::string curves_to_csv(const std::vector<std::vector<CurvePoint>>& curves);

std::string sweep_to_csv(const SweepResult& sweep);
nlohmann::json sweep_summary_json(const SweepResult& sweep, std::size_t n, std::size_t h);

// Human readable one-liner, e.g. "diverged at ε = 0.45".
std::string describe_breakdown(const BreakdownEstimate& estimate);

std::string format_double(double value);

}  // namespace pcs

#endif  // PCS_REPORT_HPP_
