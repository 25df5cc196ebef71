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

#ifndef PCS_DATASET_HPP_
#define PCS_DATASET_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pcs {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

struct DatasetOptions {
  // Rows closer than tol_dup_rel * diameter count as duplicates.
  double tol_dup_rel = 1e-12;
  bool allow_duplicates = false;
  // Only the first `genuine_rows` rows are duplicate-checked; rows after
  // them form a contamination block. nullopt means all rows are genuine.
  std::optional<std::size_t> genuine_rows;
};

// An immutable n x p sample with n > p + 1 > 2, finite entries, and no
// duplicated genuine rows.
class Dataset {
 public:
  explicit Dataset(Matrix rows, const DatasetOptions& options = {});

  std::size_t n() const { return static_cast<std::size_t>(rows_.rows()); }
  std::size_t p() const { return static_cast<std::size_t>(rows_.cols()); }
  const Matrix& rows() const { return rows_; }
  auto row(std::size_t i) const { return rows_.row(static_cast<Eigen::Index>(i)); }

  // Largest pairwise Euclidean distance.
  double diameter() const { return diameter_; }
  std::size_t genuine_rows() const { return genuine_rows_; }
  bool duplicates_allowed() const { return duplicates_allowed_; }

 private:
  Matrix rows_;
  double diameter_ = 0.0;
  std::size_t genuine_rows_ = 0;
  bool duplicates_allowed_ = false;
};

enum class HeaderMode { kAuto, kPresent, kAbsent };

struct CsvTable {
  Matrix values;
  std::vector<std::string> header;  // empty when the file has none
};

// Parses comma- or whitespace-delimited numeric text. Throws Error(kParse)
// on malformed numbers or ragged rows.
CsvTable parse_csv(const std::string& text, HeaderMode header = HeaderMode::kAuto);

Dataset load_csv(const std::filesystem::path& path,
                 HeaderMode header = HeaderMode::kAuto,
                 const DatasetOptions& options = {});

struct SubsetSize {
  std::size_t h = 0;
  std::size_t n = 0;
  std::size_t p = 0;
};

// h = ceil((n + p + 1) / 2).
SubsetSize default_h(std::size_t n, std::size_t p);

// Validates a user supplied h against p + 1 <= h <= n.
SubsetSize make_subset_size(std::size_t n, std::size_t p, std::size_t h);

struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

// The maximal finite sample breakdown point (n - h + 1) / n, reduced.
Rational breakdown_bound(std::size_t n, std::size_t h);

struct GeneralPositionOptions {
  // Simplices with volume below tol_gp_rel * diameter^p are degenerate.
  double tol_gp_rel = 1e-10;
  std::uint64_t enumeration_cap = 1'000'000;
  // Past the cap, test this many random (p+1)-subsets instead of failing.
  bool allow_sampling = false;
  std::uint64_t samples = 100'000;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

struct GeneralPositionReport {
  bool in_general_position = true;
  // Lexicographically first degenerate (p+1)-subset found, 0-based.
  std::optional<std::vector<std::size_t>> witness;
  double witness_volume = 0.0;
  double tol_gp = 0.0;
  bool partial = false;  // sampled rather than exhaustive
  std::uint64_t subsets_checked = 0;
};

// Volume of the simplex spanned by the given p + 1 rows.
double simplex_volume(const Dataset& data, const std::vector<std::size_t>& rows);

GeneralPositionReport check_general_position(const Dataset& data,
                                             const GeneralPositionOptions& options = {});

}  // namespace pcs

#endif  // PCS_DATASET_HPP_
