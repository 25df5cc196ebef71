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

#include "pcs/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string_view>

#include "pcs/combinatorics.hpp"
#include "pcs/error.hpp"
#include "pcs/parallel.hpp"
#include "pcs/rng.hpp"

namespace pcs {
namespace {

constexpr std::size_t kMaxReportedDuplicates = 5;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  if (line.find(',') != std::string_view::npos) {
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      fields.push_back(trim(line.substr(start, comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return fields;
  }
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

std::optional<double> parse_number(std::string_view field) {
  if (field.empty()) return std::nullopt;
  if (field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

double max_pairwise_distance(const Matrix& rows) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < rows.rows(); ++j) {
      best = std::max(best, (rows.row(i) - rows.row(j)).squaredNorm());
    }
  }
  return std::sqrt(best);
}

}  // namespace

Dataset::Dataset(Matrix rows, const DatasetOptions& options)
    : rows_(std::move(rows)), duplicates_allowed_(options.allow_duplicates) {
  const std::size_t n = this->n();
  const std::size_t p = this->p();
  if (p < 2 || n <= p + 1) {
    throw Error(ErrorKind::kValidation,
                "n>p+1>2 violated: got n=" + std::to_string(n) +
                    ", p=" + std::to_string(p));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows_.row(static_cast<Eigen::Index>(i)).allFinite()) {
      throw Error(ErrorKind::kValidation,
                  "non-finite value in row " + std::to_string(i + 1));
    }
  }
  genuine_rows_ = std::min(options.genuine_rows.value_or(n), n);
  diameter_ = max_pairwise_distance(rows_);

  if (options.allow_duplicates) return;
  const double tol = options.tol_dup_rel * diameter_;
  std::vector<std::pair<std::size_t, std::size_t>> duplicates;
  for (std::size_t i = 0; i < genuine_rows_; ++i) {
    for (std::size_t j = i + 1; j < genuine_rows_; ++j) {
      const double dist = (rows_.row(static_cast<Eigen::Index>(i)) -
                           rows_.row(static_cast<Eigen::Index>(j)))
                              .norm();
      if (dist <= tol) duplicates.emplace_back(i, j);
    }
  }
  if (!duplicates.empty()) {
    std::ostringstream msg;
    msg << "duplicate rows:";
    for (std::size_t k = 0; k < std::min(duplicates.size(), kMaxReportedDuplicates); ++k) {
      msg << (k ? "; " : " ") << duplicates[k].first + 1 << "," << duplicates[k].second + 1;
    }
    if (duplicates.size() > kMaxReportedDuplicates) {
      msg << "; ... (" << duplicates.size() << " pairs)";
    }
    throw Error(ErrorKind::kValidation, msg.str());
  }
}

CsvTable parse_csv(const std::string& text, HeaderMode header) {
  CsvTable table;
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  bool first_content = true;
  std::size_t width = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split_fields(line);
    if (first_content) {
      first_content = false;
      bool numeric = std::all_of(fields.begin(), fields.end(),
                                 [](std::string_view f) { return parse_number(f).has_value(); });
      const bool is_header = header == HeaderMode::kPresent ||
                             (header == HeaderMode::kAuto && !numeric);
      if (is_header) {
        for (auto f : fields) table.header.emplace_back(f);
        width = fields.size();
        continue;
      }
    }
    if (width == 0) width = fields.size();
    if (fields.size() != width) {
      throw Error(ErrorKind::kParse, "line " + std::to_string(line_no) + ": expected " +
                                         std::to_string(width) + " fields, got " +
                                         std::to_string(fields.size()));
    }
    std::vector<double> values;
    values.reserve(width);
    for (std::size_t k = 0; k < fields.size(); ++k) {
      const auto v = parse_number(fields[k]);
      if (!v) {
        throw Error(ErrorKind::kParse, "line " + std::to_string(line_no) + ", field " +
                                           std::to_string(k + 1) + ": malformed number '" +
                                           std::string(fields[k]) + "'");
      }
      values.push_back(*v);
    }
    rows.push_back(std::move(values));
  }
  table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < width; ++j) {
      table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return table;
}

Dataset load_csv(const std::filesystem::path& path, HeaderMode header,
                 const DatasetOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kParse, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return Dataset(parse_csv(buffer.str(), header).values, options);
}

SubsetSize default_h(std::size_t n, std::size_t p) {
  if (p < 2 || n <= p + 1) {
    throw Error(ErrorKind::kValidation, "n>p+1>2 violated");
  }
  return {(n + p + 2) / 2, n, p};
}

SubsetSize make_subset_size(std::size_t n, std::size_t p, std::size_t h) {
  if (h < p + 1 || h > n) {
    throw Error(ErrorKind::kValidation, "h must satisfy p+1 <= h <= n; got h=" +
                                            std::to_string(h));
  }
  return {h, n, p};
}

Rational breakdown_bound(std::size_t n, std::size_t h) {
  if (h == 0 || h > n) {
    throw Error(ErrorKind::kValidation, "breakdown bound needs 1 <= h <= n");
  }
  const std::uint64_t num = n - h + 1;
  const std::uint64_t g = std::gcd(num, static_cast<std::uint64_t>(n));
  return {num / g, n / g};
}

double simplex_volume(const Dataset& data, const std::vector<std::size_t>& rows) {
  const auto p = static_cast<Eigen::Index>(data.p());
  Eigen::MatrixXd edges(p, p);
  const auto origin = data.row(rows[0]);
  for (Eigen::Index k = 0; k < p; ++k) {
    edges.row(k) = data.row(rows[static_cast<std::size_t>(k) + 1]) - origin;
  }
  double factorial = 1.0;
  for (Eigen::Index k = 2; k <= p; ++k) factorial *= static_cast<double>(k);
  return std::abs(edges.fullPivLu().determinant()) / factorial;
}

GeneralPositionReport check_general_position(const Dataset& data,
                                             const GeneralPositionOptions& options) {
  const std::size_t n = data.n();
  const std::size_t k = data.p() + 1;
  GeneralPositionReport report;
  report.tol_gp = options.tol_gp_rel * std::pow(data.diameter(), static_cast<double>(data.p()));

  const std::uint64_t total = binomial(n, k);
  if (total > options.enumeration_cap) {
    if (!options.allow_sampling) {
      throw Error(ErrorKind::kCap, "C(n,p+1)=" + std::to_string(total) +
                                       " exceeds the enumeration cap; enable sampling");
    }
    report.partial = true;
    Rng rng(options.seed, 0x67706368ULL);
    std::vector<std::size_t> pool(n);
    for (std::uint64_t s = 0; s < options.samples; ++s) {
      std::iota(pool.begin(), pool.end(), std::size_t{0});
      for (std::size_t i = 0; i < k; ++i) {
        std::swap(pool[i], pool[i + rng.below(n - i)]);
      }
      std::vector<std::size_t> rows(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
      std::sort(rows.begin(), rows.end());
      ++report.subsets_checked;
      const double vol = simplex_volume(data, rows);
      if (vol <= report.tol_gp) {
        report.in_general_position = false;
        report.witness = rows;
        report.witness_volume = vol;
        break;
      }
    }
    return report;
  }

  // Each chunk records its first degenerate subset; the lowest rank wins so
  // the witness does not depend on the thread count.
  const std::size_t threads = resolve_threads(options.threads);
  const std::size_t chunks = std::min<std::uint64_t>(threads * 4, total);
  std::vector<std::optional<std::uint64_t>> first_bad(chunks);
  const std::uint64_t per = (total + chunks - 1) / chunks;
  parallel_for(chunks, threads, [&](std::size_t c) {
    const std::uint64_t begin = c * per;
    const std::uint64_t end = std::min(total, begin + per);
    if (begin >= end) return;
    auto comb = unrank_combination(begin, n, k);
    for (std::uint64_t r = begin; r < end; ++r) {
      if (simplex_volume(data, comb) <= report.tol_gp) {
        first_bad[c] = r;
        return;
      }
      next_combination(comb, n);
    }
  });
  report.subsets_checked = total;
  for (const auto& bad : first_bad) {
    if (bad) {
      report.in_general_position = false;
      report.witness = unrank_combination(*bad, n, k);
      report.witness_volume = simplex_volume(data, *report.witness);
      break;
    }
  }
  return report;
}

}  // namespace pcs
