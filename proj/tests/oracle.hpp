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

// Brute-force reference computations used only by tests. Nothing here calls
// into the library's geometry, incongruence or solver code paths.

#ifndef PCS_TESTS_ORACLE_HPP_
#define PCS_TESTS_ORACLE_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace oracle {

using Rows = std::vector<std::vector<double>>;

// Gaussian elimination with partial pivoting on x_i'a = 1.
inline std::optional<std::vector<double>> hyperplane(const Rows& pts) {
  const std::size_t p = pts.size();
  std::vector<std::vector<double>> m(p, std::vector<double>(p + 1, 1.0));
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) m[i][j] = pts[i][j];
  }
  double scale = 0.0;
  for (const auto& r : pts) {
    for (double v : r) scale = std::max(scale, std::abs(v));
  }
  for (std::size_t col = 0; col < p; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < p; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    }
    if (std::abs(m[piv][col]) <= 1e-12 * std::max(1.0, scale)) return std::nullopt;
    std::swap(m[piv], m[col]);
    for (std::size_t r = 0; r < p; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      for (std::size_t c = col; c <= p; ++c) m[r][c] -= f * m[col][c];
    }
  }
  std::vector<double> a(p);
  for (std::size_t i = 0; i < p; ++i) a[i] = m[i][p] / m[i][i];
  return a;
}

inline double dist2(const std::vector<double>& a, const std::vector<double>& x) {
  double dot = 0.0;
  double nn = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    dot += a[k] * x[k];
    nn += a[k] * a[k];
  }
  return (dot - 1.0) * (dot - 1.0) / nn;
}

// I(H, a) straight from the definition: sorted distances, mean of the h
// smallest in the denominator, log(0/0) = 0 and an absolute zero tolerance.
inline double incongruence(const Rows& data, const std::vector<std::size_t>& subset,
                           const std::vector<double>& a, std::size_t h,
                           double zero_tol = 1e-10) {
  std::vector<double> d(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    d[i] = dist2(a, data[i]);
    if (d[i] <= zero_tol) d[i] = 0.0;
  }
  std::vector<double> sorted = d;
  std::sort(sorted.begin(), sorted.end());
  double den = 0.0;
  for (std::size_t k = 0; k < h; ++k) den += sorted[k];
  den /= static_cast<double>(h);
  double num = 0.0;
  for (std::size_t i : subset) num += d[i];
  num /= static_cast<double>(subset.size());
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::max(0.0, std::log(num / den));
}

template <typename Fn>
void for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
  std::vector<bool> mask(n, false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(k), true);
  std::vector<std::vector<std::size_t>> all;
  do {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask[i]) s.push_back(i);
    }
    all.push_back(std::move(s));
  } while (std::prev_permutation(mask.begin(), mask.end()));
  std::sort(all.begin(), all.end());
  for (const auto& s : all) fn(s);
}

// I(H): mean of I(H, a) over every non-singular p-subset of H.
inline double subset_index(const Rows& data, const std::vector<std::size_t>& subset,
                           std::size_t p, std::size_t h) {
  double total = 0.0;
  std::size_t count = 0;
  for_each_subset(subset.size(), p, [&](const std::vector<std::size_t>& pos) {
    Rows pts;
    for (std::size_t q : pos) pts.push_back(data[subset[q]]);
    const auto a = hyperplane(pts);
    if (!a) return;
    total += incongruence(data, subset, *a, h);
    ++count;
  });
  return count ? total / static_cast<double>(count) : std::numeric_limits<double>::infinity();
}

struct Argmin {
  std::vector<std::size_t> subset;
  double value = std::numeric_limits<double>::infinity();
  std::size_t evaluated = 0;
};

// Exhaustive PCS criterion; ties resolved toward the lexicographically
// smallest subset.
inline Argmin pcs_argmin(const Rows& data, std::size_t p, std::size_t h) {
  Argmin best;
  for_each_subset(data.size(), h, [&](const std::vector<std::size_t>& s) {
    ++best.evaluated;
    const double v = subset_index(data, s, p, h);
    if (best.subset.empty() || v < best.value) {
      best.value = v;
      best.subset = s;
    }
  });
  return best;
}

// Every triple of 2-d points checked for collinearity via the cross product.
inline bool planar_general_position(const Rows& pts, double tol = 1e-12) {
  bool ok = true;
  for_each_subset(pts.size(), 3, [&](const std::vector<std::size_t>& t) {
    const auto& a = pts[t[0]];
    const auto& b = pts[t[1]];
    const auto& c = pts[t[2]];
    const double cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    if (std::abs(cross) <= tol) ok = false;
  });
  return ok;
}

}  // namespace oracle

#endif  // PCS_TESTS_ORACLE_HPP_
