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

#ifndef PCS_COMBINATORICS_HPP_
#define PCS_COMBINATORICS_HPP_

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace pcs {

inline constexpr std::uint64_t kBinomialOverflow =
    std::numeric_limits<std::uint64_t>::max();

// C(n, k), saturating at kBinomialOverflow.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result > kBinomialOverflow) return kBinomialOverflow;
  }
  return static_cast<std::uint64_t>(result);
}

// Advances a strictly increasing k-combination of {0..n-1} to its
// lexicographic successor. Returns false after the last combination.
inline bool next_combination(std::span<std::size_t> comb, std::size_t n) {
  const std::size_t k = comb.size();
  if (k == 0) return false;
  std::size_t i = k;
  while (i > 0) {
    --i;
    if (comb[i] < n - k + i) {
      ++comb[i];
      for (std::size_t j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
      return true;
    }
  }
  return false;
}

// The combination of lexicographic rank `rank` among all k-subsets of n.
inline std::vector<std::size_t> unrank_combination(std::uint64_t rank,
                                                   std::size_t n,
                                                   std::size_t k) {
  std::vector<std::size_t> comb(k);
  std::size_t next = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t v = next;; ++v) {
      const std::uint64_t block = binomial(n - v - 1, k - i - 1);
      if (rank < block) {
        comb[i] = v;
        next = v + 1;
        break;
      }
      rank -= block;
    }
  }
  return comb;
}

// Inverse of unrank_combination.
inline std::uint64_t rank_combination(std::span<const std::size_t> comb,
                                      std::size_t n) {
  const std::size_t k = comb.size();
  std::uint64_t rank = 0;
  std::size_t prev = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t v = prev; v < comb[i]; ++v) {
      rank += binomial(n - v - 1, k - i - 1);
    }
    prev = comb[i] + 1;
  }
  return rank;
}

}  // namespace pcs

#endif  // PCS_COMBINATORICS_HPP_
