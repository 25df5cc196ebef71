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

#include "pcs/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>

#include "pcs/combinatorics.hpp"
#include "pcs/error.hpp"
#include "pcs/parallel.hpp"
#include "pcs/rng.hpp"

namespace pcs {
namespace {

constexpr std::uint64_t kNoRank = std::numeric_limits<std::uint64_t>::max();
// Largest direction table (entries * n doubles) kept in memory.
constexpr std::uint64_t kTableDoubleBudget = 20'000'000;

// Profiles for every p-subset of the rows, indexed by colexicographic rank.
class DirectionTable {
 public:
  DirectionTable(const Dataset& data, std::size_t h, const SolverConfig& config)
      : p_(data.p()) {
    const std::size_t n = data.n();
    binom_.assign((n + 1) * (p_ + 1), 0);
    for (std::size_t m = 0; m <= n; ++m) {
      for (std::size_t k = 0; k <= p_; ++k) binom_[m * (p_ + 1) + k] = binomial(m, k);
    }
    const std::uint64_t total = binomial(n, p_);
    entries_.resize(total);
    parallel_for(total, config.threads, [&](std::size_t r) {
      const auto rows = unrank_colex(r, n);
      auto dir = solve_direction(data, rows, config.geometry);
      if (!dir) return;
      auto& e = entries_[r];
      e.profile = profile_direction(data, *dir, h, config.incongruence);
      e.direction = std::move(*dir);
      e.valid = true;
    });
  }

  struct Entry {
    bool valid = false;
    Direction direction;
    DirectionProfile profile;
  };

  const Entry& at(std::span<const std::size_t> sorted_rows) const {
    std::uint64_t r = 0;
    for (std::size_t i = 0; i < sorted_rows.size(); ++i) {
      r += binom_[sorted_rows[i] * (p_ + 1) + i + 1];
    }
    return entries_[r];
  }

 private:
  std::vector<std::size_t> unrank_colex(std::uint64_t r, std::size_t n) const {
    std::vector<std::size_t> rows(p_);
    std::size_t top = n;
    for (std::size_t i = p_; i-- > 0;) {
      std::size_t v = top - 1;
      while (binom_[v * (p_ + 1) + i + 1] > r) --v;
      rows[i] = v;
      r -= binom_[v * (p_ + 1) + i + 1];
      top = v;
    }
    return rows;
  }

  std::size_t p_;
  std::vector<std::uint64_t> binom_;
  std::vector<Entry> entries_;
};

struct CandidateScore {
  double value = kInfinity;
  std::size_t directions = 0;
  std::size_t singular = 0;
  // First exact-fit direction in canonical order.
  const Direction* exact_direction = nullptr;
  const DirectionProfile* exact_profile = nullptr;
};

// Scores one candidate by walking its p-subsets in lexicographic order.
template <typename Lookup>
CandidateScore score_candidate(std::span<const std::size_t> rows, std::size_t p, std::size_t h,
                               Lookup&& lookup) {
  CandidateScore score;
  const std::size_t m = rows.size();
  std::vector<std::size_t> comb(p);
  std::vector<std::size_t> picked(p);
  for (std::size_t i = 0; i < p; ++i) comb[i] = i;
  double total = 0.0;
  do {
    for (std::size_t i = 0; i < p; ++i) picked[i] = rows[comb[i]];
    const auto& entry = lookup(picked);
    if (!entry.valid) {
      ++score.singular;
      continue;
    }
    if (entry.profile.exact_fit(h) && score.exact_direction == nullptr) {
      score.exact_direction = &entry.direction;
      score.exact_profile = &entry.profile;
    }
    total += incongruence_from_profile(entry.profile, rows);
    ++score.directions;
  } while (next_combination(comb, m));
  if (score.directions > 0) {
    score.value = std::isinf(total) ? kInfinity : total / static_cast<double>(score.directions);
  }
  return score;
}

HSubset zero_set(const DirectionProfile& profile) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < profile.d2.size(); ++i) {
    if (profile.d2[i] == 0.0) rows.push_back(i);
  }
  return HSubset::from_sorted(std::move(rows));
}

PcsFit finish(const Dataset& data, std::size_t h, const SolverConfig& config, HSubset h_star,
              double index_value) {
  PcsFit fit;
  fit.mode = config.mode;
  fit.h = h;
  auto est = estimate(data, h_star);
  fit.h_star = std::move(h_star);
  fit.location = std::move(est.location);
  fit.scatter = std::move(est.scatter);
  fit.index_value = index_value;
  fit.seed = config.seed;
  return fit;
}

PcsFit finish_exact_fit(const Dataset& data, std::size_t h, const SolverConfig& config,
                        const Direction& direction, const DirectionProfile& profile) {
  auto subset = zero_set(profile);
  PcsFit fit = finish(data, h, config, subset, 0.0);
  fit.exact_fit = ExactFit{direction, std::move(subset)};
  return fit;
}

void check_h(const Dataset& data, std::size_t h) {
  make_subset_size(data.n(), data.p(), h);
}

// Rows ranked by (votes desc, score asc, index asc); returns the first h.
std::vector<std::size_t> top_rows(const std::vector<std::uint64_t>& votes,
                                  const std::vector<double>& score, std::size_t h) {
  std::vector<std::size_t> order(score.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto better = [&](std::size_t a, std::size_t b) {
    if (votes[a] != votes[b]) return votes[a] > votes[b];
    if (score[a] != score[b]) return score[a] < score[b];
    return a < b;
  };
  std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(h - 1),
                   order.end(), better);
  order.resize(h);
  std::sort(order.begin(), order.end());
  return order;
}

struct ExactFitEvent {
  Direction direction;
  DirectionProfile profile;
};

struct StartResult {
  bool degenerate = false;
  std::vector<HSubset> visited;
  std::optional<ExactFitEvent> exact_fit;
};

// Profiles for a direction set; stops at the first exact-fit direction.
std::vector<DirectionProfile> profile_all(const Dataset& data, const DirectionSet& dirs,
                                          std::size_t h, const SolverConfig& config,
                                          std::optional<ExactFitEvent>& exact_fit) {
  std::vector<DirectionProfile> profiles;
  profiles.reserve(dirs.directions.size());
  for (const auto& dir : dirs.directions) {
    auto prof = profile_direction(data, dir, h, config.incongruence);
    if (prof.exact_fit(h)) {
      exact_fit = ExactFitEvent{dir, std::move(prof)};
      return {};
    }
    profiles.push_back(std::move(prof));
  }
  return profiles;
}

StartResult run_start(const Dataset& data, std::size_t h, const SolverConfig& config,
                      std::uint64_t start, std::uint64_t enumerated_starts) {
  const std::size_t n = data.n();
  const std::size_t p = data.p();
  StartResult result;
  Rng rng(*config.seed, start);
  try {
    std::vector<std::size_t> current;
    if (start < enumerated_starts) {
      current = unrank_combination(start, n, h);
    } else {
      std::vector<std::size_t> seed_rows;
      while (seed_rows.size() < p + 1) {
        const std::size_t r = rng.below(n);
        if (std::find(seed_rows.begin(), seed_rows.end(), r) == seed_rows.end()) {
          seed_rows.push_back(r);
        }
      }
      std::sort(seed_rows.begin(), seed_rows.end());
      const auto dirs =
          sample_directions(data, seed_rows, config.k_directions, rng.next(), config.geometry);
      if (dirs.directions.empty()) {
        result.degenerate = true;
        return result;
      }
      const auto profiles = profile_all(data, dirs, h, config, result.exact_fit);
      if (result.exact_fit) return result;
      std::vector<double> score(n, 0.0);
      for (const auto& prof : profiles) {
        for (std::size_t i = 0; i < n; ++i) score[i] += prof.d2[i] / prof.den;
      }
      current = top_rows(std::vector<std::uint64_t>(n, 0), score, h);
    }
    result.visited.push_back(HSubset::from_sorted(current));

    for (std::uint64_t step = 0; step < config.n_isteps; ++step) {
      const auto dirs =
          sample_directions(data, current, config.k_directions, rng.next(), config.geometry);
      if (dirs.directions.empty()) break;
      const auto profiles = profile_all(data, dirs, h, config, result.exact_fit);
      if (result.exact_fit) return result;
      std::vector<std::uint64_t> votes(n, 0);
      std::vector<double> score(n, 0.0);
      for (const auto& prof : profiles) {
        for (std::size_t i = 0; i < n; ++i) {
          if (prof.in_neighborhood(i)) ++votes[i];
          score[i] += prof.d2[i] / prof.den;
        }
      }
      auto next = top_rows(votes, score, h);
      if (next == current) break;
      current = std::move(next);
      result.visited.push_back(HSubset::from_sorted(current));
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kDegenerate) throw;
    result.degenerate = result.visited.empty();
  }
  return result;
}

}  // namespace

std::string to_string(SolverMode mode) {
  return mode == SolverMode::kExact ? "exact" : "randomized";
}

SolverMode parse_solver_mode(const std::string& text) {
  if (text == "exact") return SolverMode::kExact;
  if (text == "randomized") return SolverMode::kRandomized;
  throw Error(ErrorKind::kValidation, "unknown solver mode '" + text + "'");
}

void SolverConfig::validate() const {
  if (n_starts == 0) throw Error(ErrorKind::kValidation, "n_starts must be >= 1");
  if (k_directions == 0) throw Error(ErrorKind::kValidation, "k_directions must be >= 1");
  if (mode == SolverMode::kRandomized && !seed) {
    throw Error(ErrorKind::kValidation, "randomized mode requires an explicit seed");
  }
}

Estimate estimate(const Dataset& data, const HSubset& subset) {
  const std::size_t p = data.p();
  if (subset.size() < p + 1) {
    throw Error(ErrorKind::kValidation, "estimate needs at least p+1 rows");
  }
  const auto dim = static_cast<Eigen::Index>(p);
  Estimate est;
  est.location = Vector::Zero(dim);
  for (std::size_t i : subset.rows()) est.location += data.row(i).transpose();
  const double m = static_cast<double>(subset.size());
  est.location /= m;
  est.scatter = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t i : subset.rows()) {
    const Vector c = data.row(i).transpose() - est.location;
    est.scatter.noalias() += c * c.transpose();
  }
  est.scatter /= m;
  est.scatter = 0.5 * (est.scatter + est.scatter.transpose()).eval();
  return est;
}

PcsFit solve_exact(const Dataset& data, std::size_t h, const SolverConfig& config) {
  check_h(data, h);
  config.validate();
  const std::size_t n = data.n();
  const std::size_t p = data.p();
  const std::uint64_t total = binomial(n, h);
  if (total > config.subset_cap) {
    throw Error(ErrorKind::kCap, "C(n,h)=" + (total == kBinomialOverflow ? std::string("overflow")
                                                                            : std::to_string(total)) +
                                     " candidates exceed subset_cap=" +
                                     std::to_string(config.subset_cap) + "; use randomized mode");
  }
  const std::uint64_t per_candidate = binomial(h, p);
  if (per_candidate > config.geometry.direction_cap) {
    throw Error(ErrorKind::kCap, "C(h,p) directions per candidate exceed direction_cap");
  }
  const std::uint64_t table_size = binomial(n, p);
  if (table_size > config.geometry.direction_cap || table_size * n > kTableDoubleBudget) {
    throw Error(ErrorKind::kCap, "C(n,p) direction table too large for exact mode");
  }

  const DirectionTable table(data, h, config);
  auto lookup = [&](const std::vector<std::size_t>& rows) -> const DirectionTable::Entry& {
    return table.at(rows);
  };

  const std::size_t threads = resolve_threads(config.threads);
  const std::size_t chunks = static_cast<std::size_t>(std::min<std::uint64_t>(total, threads * 8));
  const std::uint64_t per = (total + chunks - 1) / chunks;

  struct ChunkBest {
    double value = kInfinity;
    std::uint64_t rank = kNoRank;
    std::uint64_t exact_rank = kNoRank;
    std::uint64_t singular = 0;
  };
  std::vector<ChunkBest> best(chunks);
  std::atomic<std::uint64_t> first_exact{kNoRank};

  parallel_for(chunks, threads, [&](std::size_t c) {
    const std::uint64_t begin = c * per;
    const std::uint64_t end = std::min(total, begin + per);
    if (begin >= end) return;
    auto& local = best[c];
    auto comb = unrank_combination(begin, n, h);
    for (std::uint64_t r = begin; r < end; ++r) {
      if (r > first_exact.load(std::memory_order_relaxed)) return;
      const auto score = score_candidate(comb, p, h, lookup);
      local.singular += score.singular;
      if (score.exact_direction != nullptr) {
        local.exact_rank = r;
        std::uint64_t seen = first_exact.load();
        while (r < seen && !first_exact.compare_exchange_weak(seen, r)) {
        }
        return;
      }
      if (local.rank == kNoRank || score.value < local.value) {
        local.value = score.value;
        local.rank = r;
      }
      next_combination(comb, n);
    }
  });

  std::uint64_t exact_rank = kNoRank;
  for (const auto& b : best) exact_rank = std::min(exact_rank, b.exact_rank);

  if (exact_rank != kNoRank) {
    const auto comb = unrank_combination(exact_rank, n, h);
    const auto score = score_candidate(comb, p, h, lookup);
    PcsFit fit = finish_exact_fit(data, h, config, *score.exact_direction, *score.exact_profile);
    fit.diagnostics.candidates_evaluated = exact_rank + 1;
    fit.diagnostics.directions_per_candidate = per_candidate;
    return fit;
  }

  double best_value = kInfinity;
  std::uint64_t best_rank = kNoRank;
  std::uint64_t singular = 0;
  for (const auto& b : best) {
    singular += b.singular;
    if (b.rank == kNoRank) continue;
    if (best_rank == kNoRank || b.value < best_value) {
      best_value = b.value;
      best_rank = b.rank;
    }
  }
  if (best_rank == kNoRank || std::isinf(best_value)) {
    throw Error(ErrorKind::kDegenerate, "no candidate subset has a usable direction");
  }
  PcsFit fit = finish(data, h, config,
                      HSubset::from_sorted(unrank_combination(best_rank, n, h)), best_value);
  fit.diagnostics.candidates_evaluated = total;
  fit.diagnostics.directions_per_candidate = per_candidate;
  fit.diagnostics.singular_directions = singular;
  return fit;
}

PcsFit solve_randomized(const Dataset& data, std::size_t h, const SolverConfig& config) {
  check_h(data, h);
  config.validate();
  const std::size_t n = data.n();
  const std::size_t p = data.p();

  // A start budget that covers every h-subset enumerates them as starts.
  const std::uint64_t n_subsets = binomial(n, h);
  const std::uint64_t enumerated_starts =
      (config.n_starts >= n_subsets && n_subsets <= config.subset_cap) ? n_subsets : 0;

  std::vector<StartResult> starts(config.n_starts);
  std::atomic<std::uint64_t> first_exact{kNoRank};
  parallel_for(config.n_starts, config.threads, [&](std::size_t s) {
    if (s > first_exact.load(std::memory_order_relaxed)) return;
    starts[s] = run_start(data, h, config, s, enumerated_starts);
    if (starts[s].exact_fit) {
      std::uint64_t seen = first_exact.load();
      while (s < seen && !first_exact.compare_exchange_weak(seen, s)) {
      }
    }
  });

  SolverDiagnostics diag;
  diag.directions_per_candidate = std::min<std::uint64_t>(config.k_directions, binomial(h, p));
  for (const auto& st : starts) {
    if (st.exact_fit) {
      PcsFit fit = finish_exact_fit(data, h, config, st.exact_fit->direction, st.exact_fit->profile);
      fit.diagnostics = diag;
      return fit;
    }
  }

  std::vector<HSubset> candidates;
  for (const auto& st : starts) {
    if (st.degenerate) ++diag.degenerate_starts;
    candidates.insert(candidates.end(), st.visited.begin(), st.visited.end());
  }
  if (candidates.empty()) {
    throw Error(ErrorKind::kDegenerate, "all random starts were degenerate");
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  struct Ranked {
    double value = kInfinity;
    std::uint64_t singular = 0;
    std::optional<ExactFitEvent> exact_fit;
  };
  std::vector<Ranked> ranked(candidates.size());
  parallel_for(candidates.size(), config.threads, [&](std::size_t c) {
    const auto& rows = candidates[c].rows();
    try {
      const auto dirs = sample_directions(data, rows, config.k_directions,
                                          derive_seed(*config.seed, hash_indices(rows)),
                                          config.geometry);
      ranked[c].singular = dirs.skipped_singular;
      if (dirs.directions.empty()) return;
      double total = 0.0;
      for (const auto& dir : dirs.directions) {
        auto prof = profile_direction(data, dir, h, config.incongruence);
        if (prof.exact_fit(h)) {
          ranked[c].exact_fit = ExactFitEvent{dir, std::move(prof)};
          return;
        }
        total += incongruence_from_profile(prof, rows);
      }
      ranked[c].value =
          std::isinf(total) ? kInfinity : total / static_cast<double>(dirs.directions.size());
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kDegenerate) throw;
    }
  });

  diag.candidates_evaluated = candidates.size();
  std::size_t best = candidates.size();
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    diag.singular_directions += ranked[c].singular;
    if (ranked[c].exact_fit) {
      PcsFit fit =
          finish_exact_fit(data, h, config, ranked[c].exact_fit->direction, ranked[c].exact_fit->profile);
      fit.diagnostics = diag;
      return fit;
    }
    if (best == candidates.size() || ranked[c].value < ranked[best].value) best = c;
  }
  if (std::isinf(ranked[best].value)) {
    throw Error(ErrorKind::kDegenerate, "no candidate subset has a usable direction");
  }
  PcsFit fit = finish(data, h, config, candidates[best], ranked[best].value);
  fit.diagnostics = diag;
  return fit;
}

PcsFit solve(const Dataset& data, std::size_t h, const SolverConfig& config) {
  return config.mode == SolverMode::kExact ? solve_exact(data, h, config)
                                           : solve_randomized(data, h, config);
}

std::vector<double> robust_distances(const Dataset& data, const PcsFit& fit) {
  Eigen::LLT<Eigen::MatrixXd> llt(fit.scatter);
  const Eigen::VectorXd eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(
                                  fit.scatter, Eigen::EigenvaluesOnly)
                                  .eigenvalues();
  if (llt.info() != Eigen::Success || !(eig(0) > 1e-14 * eig(eig.size() - 1))) {
    throw Error(ErrorKind::kDegenerate,
                "scatter is singular; use the exact-fit subset instead of robust distances");
  }
  std::vector<double> out(data.n());
  for (std::size_t i = 0; i < data.n(); ++i) {
    const Vector c = data.row(i).transpose() - fit.location;
    out[i] = std::sqrt(std::max(0.0, c.dot(llt.solve(c))));
  }
  return out;
}

}  // namespace pcs
