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

// pcs: command-line front end for fitting, curve export, breakdown sweeps and
// diagnostics. Exit codes: 0 ok, 2 parse/usage, 3 validation, 4 cap
// exceeded, 5 degenerate input, 6 a requested check failed.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pcs/breakdown_lab.hpp"
#include "pcs/error.hpp"
#include "pcs/fixtures.hpp"
#include "pcs/incongruence.hpp"
#include "pcs/report.hpp"
#include "pcs/rng.hpp"
#include "pcs/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitCap = 4;
constexpr int kExitDegenerate = 5;
constexpr int kExitCheckFailed = 6;

using nlohmann::json;

struct Common {
  std::string input;
  std::string header = "auto";
  std::string output;
  std::string format;
  std::optional<std::uint64_t> seed;
  std::size_t threads = 1;
  bool allow_duplicates = false;
  std::optional<std::size_t> h;
  std::string mode = "exact";
  std::uint64_t n_starts = 500;
  std::uint64_t n_isteps = 3;
  std::uint64_t k_directions = 250;
  std::uint64_t subset_cap = 200'000;
  std::uint64_t direction_cap = 1'000'000;
  double tol_dup = 1e-12;
  double tol_zero = 1e-10;
  double tol_fit = 1e-8;
  double tol_gp = 1e-10;
  double cond_cap = 1e12;
};

pcs::HeaderMode parse_header(const std::string& text) {
  if (text == "auto") return pcs::HeaderMode::kAuto;
  if (text == "present") return pcs::HeaderMode::kPresent;
  if (text == "absent") return pcs::HeaderMode::kAbsent;
  throw pcs::Error(pcs::ErrorKind::kValidation, "unknown header mode '" + text + "'");
}

// --seed wins; PCS_SEED is consulted only when the flag is absent.
void resolve_seed(Common& common) {
  if (common.seed) return;
  const char* env = std::getenv("PCS_SEED");
  if (env == nullptr || *env == '\0') return;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used);
    if (used != std::string(env).size()) throw std::invalid_argument("trailing");
    common.seed = v;
  } catch (const std::exception&) {
    throw pcs::Error(pcs::ErrorKind::kValidation, "PCS_SEED is not an unsigned integer");
  }
}

pcs::Dataset load(const Common& common) {
  if (common.input.empty()) throw pcs::Error(pcs::ErrorKind::kValidation, "--input is required");
  pcs::DatasetOptions opts;
  opts.tol_dup_rel = common.tol_dup;
  opts.allow_duplicates = common.allow_duplicates;
  return pcs::load_csv(common.input, parse_header(common.header), opts);
}

pcs::SolverConfig solver_config(const Common& common) {
  pcs::SolverConfig cfg;
  cfg.mode = pcs::parse_solver_mode(common.mode);
  cfg.subset_cap = common.subset_cap;
  cfg.n_starts = common.n_starts;
  cfg.n_isteps = common.n_isteps;
  cfg.k_directions = common.k_directions;
  cfg.seed = common.seed;
  cfg.threads = common.threads;
  cfg.geometry.cond_cap = common.cond_cap;
  cfg.geometry.tol_fit_rel = common.tol_fit;
  cfg.geometry.direction_cap = common.direction_cap;
  cfg.incongruence.tol_zero_rel = common.tol_zero;
  if (cfg.mode == pcs::SolverMode::kRandomized && !cfg.seed) {
    throw pcs::Error(pcs::ErrorKind::kValidation,
                     "randomized mode needs --seed (or PCS_SEED); there is no default seed");
  }
  cfg.validate();
  return cfg;
}

std::size_t resolve_h(const Common& common, const pcs::Dataset& data) {
  return common.h ? pcs::make_subset_size(data.n(), data.p(), *common.h).h
                  : pcs::default_h(data.n(), data.p()).h;
}

void emit(const Common& common, const std::string& text) {
  if (common.output.empty() || common.output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(common.output);
  if (!out) throw pcs::Error(pcs::ErrorKind::kValidation, "cannot write '" + common.output + "'");
  out << text;
}

// Summary lines go to stdout when the artifact goes to a file, else stderr.
std::ostream& summary_stream(const Common& common) {
  return common.output.empty() || common.output == "-" ? std::cerr : std::cout;
}

std::vector<std::size_t> parse_index_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::string field;
  std::istringstream in(text);
  while (std::getline(in, field, ',')) {
    const auto first = field.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const auto last = field.find_last_not_of(" \t");
    const std::string token = field.substr(first, last - first + 1);
    const auto dots = token.find("..");
    try {
      std::size_t used = 0;
      if (dots != std::string::npos) {
        const std::size_t lo = std::stoull(token.substr(0, dots), &used);
        const std::size_t hi = std::stoull(token.substr(dots + 2));
        if (lo > hi) throw std::invalid_argument("range");
        for (std::size_t v = lo; v <= hi; ++v) out.push_back(v);
      } else {
        out.push_back(std::stoull(token, &used));
        if (used != token.size()) throw std::invalid_argument("trailing");
      }
    } catch (const std::exception&) {
      throw pcs::Error(pcs::ErrorKind::kValidation, "bad index list entry '" + token + "'");
    }
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw pcs::Error(pcs::ErrorKind::kValidation, "bad number '" + token + "'");
    }
  }
  if (out.empty()) throw pcs::Error(pcs::ErrorKind::kValidation, "empty number list");
  return out;
}

pcs::HSubset one_based_subset(const std::string& text, std::size_t n) {
  std::vector<std::size_t> rows;
  for (std::size_t r : parse_index_list(text)) {
    if (r == 0 || r > n) {
      throw pcs::Error(pcs::ErrorKind::kValidation,
                       "subset index " + std::to_string(r) + " outside 1.." + std::to_string(n));
    }
    rows.push_back(r - 1);
  }
  return pcs::HSubset(std::move(rows), n);
}

std::string csv_of(const pcs::Matrix& m) {
  std::ostringstream out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << pcs::format_double(m(i, j));
    }
    out << '\n';
  }
  return out.str();
}

// ---- subcommands ----------------------------------------------------------

int cmd_fit(const Common& common) {
  const auto data = load(common);
  const auto cfg = solver_config(common);
  const std::size_t h = resolve_h(common, data);
  const auto fit = pcs::solve(data, h, cfg);
  emit(common, pcs::fit_to_json(fit, cfg).dump(2) + "\n");
  auto& out = summary_stream(common);
  out << "h = " << h << ", breakdown bound = " << pcs::breakdown_bound(data.n(), h).str() << " ("
      << pcs::format_double(pcs::breakdown_bound(data.n(), h).value()) << ")\n"
      << "index = " << pcs::format_double(fit.index_value) << "\n"
      << "exact fit: " << (fit.exact_fit ? "yes, " + std::to_string(fit.h_star.size()) + " rows on one hyperplane" : "no")
      << "\n";
  return kExitOk;
}

int cmd_curve(const Common& common, const std::vector<std::string>& subsets) {
  if (subsets.empty() || subsets.size() > 2) {
    throw pcs::Error(pcs::ErrorKind::kValidation, "give one or two --subset lists");
  }
  const auto data = load(common);
  const auto cfg = solver_config(common);
  const std::size_t h = resolve_h(common, data);
  std::vector<std::vector<pcs::CurvePoint>> curves;
  std::vector<double> aggregates;
  for (const auto& text : subsets) {
    const auto subset = one_based_subset(text, data.n());
    if (subset.size() != h) {
      throw pcs::Error(pcs::ErrorKind::kValidation, "subset has " + std::to_string(subset.size()) +
                                                        " rows, expected h = " + std::to_string(h));
    }
    const auto dirs = pcs::enumerate_directions(data, subset.rows(), cfg.geometry);
    const auto report = pcs::incongruence_index(data, subset, dirs, h, cfg.incongruence);
    curves.push_back(pcs::sorted_curve(report));
    aggregates.push_back(report.aggregate);
  }
  const auto repro = pcs::reproducibility_block(common.seed, pcs::canonical_config(cfg));
  emit(common, "# reproducibility=" + repro.dump() + "\n" + pcs::curves_to_csv(curves));
  auto& out = summary_stream(common);
  for (std::size_t k = 0; k < aggregates.size(); ++k) {
    out << "I(subset " << k + 1 << ") = " << pcs::format_double(aggregates[k]) << "\n";
  }
  if (aggregates.size() == 2) {
    out << (aggregates[0] < aggregates[1]   ? "subset 1 is more congruent"
            : aggregates[1] < aggregates[0] ? "subset 2 is more congruent"
                                            : "tie")
        << "\n";
  }
  return kExitOk;
}

struct BreakdownArgs {
  std::size_t n = 20;
  std::size_t p = 2;
  std::uint64_t data_seed = 11;
  std::string c_range;
  std::string L_grid = "1e3,1e6,1e9";
  std::string geometry = "point-mass";
  double growth = 10.0;
  std::string summary;
};

int cmd_breakdown(const Common& common, const BreakdownArgs& args) {
  const pcs::Dataset data = common.input.empty()
                                ? pcs::fixtures::general_position_sample(args.n, args.p, args.data_seed)
                                : load(common);
  pcs::SweepConfig cfg;
  cfg.solver = solver_config(common);
  cfg.L_grid = parse_double_list(args.L_grid);
  cfg.placement = pcs::parse_placement(args.geometry);
  if (cfg.placement == pcs::Placement::kCustom) {
    throw pcs::Error(pcs::ErrorKind::kValidation, "custom placement is only available from the library");
  }
  cfg.growth_threshold = args.growth;
  cfg.seed = common.seed.value_or(0);
  cfg.threads = common.threads;
  cfg.solver.threads = 1;
  cfg.general_position.tol_gp_rel = common.tol_gp;
  const std::size_t h = resolve_h(common, data);
  if (args.c_range.empty()) {
    for (std::size_t c = 0; c <= data.n() - h + 1; ++c) cfg.c_range.push_back(c);
  } else {
    cfg.c_range = parse_index_list(args.c_range);
  }
  const auto res = pcs::breakdown_sweep(data, h, cfg);
  emit(common, pcs::sweep_to_csv(res));
  auto summary = pcs::sweep_summary_json(res, data.n(), h);
  summary["reproducibility"] = pcs::reproducibility_block(
      cfg.seed, pcs::canonical_config(cfg.solver) + ";sweep_seed=" + std::to_string(cfg.seed) +
                    ";L_grid=" + args.L_grid + ";placement=" + args.geometry +
                    ";growth=" + pcs::format_double(args.growth));
  if (!args.summary.empty()) {
    std::ofstream(args.summary) << summary.dump(2) << "\n";
  }
  auto& out = summary_stream(common);
  out << "theoretical breakdown = " << res.estimate.theoretical.str() << "\n"
      << pcs::describe_breakdown(res.estimate) << "\n";
  if (args.summary.empty()) out << summary.dump(2) << "\n";
  return kExitOk;
}

int cmd_equivariance(const Common& common, std::size_t trials, double max_condition,
                     double rel_tol) {
  const auto data = load(common);
  const auto cfg = solver_config(common);
  const std::size_t h = resolve_h(common, data);
  const std::uint64_t base = common.seed.value_or(0);
  json out;
  out["trials"] = json::array();
  bool all = true;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto rep = pcs::equivariance_trial(data, h, cfg, pcs::derive_seed(base, t), max_condition, rel_tol);
    all = all && rep.passed;
    out["trials"].push_back({{"trial", t + 1},
                             {"passed", rep.passed},
                             {"h_star_equal", rep.h_star_equal},
                             {"location_error", rep.location_error},
                             {"location_tol", rep.location_tol},
                             {"scatter_error", rep.scatter_error},
                             {"scatter_tol", rep.scatter_tol},
                             {"condition", rep.condition},
                             {"message", rep.message}});
  }
  out["passed"] = all;
  out["reproducibility"] = pcs::reproducibility_block(base, pcs::canonical_config(cfg));
  emit(common, out.dump(2) + "\n");
  summary_stream(common) << (all ? "equivariance: all " : "equivariance: FAILED in some of ")
                         << trials << " trials\n";
  return all ? kExitOk : kExitCheckFailed;
}

int cmd_gp_check(const Common& common, std::uint64_t cap, bool sample, std::uint64_t samples) {
  const auto data = load(common);
  pcs::GeneralPositionOptions opts;
  opts.tol_gp_rel = common.tol_gp;
  opts.enumeration_cap = cap;
  opts.allow_sampling = sample;
  opts.samples = samples;
  opts.seed = common.seed.value_or(0);
  opts.threads = common.threads;
  const auto rep = pcs::check_general_position(data, opts);
  json out;
  out["index_base"] = 1;
  out["in_general_position"] = rep.in_general_position;
  if (rep.witness) {
    json w = json::array();
    for (std::size_t r : *rep.witness) w.push_back(r + 1);
    out["witness"] = w;
    out["witness_volume"] = rep.witness_volume;
  } else {
    out["witness"] = nullptr;
  }
  out["tol_gp"] = rep.tol_gp;
  out["partial"] = rep.partial;
  out["subsets_checked"] = rep.subsets_checked;
  out["reproducibility"] = pcs::reproducibility_block(
      common.seed, "tol_gp_rel=" + pcs::format_double(common.tol_gp) + ";cap=" + std::to_string(cap) +
                       ";sample=" + (sample ? "1" : "0") + ";samples=" + std::to_string(samples));
  emit(common, out.dump(2) + "\n");
  return rep.in_general_position ? kExitOk : kExitCheckFailed;
}

int cmd_generate(const Common& common, const std::string& scenario, std::size_t n, std::size_t p) {
  const std::uint64_t seed = common.seed.value_or(0);
  std::string body;
  if (scenario == "gaussian") {
    body = csv_of(pcs::fixtures::general_position_sample(n, p, seed).rows());
  } else if (scenario == "cluster") {
    body = csv_of(pcs::fixtures::distant_cluster(seed).data.rows());
  } else if (scenario == "collinear") {
    if (n < 5) throw pcs::Error(pcs::ErrorKind::kValidation, "collinear scenario needs n >= 5");
    const std::size_t on_line = pcs::default_h(n, 2).h;
    body = csv_of(pcs::fixtures::collinear_majority(on_line, n - on_line, seed).data.rows());
  } else {
    throw pcs::Error(pcs::ErrorKind::kValidation, "unknown scenario '" + scenario + "'");
  }
  emit(common, body);
  return kExitOk;
}

int exit_code(pcs::ErrorKind kind) {
  switch (kind) {
    case pcs::ErrorKind::kParse: return kExitParse;
    case pcs::ErrorKind::kValidation: return kExitValidation;
    case pcs::ErrorKind::kCap: return kExitCap;
    case pcs::ErrorKind::kDegenerate: return kExitDegenerate;
  }
  return kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projection congruent subset estimation of location and scatter"};
  app.set_help_flag("--help", "print help and exit");
  app.set_version_flag("--version", std::string(pcs::kVersion));
  app.set_config("--config", "", "key=value file mirroring the long flags; flags win");
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  app.add_option("-i,--input", common.input, "CSV input (comma or whitespace separated)");
  app.add_option("--header", common.header, "auto|present|absent")->check(CLI::IsMember({"auto", "present", "absent"}));
  app.add_option("-o,--output", common.output, "artifact path, - for stdout");
  app.add_option("--seed", common.seed, "RNG seed; PCS_SEED is used when absent");
  app.add_option("--threads", common.threads, "worker threads (0 = hardware); results do not depend on it");
  app.add_flag("--allow-duplicates", common.allow_duplicates, "accept duplicate rows");
  app.add_option("--h", common.h, "subset size, default ceil((n+p+1)/2)");
  app.add_option("--mode", common.mode, "exact|randomized")->check(CLI::IsMember({"exact", "randomized"}));
  app.add_option("--n-starts", common.n_starts, "randomized starts");
  app.add_option("--n-isteps", common.n_isteps, "refinement steps per start");
  app.add_option("--k-directions", common.k_directions, "directions sampled per candidate");
  app.add_option("--subset-cap", common.subset_cap, "largest C(n,h) the exact solver accepts");
  app.add_option("--direction-cap", common.direction_cap, "largest C(h,p) enumerated per subset");
  app.add_option("--tol-dup", common.tol_dup, "relative duplicate-row tolerance");
  app.add_option("--tol-zero", common.tol_zero, "relative zero-distance tolerance");
  app.add_option("--tol-fit", common.tol_fit, "relative hyperplane residual tolerance");
  app.add_option("--tol-gp", common.tol_gp, "relative general-position volume tolerance");
  app.add_option("--cond-cap", common.cond_cap, "condition number above which a direction is singular");

  auto* fit = app.add_subcommand("fit", "fit location and scatter, write JSON");

  auto* curve = app.add_subcommand("curve", "sorted per-direction index curve(s) as CSV");
  std::vector<std::string> subsets;
  curve->add_option("--subset", subsets, "1-based rows, e.g. 1,2,5..9; repeat for a second curve")
      ->required()
      ->take_all()
      ->expected(1, 2);

  auto* breakdown = app.add_subcommand("breakdown", "contamination sweep, CSV plus JSON summary");
  BreakdownArgs bargs;
  breakdown->add_option("--n", bargs.n, "generated sample size (without --input)");
  breakdown->add_option("--p", bargs.p, "generated dimension (without --input)");
  breakdown->add_option("--data-seed", bargs.data_seed, "seed for generated data");
  breakdown->add_option("--c", bargs.c_range, "outlier counts, e.g. 0..8 or 9; default 0..n-h+1");
  breakdown->add_option("--L-grid", bargs.L_grid, "comma separated distances");
  breakdown->add_option("--contam-geometry", bargs.geometry, "point-mass|point-mass-jitter")
      ->check(CLI::IsMember({"point-mass", "point-mass-jitter"}));
  breakdown->add_option("--growth", bargs.growth, "bias growth per L step that counts as divergence");
  breakdown->add_option("--summary", bargs.summary, "write the JSON summary here");

  auto* equivariance = app.add_subcommand("equivariance", "affine equivariance trials");
  std::size_t trials = 1;
  double max_condition = 1e4;
  double rel_tol = 1e-8;
  equivariance->add_option("--trials", trials, "number of random (B, b)");
  equivariance->add_option("--max-condition", max_condition, "condition cap for B");
  equivariance->add_option("--rel-tol", rel_tol, "relative tolerance");

  auto* gp = app.add_subcommand("gp-check", "general position check");
  std::uint64_t gp_cap = 1'000'000;
  bool gp_sample = false;
  std::uint64_t gp_samples = 100'000;
  gp->add_option("--cap", gp_cap, "largest C(n,p+1) checked exhaustively");
  gp->add_flag("--sample", gp_sample, "sample subsets past the cap instead of failing");
  gp->add_option("--samples", gp_samples, "number of sampled subsets");

  auto* generate = app.add_subcommand("generate", "write a synthetic dataset as CSV");
  std::string scenario = "gaussian";
  std::size_t gen_n = 20;
  std::size_t gen_p = 2;
  generate->add_option("--scenario", scenario, "gaussian|cluster|collinear")
      ->check(CLI::IsMember({"gaussian", "cluster", "collinear"}));
  generate->add_option("--n", gen_n, "rows (cluster scenario is fixed at 100)");
  generate->add_option("--p", gen_p, "columns (gaussian only)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    resolve_seed(common);
    if (*fit) return cmd_fit(common);
    if (*curve) return cmd_curve(common, subsets);
    if (*breakdown) return cmd_breakdown(common, bargs);
    if (*equivariance) return cmd_equivariance(common, trials, max_condition, rel_tol);
    if (*gp) return cmd_gp_check(common, gp_cap, gp_sample, gp_samples);
    if (*generate) return cmd_generate(common, scenario, gen_n, gen_p);
  } catch (const pcs::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitParse;
}
