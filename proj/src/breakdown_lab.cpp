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

#include "pcs/breakdown_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pcs/error.hpp"
#include "pcs/parallel.hpp"
#include "pcs/rng.hpp"

namespace pcs {
namespace {

Vector random_unit(Rng& rng, std::size_t p) {
  Vector u(static_cast<Eigen::Index>(p));
  do {
    for (Eigen::Index k = 0; k < u.size(); ++k) u(k) = rng.normal();
  } while (u.norm() == 0.0);
  return u / u.norm();
}

double max_row_norm(const Dataset& data, const HSubset& subset) {
  double best = 0.0;
  for (std::size_t i : subset.rows()) best = std::max(best, data.row(i).norm());
  return best;
}

bool grows(const std::vector<double>& values, double threshold, double floor) {
  if (values.size() < 2) return false;
  for (std::size_t k = 0; k + 1 < values.size(); ++k) {
    if (std::isinf(values[k + 1])) continue;
    if (!(values[k + 1] > floor) || values[k + 1] < threshold * values[k]) return false;
  }
  return true;
}

}  // namespace

std::string to_string(Placement placement) {
  switch (placement) {
    case Placement::kPointMass:
      return "point-mass";
    case Placement::kPointMassJitter:
      return "point-mass-jitter";
    case Placement::kCustom:
      return "custom";
  }
  return "unknown";
}

Placement parse_placement(const std::string& text) {
  if (text == "point-mass") return Placement::kPointMass;
  if (text == "point-mass-jitter" || text == "point-mass-with-jitter") {
    return Placement::kPointMassJitter;
  }
  if (text == "custom") return Placement::kCustom;
  throw Error(ErrorKind::kValidation, "unknown placement '" + text + "'");
}

Dataset contaminate(const Dataset& data, const ContaminationSpec& spec, std::uint64_t seed) {
  const std::size_t n = data.n();
  const std::size_t p = data.p();
  if (spec.c >= n) throw Error(ErrorKind::kValidation, "contamination count c must be < n");
  if (spec.c == 0) return data;
  if (!(spec.L > 0.0) && spec.placement != Placement::kCustom) {
    throw Error(ErrorKind::kValidation, "contamination distance L must be > 0");
  }
  const std::size_t g = n - spec.c;
  Matrix rows = data.rows();
  Rng rng(seed, 0x636f6e74ULL);

  if (spec.placement == Placement::kCustom) {
    if (static_cast<std::size_t>(spec.custom_rows.rows()) != spec.c ||
        static_cast<std::size_t>(spec.custom_rows.cols()) != p) {
      throw Error(ErrorKind::kValidation, "custom contamination rows must be c x p");
    }
    rows.bottomRows(static_cast<Eigen::Index>(spec.c)) = spec.custom_rows;
  } else {
    Vector u = spec.direction ? *spec.direction : random_unit(rng, p);
    if (static_cast<std::size_t>(u.size()) != p || u.norm() == 0.0) {
      throw Error(ErrorKind::kValidation, "contamination direction must be a nonzero p-vector");
    }
    u /= u.norm();
    // Jitter is measured against the genuine block so it does not grow with L.
    const Matrix genuine = data.rows().topRows(static_cast<Eigen::Index>(g));
    double diameter = 0.0;
    for (Eigen::Index i = 0; i < genuine.rows(); ++i) {
      for (Eigen::Index j = i + 1; j < genuine.rows(); ++j) {
        diameter = std::max(diameter, (genuine.row(i) - genuine.row(j)).norm());
      }
    }
    const double sigma = spec.jitter_scale * diameter;
    for (std::size_t i = g; i < n; ++i) {
      Vector x = spec.L * u;
      if (spec.placement == Placement::kPointMassJitter) {
        for (Eigen::Index k = 0; k < x.size(); ++k) x(k) += sigma * rng.normal();
      }
      rows.row(static_cast<Eigen::Index>(i)) = x.transpose();
    }
  }
  DatasetOptions options;
  options.genuine_rows = g;
  options.allow_duplicates = data.duplicates_allowed();
  return Dataset(std::move(rows), options);
}

double bias_location(const PcsFit& clean, const PcsFit& contaminated) {
  if (clean.location.size() != contaminated.location.size()) {
    throw Error(ErrorKind::kValidation, "bias_location: dimension mismatch");
  }
  return (contaminated.location - clean.location).norm();
}

double bias_scatter(const Eigen::MatrixXd& clean, const Eigen::MatrixXd& contaminated) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> clean_eig(clean);
  const auto& lam = clean_eig.eigenvalues();
  if (!(lam(0) > 1e-14 * lam(lam.size() - 1))) {
    throw Error(ErrorKind::kDegenerate, "bias_scatter: clean scatter is not positive definite");
  }
  const Eigen::MatrixXd inv_sqrt = clean_eig.operatorInverseSqrt();
  Eigen::MatrixXd q = inv_sqrt * contaminated * inv_sqrt;
  q = 0.5 * (q + q.transpose()).eval();
  const Eigen::VectorXd mu =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(q, Eigen::EigenvaluesOnly).eigenvalues();
  const double top = mu(mu.size() - 1);
  const double bottom = mu(0);
  if (!(bottom > 1e-14 * top)) return kInfinity;
  return std::max(1.0, top / bottom);
}

double bias_scatter(const PcsFit& clean, const PcsFit& contaminated) {
  return bias_scatter(clean.scatter, contaminated.scatter);
}

SweepResult breakdown_sweep(const Dataset& data, std::size_t h, const SweepConfig& config) {
  const std::size_t n = data.n();
  if (config.require_general_position) {
    const auto gp = check_general_position(data, config.general_position);
    if (!gp.in_general_position) {
      throw Error(ErrorKind::kValidation,
                  "breakdown_sweep: genuine data is not in general position");
    }
  }
  for (std::size_t c : config.c_range) {
    if (c >= n) throw Error(ErrorKind::kValidation, "c_range entries must be < n");
  }
  SweepResult result;
  result.clean_fit = solve(data, h, config.solver);
  result.estimate.theoretical = breakdown_bound(n, h);

  std::vector<std::size_t> cs = config.c_range;
  std::sort(cs.begin(), cs.end());
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  std::vector<double> grid = config.L_grid;
  std::sort(grid.begin(), grid.end());
  const std::size_t cells = cs.size() * grid.size();

  Rng dir_rng(config.seed, 0x646972ULL);
  const Vector direction = config.direction ? *config.direction : random_unit(dir_rng, data.p());

  SolverConfig inner = config.solver;
  if (resolve_threads(config.threads) > 1) inner.threads = 1;
  result.records.resize(cells);
  parallel_for(cells, config.threads, [&](std::size_t cell) {
    const std::size_t c = cs[cell / grid.size()];
    const double L = grid[cell % grid.size()];
    ContaminationSpec spec;
    spec.c = c;
    spec.L = L;
    spec.placement = config.placement;
    spec.direction = direction;
    spec.jitter_scale = config.jitter_scale;
    // The same seed for every L keeps the outlier pattern fixed while it moves.
    const Dataset contaminated = contaminate(data, spec, derive_seed(config.seed, c));
    const PcsFit fit = solve(contaminated, h, inner);

    BiasRecord& rec = result.records[cell];
    rec.c = c;
    rec.epsilon = static_cast<double>(c) / static_cast<double>(n);
    rec.L = L;
    rec.location_bias = bias_location(result.clean_fit, fit);
    rec.scatter_bias = bias_scatter(result.clean_fit, fit);
    for (std::size_t i : fit.h_star.rows()) {
      if (i >= n - c) ++rec.h_star_outlier_count;
    }
    rec.location_norm = fit.location.norm();
    rec.max_h_star_norm = max_row_norm(contaminated, fit.h_star);
    rec.scatter_lambda1 =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(fit.scatter, Eigen::EigenvaluesOnly)
            .eigenvalues()
            .maxCoeff();
    rec.exact_fit = fit.exact_fit.has_value();
  });

  auto& est = result.estimate;
  est.diverged_on = "none";
  est.max_tested_c = cs.empty() ? 0 : cs.back();
  const double floor = 1e-6 * (1.0 + data.diameter());
  for (std::size_t ci = 0; ci < cs.size(); ++ci) {
    std::vector<double> loc;
    std::vector<double> scat;
    bool sentinel = false;
    for (std::size_t li = 0; li < grid.size(); ++li) {
      const auto& rec = result.records[ci * grid.size() + li];
      loc.push_back(rec.location_bias);
      scat.push_back(rec.scatter_bias);
      sentinel = sentinel || std::isinf(rec.scatter_bias);
    }
    const bool loc_div = grows(loc, config.growth_threshold, floor);
    const bool scat_div = sentinel || grows(scat, config.growth_threshold, 1.0);
    if (loc_div || scat_div) {
      const std::uint64_t g = std::gcd<std::uint64_t>(cs[ci], n);
      est.empirical = Rational{cs[ci] / g, n / g};
      est.diverged_on = loc_div && scat_div ? "both" : (loc_div ? "location" : "scatter");
      break;
    }
  }
  return result;
}

EquivarianceReport equivariance_check(const Dataset& data, std::size_t h,
                                      const SolverConfig& config, const Eigen::MatrixXd& B,
                                      const Vector& b, double rel_tol) {
  const auto p = static_cast<Eigen::Index>(data.p());
  if (B.rows() != p || B.cols() != p || b.size() != p) {
    throw Error(ErrorKind::kValidation, "equivariance_check: B must be p x p and b a p-vector");
  }
  EquivarianceReport report;
  report.B = B;
  report.b = b;
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(B).singularValues();
  report.condition = sv(0) / sv(p - 1);

  Matrix transformed = data.rows() * B.transpose();
  transformed.rowwise() += b.transpose();
  DatasetOptions options;
  options.genuine_rows = data.genuine_rows();
  options.allow_duplicates = data.duplicates_allowed();
  const Dataset image(std::move(transformed), options);

  const PcsFit fx = solve(data, h, config);
  const PcsFit fy = solve(image, h, config);
  report.h_star_equal = fx.h_star == fy.h_star;
  report.location_error = (fy.location - (B * fx.location + b)).norm();
  report.location_tol = rel_tol * (1.0 + fy.location.norm());
  report.scatter_error = (fy.scatter - B * fx.scatter * B.transpose()).norm();
  report.scatter_tol = rel_tol * (1.0 + fy.scatter.norm());
  report.passed = report.h_star_equal && report.location_error <= report.location_tol &&
                  report.scatter_error <= report.scatter_tol;
  if (!report.h_star_equal) {
    report.message = "h_star differs between X and BX+b";
  } else if (!report.passed) {
    report.message = "location or scatter outside tolerance";
  }
  return report;
}

EquivarianceReport equivariance_trial(const Dataset& data, std::size_t h,
                                      const SolverConfig& config, std::uint64_t seed,
                                      double max_condition, double rel_tol) {
  const auto p = static_cast<Eigen::Index>(data.p());
  Rng rng(seed, 0x6571756976ULL);
  Eigen::MatrixXd B(p, p);
  while (true) {
    for (Eigen::Index i = 0; i < p; ++i) {
      for (Eigen::Index j = 0; j < p; ++j) B(i, j) = rng.normal();
    }
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(B).singularValues();
    if (sv(p - 1) > 0.0 && sv(0) / sv(p - 1) <= max_condition) break;
  }
  Vector b(p);
  const double spread = 1.0 + data.diameter();
  for (Eigen::Index k = 0; k < p; ++k) b(k) = spread * rng.normal();
  return equivariance_check(data, h, config, B, b, rel_tol);
}

}  // namespace pcs
