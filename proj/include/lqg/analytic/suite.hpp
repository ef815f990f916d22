#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lqg/common/report.hpp"

namespace lqg::analytic {

struct ScaleSuiteConfig {
  std::vector<double> betas = {2, 3, 4};
  std::vector<double> kappas = {0.25, 1};
  double grid_lo = 1e-4, grid_hi = 1e4;
  std::size_t grid_points = 9;  // per axis, for both r and t
  double epsilon_h = 1e-2;

  std::vector<double> poisson_lambdas = {5, 50, 500};
  std::vector<double> poisson_ratios = {0.5, 2};
  std::size_t poisson_samples = 1000000;

  std::vector<std::size_t> cramer_n = {50, 100, 200};
  std::size_t cramer_trials = 100000;
  double cramer_mean = -1.5, cramer_sd = 0.5;

  std::uint64_t seed = 1;
  unsigned workers = 1;

  void validate() const;
};

struct ScaleSuiteResult {
  std::vector<EstimateReport> reports;
  CsvTable phi{{"beta", "kappa", "r", "t", "phi_numeric", "phi0_closed", "relative_error", "lemma_ratio"}};

  const EstimateReport& report(const std::string& name) const;
};

/// Phi_kappa on the (r, t) grid: relative error against the closed form at
/// kappa = 0 and, for kappa > 0, the ratio to the power-law lower bound.
ScaleSuiteResult phi_table(const ScaleSuiteConfig& config);

/// phi_table plus Monte-Carlo checks of the Poisson and Cramer bounds.
ScaleSuiteResult scale_function_suite(const ScaleSuiteConfig& config);

}  // namespace lqg::analytic
