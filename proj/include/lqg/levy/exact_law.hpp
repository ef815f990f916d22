#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lqg/common/report.hpp"

namespace lqg::levy {

struct ExactLawConfig {
  double c = 1;
  std::vector<double> y0 = {0.5, 1, 2};
  std::vector<double> survival_t = {0.5, 1, 2};
  std::vector<double> laplace_t = {0.5, 1};
  std::vector<double> laplace_lambda = {0.5, 2};
  std::size_t n_paths = 100000;  // per starting mass, shared by every (t, lambda)
  std::size_t roundtrip_seeds = 100;
  double roundtrip_horizon = 4, roundtrip_dt = 1e-3;
  std::uint64_t seed = 1;
  unsigned workers = 1;

  void validate() const;
};

struct ExactLawResult {
  std::vector<EstimateReport> reports;
  CsvTable table{{"kind", "y0", "t", "lambda", "estimate", "stderr", "exact", "z"}};  // kind 0 survival, 1 Laplace

  const EstimateReport& report(const std::string& name) const;
};

/// CSBP survival probabilities and Laplace transforms against the closed
/// forms, from one set of paths per starting mass.
ExactLawResult csbp_exact_law(const ExactLawConfig& config, bool survival = true, bool laplace = true);

/// Worst |lamperti_to_levy(lamperti_to_csbp(X)) - X| / y0 over seeded paths.
EstimateReport lamperti_roundtrip(const ExactLawConfig& config);

}  // namespace lqg::levy
