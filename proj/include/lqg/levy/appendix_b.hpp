#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lqg/common/report.hpp"

namespace lqg::levy {

struct AppendixBConfig {
  std::size_t n_pairs = 100000;
  double dt = 0.01;
  double horizon = 256;  // censoring time for the return times
  std::vector<double> A_values = {4, 16, 64, 256};
  std::vector<double> A_reflection = {1, 4, 16, 64};
  double tail_lo = 2, tail_hi = 100;
  std::size_t tail_points = 20;
  double p_moment = 1.25;
  std::size_t n_overshoot = 100000;
  double overshoot_lo = 1, overshoot_hi = 16;
  std::size_t n_reflected = 1000000;
  double reflected_lo = 2, reflected_hi = 8;
  std::size_t reflected_points = 25;
  double joint_gap = 4;
  std::vector<double> joint_y = {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5,
                                 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95, 1.0};
  std::size_t min_hits = 100;
  std::size_t min_tail_points = 10;
  std::uint64_t seed = 1;
  unsigned workers = 1;

  void validate() const;
};

struct AppendixBResult {
  std::vector<EstimateReport> reports;
  std::map<std::string, CsvTable> curves;

  const EstimateReport& report(const std::string& name) const;
};

AppendixBResult appendix_b_estimators(const AppendixBConfig& config);

}  // namespace lqg::levy
