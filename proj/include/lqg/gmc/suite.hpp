#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lqg/common/report.hpp"

namespace lqg::gmc {

struct LbmConfig {
  std::size_t n = 1024;
  std::size_t n_coarse = 512;  // resolution-stability comparison

  std::size_t volume_fields = 20, volume_centers = 5, volume_radii = 11;

  std::size_t exit_fields = 10, exit_walks = 1000, exit_radii = 7;
  double exit_decade_top = 0.25;  // top radius as a fraction of the center's eccentricity

  std::size_t heat_fields = 10, heat_walks = 4000, heat_times = 7;
  double heat_decades = 1.5;
  double heat_window = 0.01;  // t_max as a fraction of the pre-mixing proxy
  double heat_bin_fraction = 1.0 / 3;
  std::size_t heat_levels = 6, heat_targets_per_level = 2;

  bool exponential_holding = true;
  std::uint64_t seed = 1;
  unsigned workers = 1;

  void validate() const;
};

struct LbmResult {
  std::vector<EstimateReport> reports;
  // One row per fitted point: environment (0 = chaos, 1 = flat), lattice
  // size, field index, log abscissa, log ordinate.
  CsvTable points{{"flat", "n", "field", "log_x", "log_y"}};

  const EstimateReport& report(const std::string& name) const;
};

/// mu-mass of LFPP balls against radius over the middle decade between the
/// median edge length and half the eccentricity.
LbmResult lbm_volume_suite(const LbmConfig& config);

/// Mean Liouville exit time from LFPP balls over the decade ending at
/// exit_decade_top times the eccentricity.
LbmResult lbm_exit_suite(const LbmConfig& config);

/// On-diagonal heat-kernel decay and the off-diagonal stretch exponent inside
/// the pre-mixing window.
LbmResult lbm_heat_kernel_suite(const LbmConfig& config);

}  // namespace lqg::gmc
