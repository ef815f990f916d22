#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lqg/bmap/contour.hpp"
#include "lqg/common/report.hpp"

namespace lqg::bmap {

struct BallVolumeConfig {
  std::size_t n = 1 << 16;         // contour steps are 2n
  std::size_t n_coarse = 1 << 14;  // resolution-stability comparison
  std::size_t maps = 20;
  std::size_t centers = 4;         // random landmark centers per map
  std::size_t landmarks = 512;
  double r_lo = 0.05, r_hi = 0.4;  // fit window as fractions of the diameter
  std::size_t radii = 12;
  std::size_t triples = 10000;     // random triples for the m_X triangle check
  ContourVariant variant = ContourVariant::dyck;
  std::uint64_t seed = 1;
  unsigned workers = 1;

  void validate() const;
};

struct BallVolumeResult {
  std::vector<EstimateReport> reports;
  CsvTable curve{{"n", "r_over_diameter", "mean_fraction"}};

  const EstimateReport& report(const std::string& name) const;
};

/// Ball-volume exponent at two resolutions, the m-refinement delta, the
/// pseudometric axioms and the root-distance identity on every sampled map.
BallVolumeResult ball_volume_suite(const BallVolumeConfig& config);

}  // namespace lqg::bmap
