#pragma once

#include <span>
#include <vector>

#include "lqg/common/stats.hpp"
#include "lqg/levy/stable.hpp"

namespace lqg::levy {

struct ExcursionRecord {
  double ladder_index;  // local time (running supremum) at the start
  double height;
  double duration;
};

/// Excursions of the reflected process S - X away from 0 for a downward-jumping
/// path, indexed by the running supremum S, which is continuous and serves as
/// local time at 0.
std::vector<ExcursionRecord> excursions(const LevyPath& path);

struct ExcursionLaw {
  std::vector<double> thresholds;
  std::vector<double> counts;          // N(height > s)
  std::vector<double> rate;            // counts per unit local time
  double local_time = 0;
  std::size_t n_excursions = 0;
  stats::LinearFit fit;                // log rate against log s
  bool inconclusive = false;
};

/// Height tail per unit local time. `min_count` excursions above a threshold
/// are needed for it to enter the fit.
ExcursionLaw excursion_height_law(const LevyPath& path, std::span<const double> thresholds,
                                  double min_count = 10);
/// Pool the counts of several paths.
ExcursionLaw excursion_height_law(std::span<const LevyPath> paths, std::span<const double> thresholds,
                                  double min_count = 10);

/// Brownian-disk area densities at boundary length ell:
/// weighted ell (2 pi a^3)^{-1/2} e^{-ell^2/2a}, unweighted ell^3 (2 pi a^5)^{-1/2} e^{-ell^2/2a}.
double disk_area_density(double ell, double a, bool weighted);

}  // namespace lqg::levy
