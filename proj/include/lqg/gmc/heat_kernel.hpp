#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lqg/common/stats.hpp"
#include "lqg/gmc/field.hpp"

namespace lqg::gmc {

/// Binned Monte-Carlo heat kernel p_t(source, y) = P[X_t in bin_t(y)] / mu(bin_t(y))
/// with bin_t(y) a b x b block centred at y. Indexed [time][target].
struct HeatKernelEstimate {
  std::vector<double> times;
  std::vector<std::size_t> targets;  // targets[0] is the source
  std::vector<double> distance;      // metric distance of each target from the source
  std::vector<std::vector<double>> bin_mass;
  std::vector<std::vector<std::size_t>> bin_side;
  std::vector<std::vector<double>> p, stderr_, hits;
  std::size_t walks = 0;
  std::size_t dropped = 0;  // (time, target) bins below min_hits
  bool inconclusive = false;

  bool kept(std::size_t t, std::size_t y) const { return hits[t][y] >= min_hits; }
  double min_hits = 50;
};

struct HeatKernelOptions {
  std::size_t bin = 4;
  /// When positive, the bins used at time t grow from side `bin` until their
  /// mass reaches bin_fraction * t, so each covers a fixed share of the mass
  /// the walk has explored.
  double bin_fraction = 0;
  double min_hits = 50;
  bool exponential_holding = true;
  unsigned workers = 1;
};

HeatKernelEstimate heat_kernel_profile(const LatticeField& field, const GmcMeasure& measure, std::size_t source,
                                       std::span<const std::size_t> targets, std::span<const double> distance,
                                       std::span<const double> times, std::size_t n_walks, std::uint64_t seed,
                                       const HeatKernelOptions& options = {});

/// Slope of log p_t(x, x) against log t over the kept bins.
stats::LinearFit on_diagonal_fit(const HeatKernelEstimate& est);

struct StretchFit {
  double exponent = 0, stderr_ = 0;
  double C = 0;  // on-diagonal constant, mean of t p_t(x, x)
  std::size_t points = 0;
  bool inconclusive = false;
};

/// Fit s in log(-log(p t / C)) = a + s log(d^4 / t) over off-diagonal bins.
StretchFit stretch_exponent_fit(const HeatKernelEstimate& est);

/// Cover-time proxy: Liouville time at which the entropy of the walk's
/// occupation over a partition x partition grid of blocks reaches `level`
/// times the entropy of mu over the same blocks.
double premixing_time(const LatticeField& field, const GmcMeasure& measure, std::size_t start, std::uint64_t seed,
                      std::size_t partition = 16, double level = 0.95);

}  // namespace lqg::gmc
