#pragma once

#include <cstdint>
#include <vector>

#include "lqg/common/report.hpp"
#include "lqg/levy/stable.hpp"

namespace lqg::levy {

/// 3/2-stable CSBP sample path. The knots (theta_i, y_i) are the Lamperti
/// images of the driving Levy samples; between two positive knots Y is the
/// image of the linear Levy interpolant (geometric in theta), and the last
/// segment into an extinction is the creeping profile (quadratic in theta).
struct CsbpPath {
  double y0 = 0.0;
  double c = 1.0;
  double dt = 0.0;                  // step of the uniform output grid
  std::vector<double> values;       // Y at i dt
  double extinction_time = kNever;  // first hit of 0
  std::vector<double> knot_time, knot_value;

  double horizon() const { return dt * static_cast<double>(values.empty() ? 0 : values.size() - 1); }
  /// Y at CSBP time theta from the knot interpolant.
  double value_at(double theta) const;
};

/// Time-change a Levy path started at y0 > 0 by theta(s) = int_0^s du / X_u,
/// absorbing at the first grid value <= 0. The output grid has step dt_out
/// and covers [0, theta_horizon] (theta_horizon <= 0 means up to the end).
CsbpPath lamperti_to_csbp(const LevyPath& path, double c, double dt_out, double theta_horizon = 0.0);

/// Inverse clock s(theta) = int_0^theta Y; returns the Levy path on a grid of step dt.
LevyPath lamperti_to_levy(const CsbpPath& path, double dt);

struct CsbpScheme {
  double eta = 0.05;    // increment scale per step relative to the current mass
  double dtheta_max = 2.5e-4;  // cap on the CSBP-time length of a step, relative to the mass
  double floor = 1e-8;       // below floor * y0 the extinction time is drawn from its exact law
};

/// CSBP with u_t(lambda) = (lambda^{-1/2} + c t)^{-2}: the Lamperti image of the
/// upward-jumping driver run at rate 2c, sampled with mass-adapted steps.
CsbpPath sample_csbp(double y0, double c, double horizon, double dt_out, std::uint64_t seed,
                     std::uint64_t stream, const CsbpScheme& scheme = {});

double csbp_survival_exact(double y0, double c, double alpha, double t);

/// exp(-y0 u_t(lambda)) with u_t(lambda) = (lambda^{1-alpha} + c t)^{1/(1-alpha)}.
double csbp_laplace_exact(double y0, double c, double alpha, double t, double lambda);

EstimateReport csbp_laplace_check(double y0, double c, double alpha, double t, double lambda,
                                  std::size_t n_samples, std::uint64_t seed, unsigned workers = 1,
                                  const CsbpScheme& scheme = {});

EstimateReport csbp_survival_check(double y0, double c, double t, std::size_t n_samples,
                                   std::uint64_t seed, unsigned workers = 1,
                                   const CsbpScheme& scheme = {});

}  // namespace lqg::levy
