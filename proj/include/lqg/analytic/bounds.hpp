#pragma once

#include "lqg/analytic/scale.hpp"

namespace lqg::analytic {

struct EnvelopeParams {
  double kappa_du = 0, kappa_el = 0, kappa_eu = 0, kappa_vu = 0;
  double C1 = 1, C2 = 1, C3 = 1;

  double kappa_u(double beta) const { return (2 + beta) * (kappa_el + kappa_eu); }
  double kappa_du_prime(const ScaleSpec& spec) const;
  double kappa_dl(const ScaleSpec& spec) const;
};

/// Off-diagonal sub-Gaussian upper envelope for p_t(x, y) at d = d(x, y).
double uhk_envelope(double t, double d, const ScaleSpec& spec, const EnvelopeParams& p);

/// On-diagonal lower envelope for p_t(x, x).
double ondiag_lower_envelope(double t, const ScaleSpec& spec, const EnvelopeParams& p);

/// exp(lambda (a - a log a - 1)); bounds P[N <= a lambda] for a < 1 and
/// P[N >= a lambda] for a > 1, N ~ Poisson(lambda).
double poisson_tail_bound(double lambda, double a);

struct CramerInput {
  double beta_exp = 1, delta = 1, K = 1, M = 1, p = 2;
};

/// Explicit large-deviation rate: min((delta beta^2 / 8K) e^{-2 beta a - K}, beta)
/// with a = (2M/delta)^{1/(p-1)}.
double cramer_rate(const CramerInput& c);

}  // namespace lqg::analytic
