#include "lqg/analytic/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lqg::analytic {

double EnvelopeParams::kappa_du_prime(const ScaleSpec& spec) const {
  const double ku = kappa_u(spec.beta);
  if (spec.epsilon_h * ku >= 1) throw std::domain_error("envelope: epsilon_h * kappa_u must be < 1");
  return (kappa_du + ku * spec.alpha / spec.beta) / (1 - spec.epsilon_h * ku);
}

double EnvelopeParams::kappa_dl(const ScaleSpec& spec) const {
  return kappa_vu + kappa_u(spec.beta) * spec.alpha / spec.beta;
}

double uhk_envelope(double t, double d, const ScaleSpec& spec, const EnvelopeParams& p) {
  if (!(t > 0) || !(d >= 0)) throw std::domain_error("uhk_envelope: need t > 0, d >= 0");
  spec.validate();
  const double beta = spec.beta;
  const double prefactor = p.C1 * std::pow(t, -spec.alpha / beta) *
                           std::pow(std::log(std::numbers::e + 1 / t), p.kappa_du_prime(spec));
  const double stretch = std::pow(std::pow(d, beta) / t, 1 / (beta - 1)) *
                         std::pow(std::log(std::numbers::e + d / t), -p.kappa_u(beta) / (beta - 1));
  return prefactor * std::exp(-p.C2 * stretch);
}

double ondiag_lower_envelope(double t, const ScaleSpec& spec, const EnvelopeParams& p) {
  if (!(t > 0)) throw std::domain_error("ondiag_lower_envelope: need t > 0");
  spec.validate();
  return p.C3 * std::pow(t, -spec.alpha / spec.beta) *
         std::pow(std::log(std::numbers::e + 1 / t), -p.kappa_dl(spec));
}

double poisson_tail_bound(double lambda, double a) {
  if (!(lambda > 0)) throw std::domain_error("poisson_tail_bound: lambda must be positive");
  if (!(a > 0) || a == 1) throw std::domain_error("poisson_tail_bound: need a > 0, a != 1");
  return std::exp(lambda * (a - a * std::log(a) - 1));
}

double cramer_rate(const CramerInput& c) {
  if (!(c.beta_exp > 0 && c.delta > 0 && c.K > 0 && c.M > 0 && c.p > 1)) {
    throw std::domain_error("cramer_rate: need positive constants and p > 1");
  }
  const double a = std::pow(2 * c.M / c.delta, 1 / (c.p - 1));
  const double rate = c.delta * c.beta_exp * c.beta_exp / (8 * c.K) * std::exp(-2 * c.beta_exp * a - c.K);
  return std::min(rate, c.beta_exp);
}

}  // namespace lqg::analytic
