#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "lqg/analytic/bounds.hpp"
#include "lqg/analytic/scale.hpp"

using namespace lqg::analytic;

namespace {

// Independent oracle: dense scan of the Phi objective in log s around the
// power-law maximiser, no refinement.
double phi_scan(double r, double t, double kappa, double beta) {
  const double s_star = std::pow(beta * t / r, beta / (beta - 1));
  double best = 0;
  for (int k = -200000; k <= 200000; ++k) {
    const double s = s_star * std::pow(10.0, k * 2e-5);
    const double v = r / std::pow(s * std::pow(std::log(std::numbers::e + 1 / s), kappa), 1 / beta) - t / s;
    best = std::max(best, v);
  }
  return best;
}

}  // namespace

TEST_CASE("correction function h") {
  CHECK(correction_h(INFINITY) == 1.0);
  CHECK(correction_h(1.0) == doctest::Approx(1.3132616875).epsilon(1e-9));
  CHECK(correction_h(0.1) > correction_h(1.0));
  CHECK(correction_h(1.0) > correction_h(10.0));
  CHECK_THROWS_AS(correction_h(0.0), std::domain_error);
  CHECK_THROWS_AS(correction_h(-1.0), std::domain_error);
}

TEST_CASE("h regularity constant bounds h(s)/h(t) on a grid") {
  const ScaleSpec spec = ScaleSpec::power(4, 4, 1e-2);
  CHECK(spec.C_h() == doctest::Approx(2 + std::exp(-1.0) / 1e-2));
  for (int i = -40; i <= 40; ++i) {
    for (int j = i; j <= 40; ++j) {
      const double s = std::pow(10.0, i * 0.25), t = std::pow(10.0, j * 0.25);
      CHECK(correction_h(s) / correction_h(t) <= spec.C_h() * std::pow(t / s, spec.epsilon_h));
    }
  }
}

TEST_CASE("phi0 closed form") {
  CHECK(phi0_closed(0, 1, 4) == 0.0);
  CHECK(phi0_closed(1, 1, 4) == doctest::Approx(3 * std::pow(4.0, -4.0 / 3)).epsilon(1e-14));
  CHECK(phi0_closed(1, 1, 4) == doctest::Approx(0.4724703).epsilon(1e-6));
  CHECK(phi0_closed(2, 1, 2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(phi0_closed(1, 0, 4), std::domain_error);
  CHECK_THROWS_AS(phi0_closed(1, 1, 1), std::domain_error);
}

TEST_CASE("phi_kappa numeric matches the closed form on the power grid") {
  double worst = 0;
  for (const double beta : {2.0, 3.0, 4.0}) {
    const ScaleSpec spec = ScaleSpec::power(beta, beta);
    for (int i = -4; i <= 4; ++i) {
      for (int j = -4; j <= 4; ++j) {
        const double r = std::pow(10.0, i), t = std::pow(10.0, j);
        const double exact = phi0_closed(r, t, beta);
        worst = std::max(worst, std::abs(phi_kappa_numeric(r, t, 0, spec) / exact - 1));
      }
    }
  }
  CHECK(worst <= 1e-6);
  const ScaleSpec s4 = ScaleSpec::power(4, 4);
  CHECK(phi_kappa_numeric(0, 1, 0.5, s4) == 0.0);
  CHECK(phi_kappa_numeric(1, 1, 1, s4) <= phi_kappa_numeric(1, 1, 0, s4));
}

TEST_CASE("phi_kappa with kappa > 0 agrees with a dense scan and dominates point values") {
  const ScaleSpec spec = ScaleSpec::power(4, 4);
  for (const double kappa : {0.25, 1.0}) {
    for (const double r : {1e-3, 1.0, 1e3}) {
      for (const double t : {1e-3, 1.0, 1e3}) {
        const double v = phi_kappa_numeric(r, t, kappa, spec);
        CHECK(v == doctest::Approx(phi_scan(r, t, kappa, 4)).epsilon(1e-7));
        for (const double s : {1e-6, 1e-2, 1.0, 1e2, 1e6}) {
          const double point = r / spec.psi.inverse(s * std::pow(correction_h(s), kappa)) - t / s;
          CHECK(v >= point);
        }
        // Power-case lower bound through Phi_0.
        const double h = correction_h(std::pow(t / r, 4.0 / 3));
        CHECK(v >= phi0_closed(r, t, 4) * std::pow(h, -kappa / 3) * (1 - 1e-9));
      }
    }
  }
}

TEST_CASE("phi_kappa is monotone in r and t") {
  const ScaleSpec spec = ScaleSpec::power(4, 4);
  double prev = 0;
  for (int i = -8; i <= 8; ++i) {
    const double v = phi_kappa_numeric(std::pow(10.0, i * 0.5), 1, 0.5, spec);
    CHECK(v >= prev);
    prev = v;
  }
  prev = INFINITY;
  for (int j = -8; j <= 8; ++j) {
    const double v = phi_kappa_numeric(1, std::pow(10.0, j * 0.5), 0.5, spec);
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("tabulated scale function reproduces the power law") {
  std::vector<double> s, psi;
  for (int k = -6; k <= 6; ++k) {
    s.push_back(std::pow(10.0, k));
    psi.push_back(std::pow(10.0, 3 * k));
  }
  ScaleSpec spec = ScaleSpec::power(3, 3);
  spec.psi = ScaleFunction::tabulated(s, psi);
  CHECK(spec.psi(2.0) == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(spec.psi.inverse(1e30) == doctest::Approx(1e10).epsilon(1e-10));
  CHECK(phi_kappa_numeric(1, 1, 0, spec) == doctest::Approx(phi0_closed(1, 1, 3)).epsilon(1e-6));
  CHECK_THROWS(ScaleFunction::tabulated({1, 2}, {2, 1}));
}

TEST_CASE("psi_kappa inverse") {
  const ScaleSpec spec = ScaleSpec::power(4, 4);
  CHECK(psi_kappa_inverse(1, 0, spec) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(psi_kappa_inverse(16, 0, spec) == doctest::Approx(4.0).epsilon(1e-12));
  double prev = 0, min_ratio = INFINITY;
  for (int j = -24; j <= 24; ++j) {
    const double t = std::pow(10.0, j * 0.25);
    const double v = psi_kappa_inverse(t, 0.5, spec);
    CHECK(v > prev);
    prev = v;
    const double ratio = spec.psi.inverse(t * std::pow(correction_h(t), 0.5)) / v;
    CHECK(ratio <= 1.0);
    min_ratio = std::min(min_ratio, ratio);
  }
  CHECK(min_ratio > 0.0);
  CHECK_THROWS_AS(psi_kappa_inverse(1, 100, spec), std::domain_error);
}

TEST_CASE("heat kernel envelopes") {
  const ScaleSpec spec = ScaleSpec::power(4, 4);
  EnvelopeParams p;
  CHECK(uhk_envelope(1, 0, spec, p) == doctest::Approx(1.0).epsilon(1e-15));
  // beta = 4: exp argument is (d^4/t)^{1/3}; doubling d multiplies it by 2^{4/3}.
  const double e1 = -std::log(uhk_envelope(1, 3, spec, p));
  const double e2 = -std::log(uhk_envelope(1, 6, spec, p));
  CHECK(e1 == doctest::Approx(std::pow(81.0, 1.0 / 3)).epsilon(1e-12));
  CHECK(e2 / e1 == doctest::Approx(std::pow(2.0, 4.0 / 3)).epsilon(1e-12));

  CHECK(ondiag_lower_envelope(1, spec, p) == doctest::Approx(1.0));
  CHECK(ondiag_lower_envelope(0.01, spec, p) == doctest::Approx(100.0).epsilon(1e-12));
  EnvelopeParams q;
  q.kappa_vu = 1;
  CHECK(ondiag_lower_envelope(0.01, spec, q) == doctest::Approx(100 / std::log(std::numbers::e + 100)).epsilon(1e-12));
  CHECK(ondiag_lower_envelope(0.01, spec, q) == doctest::Approx(21.57).epsilon(1e-3));

  EnvelopeParams bad;
  bad.kappa_el = 20;  // kappa_u = 120, epsilon_h kappa_u > 1
  CHECK_THROWS_AS(uhk_envelope(1, 1, spec, bad), std::domain_error);
  EnvelopeParams k;
  k.kappa_el = 1;
  k.kappa_du = 0.5;
  CHECK(k.kappa_u(4) == 6.0);
  CHECK(k.kappa_du_prime(spec) == doctest::Approx((0.5 + 6.0) / (1 - 0.06)));
}

TEST_CASE("Poisson and Cramer bounds") {
  CHECK(poisson_tail_bound(10, 0.5) == doctest::Approx(std::exp(10 * (0.5 + 0.5 * std::log(2.0) - 1))).epsilon(1e-14));
  CHECK(poisson_tail_bound(10, 0.5) == doctest::Approx(0.21558).epsilon(1e-4));
  CHECK(poisson_tail_bound(10, 1 + 1e-9) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(poisson_tail_bound(10, 2.0) < 1.0);
  CHECK_THROWS_AS(poisson_tail_bound(10, 1.0), std::domain_error);
  CHECK_THROWS_AS(poisson_tail_bound(10, 0.0), std::domain_error);

  const CramerInput c{1, 1, std::numbers::e, 1, 2};
  CHECK(cramer_rate(c) == doctest::Approx(std::exp(-5 - std::numbers::e) / 8).epsilon(1e-13));
  CHECK(cramer_rate(c) == doctest::Approx(5.56e-5).epsilon(2e-3));
  CHECK(cramer_rate({5, 100, 1e-3, 1e-6, 3}) <= 5.0);
  CHECK_THROWS_AS(cramer_rate({1, 1, 1, 1, 1}), std::domain_error);
}
