#include "lqg/analytic/suite.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "lqg/analytic/bounds.hpp"
#include "lqg/analytic/scale.hpp"
#include "lqg/common/parallel.hpp"
#include "lqg/common/rng.hpp"
#include "lqg/common/stats.hpp"

namespace lqg::analytic {

void ScaleSuiteConfig::validate() const {
  if (betas.empty() || std::any_of(betas.begin(), betas.end(), [](double b) { return !(b > 1); }))
    throw std::invalid_argument("scale suite: betas must exceed 1");
  if (std::any_of(kappas.begin(), kappas.end(), [](double k) { return !(k > 0); }))
    throw std::invalid_argument("scale suite: kappas must be positive");
  if (!(grid_lo > 0 && grid_hi > grid_lo) || grid_points < 2) throw std::invalid_argument("scale suite: bad grid");
  if (std::any_of(poisson_lambdas.begin(), poisson_lambdas.end(), [](double l) { return !(l > 0); }) ||
      std::any_of(poisson_ratios.begin(), poisson_ratios.end(), [](double a) { return !(a > 0) || a == 1; }))
    throw std::invalid_argument("scale suite: Poisson lambdas must be positive and ratios positive and != 1");
  if (poisson_samples == 0 || cramer_trials == 0 || !(cramer_sd > 0) || !(cramer_mean < 0))
    throw std::invalid_argument("scale suite: need samples, a positive sd and a negative mean");
}

const EstimateReport& ScaleSuiteResult::report(const std::string& name) const {
  for (const auto& r : reports) {
    if (r.name == name) return r;
  }
  throw std::out_of_range("no report named " + name);
}

ScaleSuiteResult phi_table(const ScaleSuiteConfig& cfg) {
  cfg.validate();
  ScaleSuiteResult out;
  const auto grid = stats::geomspace(cfg.grid_lo, cfg.grid_hi, cfg.grid_points);
  double worst = 0;
  std::size_t points = 0;
  for (double beta : cfg.betas) {
    const ScaleSpec spec = ScaleSpec::power(beta, beta, cfg.epsilon_h);
    for (double r : grid) {
      for (double t : grid) {
        const double numeric = phi_kappa_numeric(r, t, 0, spec), closed = phi0_closed(r, t, beta);
        const double err = std::abs(numeric - closed) / closed;
        worst = std::max(worst, err);
        ++points;
        out.phi.add_row({beta, 0, r, t, numeric, closed, err, numeric / closed});
      }
    }
  }
  EstimateReport e;
  e.name = "phi_kappa_max_relative_error";
  e.estimate = worst;
  e.n = points;
  e.seed = cfg.seed;
  e.params = {{"tolerance", 1e-6}, {"grid_lo", cfg.grid_lo}, {"grid_hi", cfg.grid_hi}};
  out.reports.push_back(e);

  for (double kappa : cfg.kappas) {
    double lowest = std::numeric_limits<double>::infinity();
    std::size_t below_one = 0, count = 0;
    for (double beta : cfg.betas) {
      const ScaleSpec spec = ScaleSpec::power(beta, beta, cfg.epsilon_h);
      for (double r : grid) {
        for (double t : grid) {
          const double phi0 = phi0_closed(r, t, beta);
          const double bound = phi0 * std::pow(correction_h(std::pow(t / r, beta / (beta - 1))), -kappa / (beta - 1));
          const double numeric = phi_kappa_numeric(r, t, kappa, spec);
          const double ratio = numeric / bound;
          lowest = std::min(lowest, ratio);
          if (ratio < 1 - 1e-9) ++below_one;
          ++count;
          out.phi.add_row({beta, kappa, r, t, numeric, phi0, std::abs(numeric - phi0) / phi0, ratio});
        }
      }
    }
    EstimateReport k;
    k.name = "phi_kappa_lemma_ratio_min_kappa_" + format_double(kappa);
    k.estimate = lowest;
    k.n = count;
    k.seed = cfg.seed;
    k.params = {{"kappa", kappa}, {"points_below_power_bound", below_one}};
    out.reports.push_back(k);
  }
  return out;
}

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }
double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2 * std::numbers::pi); }

EstimateReport poisson_check(double lambda, double a, std::size_t samples, std::uint64_t seed, unsigned workers) {
  constexpr std::size_t kTask = 100000;
  const std::size_t tasks = (samples + kTask - 1) / kTask;
  std::vector<std::size_t> hits(tasks, 0);
  const double level = a * lambda;
  parallel_for(tasks, workers, [&](std::size_t task) {
    RandomStream rng(seed, task);
    std::poisson_distribution<long> poisson(lambda);
    for (std::size_t i = task * kTask; i < std::min(samples, (task + 1) * kTask); ++i) {
      const auto z = static_cast<double>(poisson(rng));
      if (a < 1 ? z <= level : z >= level) ++hits[task];
    }
  });
  std::size_t total = 0;
  for (auto h : hits) total += h;
  EstimateReport r;
  r.name = "poisson_tail_lambda_" + format_double(lambda) + "_a_" + format_double(a);
  r.estimate = static_cast<double>(total) / static_cast<double>(samples);
  r.stderr_ = stats::binomial_stderr(r.estimate, samples);
  r.n = samples;
  r.seed = seed;
  r.params = {{"lambda", lambda}, {"a", a}, {"bound", poisson_tail_bound(lambda, a)}};
  return r;
}

EstimateReport cramer_check(const ScaleSuiteConfig& cfg, std::size_t n, std::uint64_t seed) {
  const double mu = cfg.cramer_mean, sd = cfg.cramer_sd;
  // Exact moments of Y = mu + sd Z entering the lemma's hypotheses.
  const double c = -mu / sd;
  const double K = normal_cdf(c) + std::exp(mu + 0.5 * sd * sd) * normal_cdf((mu + sd * sd) / sd);
  const double M = mu * mu * normal_cdf(c) - 2 * mu * sd * normal_pdf(c) + sd * sd * (normal_cdf(c) - c * normal_pdf(c));
  const CramerInput input{1, -mu, K, M, 2};
  const double rate = cramer_rate(input);
  const double bound = std::exp(-input.delta * rate * static_cast<double>(n) / 8);
  const double level = -input.delta * static_cast<double>(n) / 4;
  constexpr std::size_t kTask = 10000;
  const std::size_t tasks = (cfg.cramer_trials + kTask - 1) / kTask;
  std::vector<std::size_t> hits(tasks, 0);
  parallel_for(tasks, cfg.workers, [&](std::size_t task) {
    RandomStream rng(seed, task);
    for (std::size_t i = task * kTask; i < std::min(cfg.cramer_trials, (task + 1) * kTask); ++i) {
      double sum = 0;
      for (std::size_t j = 0; j < n; ++j) sum += mu + sd * rng.normal();
      if (sum >= level) ++hits[task];
    }
  });
  std::size_t total = 0;
  for (auto h : hits) total += h;
  EstimateReport r;
  r.name = "cramer_sum_tail_n_" + std::to_string(n);
  r.estimate = static_cast<double>(total) / static_cast<double>(cfg.cramer_trials);
  r.stderr_ = stats::binomial_stderr(r.estimate, cfg.cramer_trials);
  r.n = cfg.cramer_trials;
  r.seed = seed;
  r.params = {{"n", n}, {"bound", bound}, {"rate", rate}, {"K", K}, {"M", M}, {"delta", input.delta}};
  return r;
}

}  // namespace

ScaleSuiteResult scale_function_suite(const ScaleSuiteConfig& cfg) {
  ScaleSuiteResult out = phi_table(cfg);
  for (std::size_t i = 0; i < cfg.poisson_lambdas.size(); ++i) {
    for (std::size_t j = 0; j < cfg.poisson_ratios.size(); ++j) {
      const std::uint64_t seed = derive_seed(cfg.seed, 0x706f6900 + i * cfg.poisson_ratios.size() + j);
      out.reports.push_back(poisson_check(cfg.poisson_lambdas[i], cfg.poisson_ratios[j], cfg.poisson_samples, seed, cfg.workers));
    }
  }
  for (std::size_t n : cfg.cramer_n) out.reports.push_back(cramer_check(cfg, n, derive_seed(cfg.seed, 0x63726d00 + n)));
  return out;
}

}  // namespace lqg::analytic
