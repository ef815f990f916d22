#include "lqg/levy/exact_law.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lqg/common/parallel.hpp"
#include "lqg/common/rng.hpp"
#include "lqg/common/stats.hpp"
#include "lqg/levy/csbp.hpp"
#include "lqg/levy/stable.hpp"

namespace lqg::levy {

void ExactLawConfig::validate() const {
  auto positive = [](const std::vector<double>& v) {
    return !v.empty() && std::all_of(v.begin(), v.end(), [](double x) { return x > 0; });
  };
  if (!(c > 0)) throw std::invalid_argument("exact-law: c must be positive");
  if (!positive(y0) || !positive(survival_t) || !positive(laplace_t) || !positive(laplace_lambda))
    throw std::invalid_argument("exact-law: y0, times and lambdas must be non-empty and positive");
  if (n_paths < 2 || roundtrip_seeds == 0) throw std::invalid_argument("exact-law: need paths and seeds");
  if (!(roundtrip_horizon > 0 && roundtrip_dt > 0)) throw std::invalid_argument("exact-law: bad round-trip grid");
}

const EstimateReport& ExactLawResult::report(const std::string& name) const {
  for (const auto& r : reports) {
    if (r.name == name) return r;
  }
  throw std::out_of_range("no report named " + name);
}

ExactLawResult csbp_exact_law(const ExactLawConfig& cfg, bool survival, bool laplace) {
  cfg.validate();
  ExactLawResult out;
  std::vector<double> times;
  if (survival) times.insert(times.end(), cfg.survival_t.begin(), cfg.survival_t.end());
  if (laplace) times.insert(times.end(), cfg.laplace_t.begin(), cfg.laplace_t.end());
  const double horizon = *std::max_element(times.begin(), times.end());
  const std::size_t S = survival ? cfg.survival_t.size() : 0;
  const std::size_t L = laplace ? cfg.laplace_t.size() * cfg.laplace_lambda.size() : 0;

  for (std::size_t k = 0; k < cfg.y0.size(); ++k) {
    const double y0 = cfg.y0[k];
    const std::uint64_t seed = derive_seed(cfg.seed, k);
    constexpr std::size_t kTask = 1000;
    const std::size_t tasks = (cfg.n_paths + kTask - 1) / kTask;
    std::vector<std::vector<stats::MeanAccumulator>> parts(tasks, std::vector<stats::MeanAccumulator>(S + L));
    parallel_for(tasks, cfg.workers, [&](std::size_t task) {
      for (std::size_t i = task * kTask; i < std::min(cfg.n_paths, (task + 1) * kTask); ++i) {
        const CsbpPath p = sample_csbp(y0, cfg.c, horizon, horizon, seed, i);
        for (std::size_t s = 0; s < S; ++s) parts[task][s].add(p.value_at(cfg.survival_t[s]) > 0 ? 1.0 : 0.0);
        for (std::size_t a = 0; a < L; ++a) {
          const double t = cfg.laplace_t[a / cfg.laplace_lambda.size()];
          const double lambda = cfg.laplace_lambda[a % cfg.laplace_lambda.size()];
          parts[task][S + a].add(std::exp(-lambda * p.value_at(t)));
        }
      }
    });
    for (std::size_t j = 0; j < S + L; ++j) {
      stats::MeanAccumulator acc;
      for (const auto& part : parts) acc.merge(part[j]);
      EstimateReport r;
      r.n = acc.count();
      r.seed = cfg.seed;
      r.estimate = acc.mean();
      double exact, t, lambda = 0;
      if (j < S) {
        t = cfg.survival_t[j];
        exact = csbp_survival_exact(y0, cfg.c, kAlpha, t);
        r.name = "csbp_survival_y0_" + format_double(y0) + "_t_" + format_double(t);
        r.stderr_ = stats::binomial_stderr(acc.mean(), acc.count());
      } else {
        t = cfg.laplace_t[(j - S) / cfg.laplace_lambda.size()];
        lambda = cfg.laplace_lambda[(j - S) % cfg.laplace_lambda.size()];
        exact = csbp_laplace_exact(y0, cfg.c, kAlpha, t, lambda);
        r.name = "csbp_laplace_y0_" + format_double(y0) + "_t_" + format_double(t) + "_lambda_" + format_double(lambda);
        r.stderr_ = acc.stderr_of_mean();
      }
      const double z = r.stderr_ > 0 ? (r.estimate - exact) / r.stderr_ : 0.0;
      r.params = {{"y0", y0}, {"c", cfg.c}, {"t", t}, {"exact", exact}, {"z", z}};
      if (j >= S) r.params["lambda"] = lambda;
      out.table.add_row({j < S ? 0.0 : 1.0, y0, t, lambda, r.estimate, r.stderr_, exact, z});
      out.reports.push_back(std::move(r));
    }
  }
  return out;
}

EstimateReport lamperti_roundtrip(const ExactLawConfig& cfg) {
  cfg.validate();
  const double y0 = 1;
  std::vector<double> worst(cfg.roundtrip_seeds, 0.0);
  parallel_for(cfg.roundtrip_seeds, cfg.workers, [&](std::size_t s) {
    const LevyPath p = sample_levy(cfg.roundtrip_horizon, cfg.roundtrip_dt, y0, derive_seed(cfg.seed, 0x6c616d70), s,
                                   {.direction = 1});
    const CsbpPath y = lamperti_to_csbp(p, cfg.c, cfg.roundtrip_dt);
    const LevyPath back = lamperti_to_levy(y, cfg.roundtrip_dt);
    // The final grid point may fall inside the last partial step of the return trip.
    const std::size_t n = std::min(back.values.size(), p.values.size()) - 1;
    for (std::size_t i = 0; i < n; ++i) worst[s] = std::max(worst[s], std::abs(back.values[i] - p.values[i]) / y0);
  });
  EstimateReport r;
  r.name = "lamperti_roundtrip_max_error";
  r.estimate = *std::max_element(worst.begin(), worst.end());
  r.n = cfg.roundtrip_seeds;
  r.seed = cfg.seed;
  r.params = {{"horizon", cfg.roundtrip_horizon}, {"dt", cfg.roundtrip_dt}, {"c", cfg.c}, {"tolerance", 1e-3}};
  return r;
}

}  // namespace lqg::levy
