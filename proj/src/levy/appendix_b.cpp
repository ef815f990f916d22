#include "lqg/levy/appendix_b.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lqg/common/parallel.hpp"
#include "lqg/common/stats.hpp"
#include "lqg/levy/stable.hpp"

namespace lqg::levy {

namespace {

constexpr std::size_t kTask = 1000;

struct CoordScan {
  double tau = kNever;
  double I_start = 0;
  double I_tau = 0;
  std::vector<double> probe_gap;       // X - I at the probe times, NaN when not reached
  std::vector<std::uint32_t> wide;     // grid indices in [1, 2] before tau with X - I > gap
};

CoordScan scan_coordinate(const AppendixBConfig& cfg, std::uint64_t stream) {
  StableIncrements source(cfg.seed, stream);
  const double dt = cfg.dt;
  const double scale = std::pow(dt, 2.0 / 3.0);
  const double tol = hit_tolerance(dt);
  const auto start = static_cast<std::size_t>(std::llround(1 / dt));
  const auto two = static_cast<std::size_t>(std::llround(2 / dt));
  const auto last = static_cast<std::size_t>(std::llround(cfg.horizon / dt));
  std::vector<std::size_t> probes;
  for (double A : cfg.A_reflection) probes.push_back(static_cast<std::size_t>(std::llround(A / dt)));

  CoordScan out;
  out.probe_gap.assign(probes.size(), std::nan(""));
  double x = 0, inf = 0;
  for (std::size_t k = 1; k <= last; ++k) {
    x += scale * source.next();
    inf = std::min(inf, x);
    const double gap = x - inf;
    for (std::size_t p = 0; p < probes.size(); ++p) {
      if (probes[p] == k) out.probe_gap[p] = gap;
    }
    if (k == start) out.I_start = inf;
    if (k >= start) {
      if (gap <= tol) {
        out.tau = dt * static_cast<double>(k);
        out.I_tau = inf;
        return out;
      }
      if (k <= two && gap > cfg.joint_gap) out.wide.push_back(static_cast<std::uint32_t>(k));
    }
  }
  out.I_tau = inf;
  return out;
}

EstimateReport make(std::string name, double estimate, double se, std::size_t n, std::uint64_t seed,
                    nlohmann::json params = nlohmann::json::object()) {
  EstimateReport r;
  r.name = std::move(name);
  r.estimate = estimate;
  r.stderr_ = se;
  r.n = n;
  r.seed = seed;
  r.params = std::move(params);
  return r;
}

// Survival curve with hit counts; fit over points with at least min_hits hits.
struct TailFit {
  std::vector<double> x, survival, hits;
  stats::LinearFit fit;
  std::size_t used = 0;
};

TailFit tail_fit(const std::vector<double>& sample, const std::vector<double>& xs, std::size_t min_hits,
                 bool log_x, bool strict_below = false) {
  TailFit t;
  t.x = xs;
  std::vector<double> fx, fy;
  for (double x : xs) {
    double hits = 0;
    for (double v : sample) hits += strict_below ? (v < -x) : (v >= x);
    t.hits.push_back(hits);
    t.survival.push_back(hits / static_cast<double>(sample.size()));
    if (hits >= static_cast<double>(min_hits)) {
      fx.push_back(log_x ? std::log(x) : x);
      fy.push_back(std::log(hits / static_cast<double>(sample.size())));
    }
  }
  t.used = fx.size();
  if (fx.size() >= 2) t.fit = stats::linear_fit(fx, fy);
  return t;
}

CsvTable tail_table(const TailFit& t, std::size_t n) {
  CsvTable table({"x", "count", "total", "survival"});
  for (std::size_t i = 0; i < t.x.size(); ++i) table.add_row({t.x[i], t.hits[i], static_cast<double>(n), t.survival[i]});
  return table;
}

template <class Sample>
std::vector<double> run_tasks(std::size_t n, unsigned workers, Sample sample) {
  std::vector<double> out(n);
  parallel_for((n + kTask - 1) / kTask, workers, [&](std::size_t task) {
    for (std::size_t i = task * kTask; i < std::min(n, (task + 1) * kTask); ++i) out[i] = sample(i);
  });
  return out;
}

}  // namespace

const EstimateReport& AppendixBResult::report(const std::string& name) const {
  for (const auto& r : reports) {
    if (r.name == name) return r;
  }
  throw std::out_of_range("no report named " + name);
}

void AppendixBConfig::validate() const {
  if (!(dt > 0) || horizon < 2 || n_pairs < kTask) {
    throw std::invalid_argument("appendix_b: need dt > 0, horizon >= 2 and at least 1000 pairs");
  }
  for (double A : A_values) {
    if (!(A > 0) || A > horizon) throw std::invalid_argument("appendix_b: A values must lie in (0, horizon]");
  }
  if (!(tail_lo > 0 && tail_hi > tail_lo) || !(overshoot_lo > 0 && overshoot_hi > overshoot_lo) ||
      !(reflected_lo > 0 && reflected_hi > reflected_lo) || joint_y.size() < 2) {
    throw std::invalid_argument("appendix_b: fit ranges must be positive and increasing");
  }
}

AppendixBResult appendix_b_estimators(const AppendixBConfig& cfg) {
  cfg.validate();
  AppendixBResult res;
  const std::size_t n = cfg.n_pairs;
  const std::uint64_t seed = cfg.seed;

  // Return times for both coordinates of every pair.
  std::vector<CoordScan> c1(n), c2(n);
  parallel_for((n + kTask - 1) / kTask, cfg.workers, [&](std::size_t task) {
    for (std::size_t i = task * kTask; i < std::min(n, (task + 1) * kTask); ++i) {
      c1[i] = scan_coordinate(cfg, 2 * i);
      c2[i] = scan_coordinate(cfg, 2 * i + 1);
    }
  });

  const auto xs = stats::geomspace(cfg.tail_lo, cfg.tail_hi, cfg.tail_points);
  const nlohmann::json tail_params = {{"x_lo", cfg.tail_lo}, {"x_hi", cfg.tail_hi}, {"dt", cfg.dt},
                                      {"horizon", cfg.horizon}};

  // (a) single return time, both coordinates pooled.
  std::vector<double> tau_single, tau_pair(n);
  tau_single.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    tau_single.push_back(c1[i].tau);
    tau_single.push_back(c2[i].tau);
    tau_pair[i] = std::min(c1[i].tau, c2[i].tau);
  }
  for (const auto& [name, sample, expected] :
       {std::tuple{"tau1_tail_slope", &tau_single, -1.0 / 3}, std::tuple{"tau_tail_slope", &tau_pair, -2.0 / 3}}) {
    const TailFit t = tail_fit(*sample, xs, cfg.min_hits, true);
    auto params = tail_params;
    params["expected"] = expected;
    params["r_squared"] = t.fit.r_squared;
    params["points_used"] = t.used;
    auto r = make(name, t.fit.slope, t.fit.slope_stderr, sample->size(), seed, params);
    r.inconclusive = t.used < cfg.min_tail_points;
    res.reports.push_back(r);
    res.curves.emplace(std::string(name) == "tau1_tail_slope" ? "tau1_tail" : "tau_tail", tail_table(t, sample->size()));
  }

  // (c), (e) running infimum of X^1 at tau on {tau < A}.
  std::vector<double> neg_inf(n);
  for (std::size_t i = 0; i < n; ++i) {
    neg_inf[i] = -(c1[i].tau <= c2[i].tau ? c1[i].I_tau : c1[i].I_start);
  }
  CsvTable inf_table({"A", "mean_neg_inf", "stderr", "p_moment", "p_stderr", "p_moment_over_cap"});
  std::vector<double> logA, means;
  for (double A : cfg.A_values) {
    stats::MeanAccumulator m, mp;
    for (std::size_t i = 0; i < n; ++i) {
      const bool before = std::min(c1[i].tau, c2[i].tau) < A;
      m.add(before ? neg_inf[i] : 0.0);
      mp.add(before ? std::pow(neg_inf[i], cfg.p_moment) : 0.0);
    }
    const double cap = std::pow(A, 2 * (cfg.p_moment - 1) / 3);
    inf_table.add_row({A, m.mean(), m.stderr_of_mean(), mp.mean(), mp.stderr_of_mean(), mp.mean() / cap});
    res.reports.push_back(make("running_inf_mean", m.mean(), m.stderr_of_mean(), n, seed, {{"A", A}}));
    res.reports.push_back(make("running_inf_p_moment_ratio", mp.mean() / cap, mp.stderr_of_mean() / cap, n, seed,
                               {{"A", A}, {"p", cfg.p_moment}}));
    logA.push_back(std::log(A));
    means.push_back(m.mean());
  }
  {
    const auto fit = stats::linear_fit(logA, means);
    bool increasing = true;
    for (std::size_t k = 1; k < means.size(); ++k) increasing = increasing && means[k] > means[k - 1];
    res.reports.push_back(make("running_inf_log_slope", fit.slope, fit.slope_stderr, n, seed,
                               {{"strictly_increasing", increasing}, {"A_values", cfg.A_values}}));
    if (means.size() >= 2) {
      res.reports.push_back(make("running_inf_ratio_last_over_second", means.back() / means[1], 0.0, n, seed,
                                 {{"A_hi", cfg.A_values.back()}, {"A_lo", cfg.A_values[1]}}));
    }
  }
  res.curves.emplace("running_inf", std::move(inf_table));

  // (d) E[(X^1_A - I^1_A) 1{tau >= A}].
  {
    CsvTable table({"A", "mean_gap", "stderr"});
    double first = 0, first_se = 0, worst = 0;
    for (std::size_t p = 0; p < cfg.A_reflection.size(); ++p) {
      const double A = cfg.A_reflection[p];
      stats::MeanAccumulator m;
      for (std::size_t i = 0; i < n; ++i) {
        const bool survive = std::min(c1[i].tau, c2[i].tau) >= A - 1e-9;
        m.add(survive ? c1[i].probe_gap[p] : 0.0);
      }
      table.add_row({A, m.mean(), m.stderr_of_mean()});
      res.reports.push_back(make("reflection_mean", m.mean(), m.stderr_of_mean(), n, seed, {{"A", A}}));
      if (p == 0) {
        first = m.mean();
        first_se = m.stderr_of_mean();
      }
      worst = std::max(worst, m.mean());
    }
    res.reports.push_back(make("reflection_mean_max", worst, 0.0, n, seed,
                               {{"first", first}, {"first_stderr", first_se}, {"bound", 2 * first + 3 * first_se}}));
    res.curves.emplace("reflection_mean", std::move(table));
  }

  // (g) P[tau = tau^2 < 2, X^1 - I^1 > gap at tau, I^2_tau > -y]: condition on the
  // X^2 return, with g(s) = P[tau^1 > s, X^1_s - I^1_s > gap] estimated from the X^1 paths.
  {
    const auto two = static_cast<std::size_t>(std::llround(2 / cfg.dt));
    const std::size_t batches = n / kTask;
    std::vector<std::vector<double>> per_batch(cfg.joint_y.size(), std::vector<double>(batches, 0.0));
    std::vector<double> g_all(two + 1, 0.0);
    for (std::size_t b = 0; b < batches; ++b) {
      std::vector<double> g(two + 1, 0.0);
      for (std::size_t i = b * kTask; i < (b + 1) * kTask; ++i) {
        for (auto k : c1[i].wide) g[k] += 1;
      }
      for (std::size_t k = 0; k <= two; ++k) g_all[k] += g[k];
      for (std::size_t i = b * kTask; i < (b + 1) * kTask; ++i) {
        if (!(c2[i].tau < 2 - 1e-9)) continue;
        const auto k = static_cast<std::size_t>(std::llround(c2[i].tau / cfg.dt));
        for (std::size_t j = 0; j < cfg.joint_y.size(); ++j) {
          if (c2[i].I_tau > -cfg.joint_y[j]) per_batch[j][b] += g[k] / kTask / kTask;
        }
      }
    }
    CsvTable table({"y", "probability", "stderr"});
    std::vector<double> ys, ps, ws;
    for (std::size_t j = 0; j < cfg.joint_y.size(); ++j) {
      double total = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (!(c2[i].tau < 2 - 1e-9) || !(c2[i].I_tau > -cfg.joint_y[j])) continue;
        total += g_all[static_cast<std::size_t>(std::llround(c2[i].tau / cfg.dt))] / static_cast<double>(n);
      }
      const double p = total / static_cast<double>(n);
      stats::MeanAccumulator spread;
      for (double v : per_batch[j]) spread.add(v);
      const double se = spread.stderr_of_mean();
      table.add_row({cfg.joint_y[j], p, se});
      ys.push_back(cfg.joint_y[j]);
      ps.push_back(p);
      ws.push_back(se > 0 ? 1 / (se * se) : 1.0);
    }
    const auto fit = stats::weighted_linear_fit(ys, ps, ws);
    res.reports.push_back(make("joint_event_slope", fit.slope, fit.slope_stderr, n, seed,
                               {{"gap", cfg.joint_gap}, {"intercept", fit.intercept}, {"y_lo", ys.front()},
                                {"y_hi", ys.back()}, {"p_at_y_max", ps.back()}}));
    res.curves.emplace("joint_event", std::move(table));
  }
  c1.clear();
  c2.clear();

  // (f) overshoot below -1 before time 1.
  {
    const std::uint64_t s = derive_seed(seed, 0x6f76);
    const double dt = cfg.dt, scale = std::pow(dt, 2.0 / 3.0);
    const auto steps = static_cast<std::size_t>(std::llround(1 / dt));
    const auto sample = run_tasks(cfg.n_overshoot, cfg.workers, [&](std::size_t i) {
      StableIncrements source(s, i);
      double x = 0;
      for (std::size_t k = 1; k <= steps; ++k) {
        x += scale * source.next();
        if (x < -1) return x;
      }
      return 0.0;  // no passage before time 1
    });
    const auto grid = stats::geomspace(cfg.overshoot_lo, cfg.overshoot_hi, 12);
    const TailFit t = tail_fit(sample, grid, cfg.min_hits, true, true);
    auto r = make("overshoot_tail_slope", t.fit.slope, t.fit.slope_stderr, sample.size(), s,
                  {{"x_lo", cfg.overshoot_lo}, {"x_hi", cfg.overshoot_hi}, {"points_used", t.used},
                   {"reference", -1.5}});
    r.inconclusive = t.used < 3;
    res.reports.push_back(r);
    res.curves.emplace("overshoot_tail", tail_table(t, sample.size()));
  }

  // (h) sup over [0, 1] of the process reflected at its running infimum.
  {
    const std::uint64_t s = derive_seed(seed, 0x7266);
    const double dt = cfg.dt, scale = std::pow(dt, 2.0 / 3.0);
    const auto steps = static_cast<std::size_t>(std::llround(1 / dt));
    const auto sample = run_tasks(cfg.n_reflected, cfg.workers, [&](std::size_t i) {
      StableIncrements source(s, i);
      double x = 0, inf = 0, best = 0;
      for (std::size_t k = 1; k <= steps; ++k) {
        x += scale * source.next();
        inf = std::min(inf, x);
        best = std::max(best, x - inf);
      }
      return best;
    });
    const auto grid = stats::linspace(cfg.reflected_lo, cfg.reflected_hi, cfg.reflected_points);
    const TailFit t = tail_fit(sample, grid, cfg.min_hits, false);
    double covered = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (t.hits[i] >= static_cast<double>(cfg.min_hits)) covered = grid[i];
    }
    auto r = make("reflected_sup_r2", t.fit.r_squared, 0.0, sample.size(), s,
                  {{"slope", t.fit.slope}, {"points_used", t.used}, {"x_lo", cfg.reflected_lo},
                   {"x_hi", cfg.reflected_hi}, {"x_resolved_max", covered}});
    r.inconclusive = t.used < cfg.min_tail_points;
    res.reports.push_back(r);
    res.curves.emplace("reflected_sup_tail", tail_table(t, sample.size()));
  }
  return res;
}

}  // namespace lqg::levy
