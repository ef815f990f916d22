#include "lqg/gmc/suite.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "lqg/common/rng.hpp"
#include "lqg/common/stats.hpp"
#include "lqg/gmc/field.hpp"
#include "lqg/gmc/heat_kernel.hpp"
#include "lqg/gmc/lfpp.hpp"
#include "lqg/gmc/walk.hpp"

namespace lqg::gmc {

void LbmConfig::validate() const {
  auto pow2 = [](std::size_t v) { return v >= 64 && (v & (v - 1)) == 0; };
  if (!pow2(n) || !pow2(n_coarse)) throw std::invalid_argument("lbm: n and n_coarse must be powers of two >= 64");
  if (volume_fields == 0 || volume_centers == 0 || volume_radii < 3)
    throw std::invalid_argument("lbm: volume needs fields, centers and at least 3 radii");
  if (exit_fields == 0 || exit_walks == 0 || exit_radii < 3 || !(exit_decade_top > 0 && exit_decade_top <= 0.25))
    throw std::invalid_argument("lbm: exit needs fields, walks, 3 radii and a top radius within a quarter eccentricity");
  if (heat_fields == 0 || heat_walks == 0 || heat_times < 3 || heat_levels == 0 || heat_targets_per_level == 0)
    throw std::invalid_argument("lbm: heat kernel needs fields, walks, 3 times and targets");
  if (!(heat_decades >= 1.5)) throw std::invalid_argument("lbm: heat-kernel times must span at least 1.5 decades");
  if (!(heat_window > 0 && heat_window <= 0.01))
    throw std::invalid_argument("lbm: heat-kernel window must lie below 1% of the pre-mixing proxy");
  if (!(heat_bin_fraction > 0 && heat_bin_fraction <= 1)) throw std::invalid_argument("lbm: bin fraction in (0, 1]");
}

const EstimateReport& LbmResult::report(const std::string& name) const {
  for (const auto& r : reports) {
    if (r.name == name) return r;
  }
  throw std::out_of_range("no report named " + name);
}

namespace {

struct Environment {
  LatticeField field;
  GmcMeasure measure;
  LfppMetric metric;

  explicit Environment(LatticeField f) : field(std::move(f)), measure(gmc_mass(field)), metric(field) {}
};

Environment make_environment(const LbmConfig& cfg, std::size_t n, std::uint64_t part, std::size_t index) {
  return Environment(sample_gff(n, true, derive_seed(cfg.seed, (part << 48) + (n << 24) + index)));
}

double median_edge(const Environment& env) {
  const std::size_t n = env.field.n;
  std::vector<double> e;
  for (std::size_t v = 0; v < env.field.size(); v += 7) e.push_back(env.metric.edge_length(v, v / n * n + (v % n + 1) % n));
  std::nth_element(e.begin(), e.begin() + static_cast<long>(e.size() / 2), e.end());
  return e[e.size() / 2];
}

struct SlopeSet {
  stats::MeanAccumulator acc;
  std::size_t inconclusive = 0;
};

EstimateReport slope_report(const std::string& name, const SlopeSet& s, const LbmConfig& cfg, std::size_t n) {
  EstimateReport r;
  r.name = name;
  r.estimate = s.acc.mean();
  r.stderr_ = s.acc.count() > 1 ? s.acc.stderr_of_mean() : 0.0;
  r.n = s.acc.count();
  r.seed = cfg.seed;
  r.params = {{"lattice", n}, {"inconclusive_samples", s.inconclusive}};
  return r;
}

EstimateReport fit_report(const std::string& name, const stats::LinearFit& fit, const LbmConfig& cfg, std::size_t n) {
  EstimateReport r;
  r.name = name;
  r.estimate = fit.slope;
  r.stderr_ = fit.slope_stderr;
  r.n = fit.n;
  r.seed = cfg.seed;
  r.params = {{"lattice", n}, {"r_squared", fit.r_squared}};
  return r;
}

EstimateReport drift_report(const std::string& name, const EstimateReport& fine, const EstimateReport& coarse) {
  EstimateReport r;
  r.name = name;
  r.estimate = std::abs(fine.estimate - coarse.estimate);
  r.stderr_ = std::hypot(fine.stderr_, coarse.stderr_);
  r.n = fine.n + coarse.n;
  r.seed = fine.seed;
  r.params = {{"fine", fine.estimate}, {"coarse", coarse.estimate}};
  r.inconclusive = fine.inconclusive || coarse.inconclusive;
  return r;
}

void add_points(CsvTable& t, bool flat, std::size_t n, std::size_t field, std::span<const double> x,
                std::span<const double> y) {
  for (std::size_t i = 0; i < x.size(); ++i)
    t.add_row({flat ? 1.0 : 0.0, static_cast<double>(n), static_cast<double>(field), std::log(x[i]), std::log(y[i])});
}

// ---- volume ----

stats::LinearFit volume_fit(const Environment& env, std::size_t center, double edge, std::size_t radii, CsvTable& t,
                            bool flat, std::size_t index) {
  const auto d = env.metric.distances_from(center);
  const double ecc = *std::max_element(d.begin(), d.end());
  const double mid = std::sqrt(edge * ecc / 2);
  const auto r = stats::geomspace(mid / std::sqrt(10.0), mid * std::sqrt(10.0), radii);
  const auto curve = ball_mass_curve(d, env.measure, r);
  add_points(t, flat, env.field.n, index, curve.radii, curve.mass);
  return stats::loglog_fit(curve.radii, curve.mass);
}

EstimateReport volume_slope(const LbmConfig& cfg, std::size_t n, CsvTable& t) {
  SlopeSet s;
  for (std::size_t f = 0; f < cfg.volume_fields; ++f) {
    const Environment env = make_environment(cfg, n, 1, f);
    const double edge = median_edge(env);
    RandomStream rng(derive_seed(cfg.seed, 0x766f6c), (n << 24) + f);
    for (std::size_t c = 0; c < cfg.volume_centers; ++c) {
      const std::size_t center = static_cast<std::size_t>(rng() % env.field.size());
      s.acc.add(volume_fit(env, center, edge, cfg.volume_radii, t, false, f).slope);
    }
  }
  auto r = slope_report(n == cfg.n ? "lbm_volume_slope" : "lbm_volume_slope_coarse", s, cfg, n);
  r.params["fields"] = cfg.volume_fields;
  r.params["centers"] = cfg.volume_centers;
  return r;
}

// ---- exit ----

stats::LinearFit exit_fit(const LbmConfig& cfg, const Environment& env, std::size_t center, std::uint64_t seed,
                          CsvTable& t, bool flat, std::size_t index) {
  const auto d = env.metric.distances_from(center);
  const double ecc = *std::max_element(d.begin(), d.end());
  const double top = cfg.exit_decade_top * ecc;
  const auto r = stats::geomspace(top / 10, top, cfg.exit_radii);
  const auto curve = exit_time_curve(env.field, env.measure, d, r, cfg.exit_walks, seed, cfg.workers,
                                     cfg.exponential_holding);
  add_points(t, flat, env.field.n, index, curve.radii, curve.mean);
  return stats::loglog_fit(curve.radii, curve.mean);
}

EstimateReport exit_slope(const LbmConfig& cfg, std::size_t n, CsvTable& t) {
  SlopeSet s;
  for (std::size_t f = 0; f < cfg.exit_fields; ++f) {
    const Environment env = make_environment(cfg, n, 2, f);
    RandomStream rng(derive_seed(cfg.seed, 0x657869), (n << 24) + f);
    const std::size_t center = static_cast<std::size_t>(rng() % env.field.size());
    s.acc.add(exit_fit(cfg, env, center, derive_seed(cfg.seed, (n << 24) + f), t, false, f).slope);
  }
  auto r = slope_report(n == cfg.n ? "lbm_exit_slope" : "lbm_exit_slope_coarse", s, cfg, n);
  r.params["fields"] = cfg.exit_fields;
  r.params["walks_per_field"] = cfg.exit_walks;
  return r;
}

// ---- heat kernel ----

struct HeatOutcome {
  stats::LinearFit diagonal;
  StretchFit stretch;
  double premix = 0, t_max = 0, dropped_fraction = 0;
  bool inconclusive = false;
};

HeatOutcome heat_run(const LbmConfig& cfg, const Environment& env, std::uint64_t seed, CsvTable& t, bool flat,
                     std::size_t index) {
  RandomStream rng(seed, 0x68656174);
  const std::size_t size = env.field.size();
  const std::size_t source = static_cast<std::size_t>(rng() % size);
  HeatOutcome out;
  out.premix = premixing_time(env.field, env.measure, source, seed);
  out.t_max = cfg.heat_window * std::min(out.premix, env.measure.total);
  const auto times = stats::geomspace(out.t_max * std::pow(10.0, -cfg.heat_decades), out.t_max, cfg.heat_times);

  const auto d = env.metric.distances_from(source);
  std::vector<std::size_t> order(size);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  auto radius_of_mass = [&](double mass) {
    double acc = 0;
    for (std::size_t v : order) {
      acc += env.measure.cell_mass[v];
      if (acc >= mass) return d[v];
    }
    return d[order.back()];
  };
  const double r_lo = 0.5 * radius_of_mass(times.front()), r_hi = 1.5 * radius_of_mass(times.back());
  std::vector<std::size_t> targets{source};
  std::vector<double> dist{0};
  for (double level : stats::geomspace(r_lo, r_hi, cfg.heat_levels)) {
    const auto lo = std::lower_bound(order.begin(), order.end(), 0.97 * level, [&](std::size_t v, double x) { return d[v] < x; });
    auto hi = std::upper_bound(lo, order.end(), 1.03 * level, [&](double x, std::size_t v) { return x < d[v]; });
    if (hi == lo) hi = std::min(lo + 1, order.end());
    if (hi == lo) continue;
    for (std::size_t k = 0; k < cfg.heat_targets_per_level; ++k) {
      const std::size_t v = *(lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo)));
      targets.push_back(v);
      dist.push_back(d[v]);
    }
  }
  HeatKernelOptions opt;
  opt.bin = 1;
  opt.bin_fraction = cfg.heat_bin_fraction;
  opt.exponential_holding = cfg.exponential_holding;
  opt.workers = cfg.workers;
  const auto est = heat_kernel_profile(env.field, env.measure, source, targets, dist, times, cfg.heat_walks,
                                       derive_seed(seed, 1), opt);
  out.diagonal = on_diagonal_fit(est);
  out.stretch = stretch_exponent_fit(est);
  out.dropped_fraction = static_cast<double>(est.dropped) / static_cast<double>(times.size() * targets.size());
  out.inconclusive = est.inconclusive || out.diagonal.n < 3;
  std::vector<double> tk, pk;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!est.kept(k, 0)) continue;
    tk.push_back(times[k]);
    pk.push_back(est.p[k][0]);
  }
  add_points(t, flat, env.field.n, index, tk, pk);
  return out;
}

struct HeatReports {
  EstimateReport diagonal, stretch;
};

HeatReports heat_slopes(const LbmConfig& cfg, std::size_t n, CsvTable& t) {
  SlopeSet diag, stretch;
  stats::MeanAccumulator dropped, premix;
  for (std::size_t f = 0; f < cfg.heat_fields; ++f) {
    const Environment env = make_environment(cfg, n, 3, f);
    const HeatOutcome h = heat_run(cfg, env, derive_seed(cfg.seed, (3ull << 48) + (n << 24) + f), t, false, f);
    dropped.add(h.dropped_fraction);
    premix.add(h.premix);
    if (h.diagonal.n >= 3) diag.acc.add(h.diagonal.slope);
    if (h.inconclusive) ++diag.inconclusive;
    if (!h.stretch.inconclusive) {
      stretch.acc.add(h.stretch.exponent);
    } else {
      ++stretch.inconclusive;
    }
  }
  const bool fine = n == cfg.n;
  HeatReports r;
  r.diagonal = slope_report(fine ? "lbm_ondiag_slope" : "lbm_ondiag_slope_coarse", diag, cfg, n);
  r.stretch = slope_report(fine ? "lbm_stretch_exponent" : "lbm_stretch_exponent_coarse", stretch, cfg, n);
  for (auto* rep : {&r.diagonal, &r.stretch}) {
    rep->params["fields"] = cfg.heat_fields;
    rep->params["walks_per_field"] = cfg.heat_walks;
    rep->params["mean_dropped_bin_fraction"] = dropped.mean();
    rep->params["mean_premixing_time"] = premix.mean();
  }
  r.diagonal.inconclusive = 2 * diag.inconclusive > cfg.heat_fields || diag.acc.count() < 2;
  r.stretch.inconclusive = 2 * stretch.inconclusive > cfg.heat_fields || stretch.acc.count() < 2;
  return r;
}

}  // namespace

LbmResult lbm_volume_suite(const LbmConfig& cfg) {
  cfg.validate();
  LbmResult out;
  const auto fine = volume_slope(cfg, cfg.n, out.points);
  const auto coarse = volume_slope(cfg, cfg.n_coarse, out.points);
  const Environment flat(flat_field(cfg.n));
  const auto flat_fit = volume_fit(flat, 0, 1.0 / static_cast<double>(cfg.n), cfg.volume_radii, out.points, true, 0);
  out.reports = {fine, coarse, drift_report("lbm_volume_slope_drift", fine, coarse),
                 fit_report("lbm_volume_slope_flat", flat_fit, cfg, cfg.n)};
  return out;
}

LbmResult lbm_exit_suite(const LbmConfig& cfg) {
  cfg.validate();
  LbmResult out;
  const auto fine = exit_slope(cfg, cfg.n, out.points);
  const auto coarse = exit_slope(cfg, cfg.n_coarse, out.points);
  const Environment flat(flat_field(cfg.n));
  const auto flat_fit = exit_fit(cfg, flat, 0, derive_seed(cfg.seed, 0x666c6174), out.points, true, 0);
  out.reports = {fine, coarse, drift_report("lbm_exit_slope_drift", fine, coarse),
                 fit_report("lbm_exit_slope_flat", flat_fit, cfg, cfg.n)};
  return out;
}

LbmResult lbm_heat_kernel_suite(const LbmConfig& cfg) {
  cfg.validate();
  LbmResult out;
  const auto fine = heat_slopes(cfg, cfg.n, out.points);
  const auto coarse = heat_slopes(cfg, cfg.n_coarse, out.points);
  const Environment flat(flat_field(cfg.n));
  const HeatOutcome h = heat_run(cfg, flat, derive_seed(cfg.seed, 0x666c6174), out.points, true, 0);
  auto flat_report = fit_report("lbm_ondiag_slope_flat", h.diagonal, cfg, cfg.n);
  flat_report.inconclusive = h.inconclusive;
  flat_report.params["premixing_time"] = h.premix;
  out.reports = {fine.diagonal, coarse.diagonal, drift_report("lbm_ondiag_slope_drift", fine.diagonal, coarse.diagonal),
                 flat_report, fine.stretch, coarse.stretch};
  return out;
}

}  // namespace lqg::gmc
