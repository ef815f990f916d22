#include "lqg/bmap/suite.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lqg/bmap/metric.hpp"
#include "lqg/common/parallel.hpp"
#include "lqg/common/rng.hpp"
#include "lqg/common/stats.hpp"

namespace lqg::bmap {

const EstimateReport& BallVolumeResult::report(const std::string& name) const {
  for (const auto& r : reports) {
    if (r.name == name) return r;
  }
  throw std::out_of_range("no report named " + name);
}

namespace {

struct MapOutcome {
  std::vector<double> slopes, coarse_landmark_slopes;
  std::vector<double> mean_fraction;
  double root_slope = 0;
  double diameter = 0;
  std::size_t axiom_violations = 0;
  std::size_t root_undercuts = 0;
};

double fit_slope(const BallVolumeCurve& curve) { return stats::loglog_fit(curve.radii, curve.fraction).slope; }

std::size_t check_axioms(const SnakeMetric& metric, const LandmarkDistances& lm, std::size_t triples,
                         RandomStream& rng) {
  constexpr double tol = 1e-9;
  std::size_t bad = 0;
  const std::size_t m = lm.size();
  for (std::size_t a = 0; a < m; ++a) {
    if (lm.chain_at(a, a) != 0) ++bad;
    for (std::size_t b = 0; b < m; ++b) {
      const double ab = lm.chain_at(a, b);
      if (ab < 0 || ab != lm.chain_at(b, a) || ab > lm.edge_at(a, b) + tol) ++bad;
      for (std::size_t c = 0; c < m; ++c) {
        if (lm.chain_at(a, c) > ab + lm.chain_at(b, c) + tol) ++bad;
      }
    }
  }
  const std::size_t n = metric.sample().contour.n;
  auto pick = [&] { return std::min(n, static_cast<std::size_t>(rng.uniform() * static_cast<double>(n + 1))); };
  for (std::size_t k = 0; k < triples; ++k) {
    const std::size_t s = pick(), t = pick(), u = pick();
    const double st = metric.m_X(s, t);
    if (metric.m_X(s, s) != 0 || st != metric.m_X(t, s) || metric.m_X(s, u) > st + metric.m_X(t, u) + tol) ++bad;
    if (metric.d_circ(s, t) < -tol) ++bad;
  }
  return bad;
}

MapOutcome run_map(const BallVolumeConfig& cfg, std::size_t n, std::size_t index, bool full) {
  const std::uint64_t seed = derive_seed(cfg.seed, 0x626d00000000ull + n);
  const SnakeSample sample = snake_labels(sample_contour(n, cfg.variant, derive_seed(seed, 2 * index)),
                                          derive_seed(seed, 2 * index + 1));
  const SnakeMetric metric(sample);
  const LandmarkDistances lm = map_distance_matrix(metric, cfg.landmarks);
  MapOutcome out;
  out.diameter = lm.diameter();
  const auto fractions = stats::geomspace(cfg.r_lo, cfg.r_hi, cfg.radii);
  std::vector<double> radii;
  for (double f : fractions) radii.push_back(f * out.diameter);
  out.mean_fraction.assign(radii.size(), 0.0);

  RandomStream rng(seed, 0x63656e7465720000ull + index);
  std::vector<std::size_t> centers;
  for (std::size_t c = 0; c < cfg.centers; ++c)
    centers.push_back(2 * static_cast<std::size_t>(rng.uniform() * static_cast<double>(cfg.landmarks / 2)));
  for (std::size_t c : centers) {
    const BallVolumeCurve curve = ball_volume_curve(metric, lm, c, radii);
    out.slopes.push_back(fit_slope(curve));
    for (std::size_t i = 0; i < radii.size(); ++i) out.mean_fraction[i] += curve.fraction[i] / static_cast<double>(centers.size());
  }
  if (!full) return out;

  // Same centers on every other landmark: the m-refinement comparison.
  std::vector<std::size_t> half;
  for (std::size_t k = 0; k < cfg.landmarks; k += 2) half.push_back(lm.landmarks[k]);
  half.push_back(sample.root);
  const LandmarkDistances coarse = landmark_distances(metric, half);
  for (std::size_t c : centers) out.coarse_landmark_slopes.push_back(fit_slope(ball_volume_curve(metric, coarse, c / 2, radii)));

  std::vector<double> profile(n * 2);
  for (std::size_t i = 0; i < profile.size(); ++i) profile[i] = sample.Y[i] - sample.Y[sample.root];
  std::sort(profile.begin(), profile.end());
  BallVolumeCurve root_curve;
  root_curve.radii = radii;
  for (double r : radii)
    root_curve.fraction.push_back(static_cast<double>(std::upper_bound(profile.begin(), profile.end(), r) - profile.begin()) /
                                  static_cast<double>(profile.size()));
  out.root_slope = fit_slope(root_curve);

  for (std::size_t l = 0; l < lm.size(); ++l) {
    if (lm.chain_at(lm.root(), l) < sample.Y[lm.landmarks[l]] - sample.Y[sample.root] - 1e-9) ++out.root_undercuts;
  }
  out.axiom_violations = check_axioms(metric, lm, cfg.triples, rng);
  return out;
}

std::vector<MapOutcome> run_maps(const BallVolumeConfig& cfg, std::size_t n, bool full) {
  std::vector<MapOutcome> out(cfg.maps);
  parallel_for(cfg.maps, cfg.workers, [&](std::size_t i) { out[i] = run_map(cfg, n, i, full); });
  return out;
}

EstimateReport slope_report(std::string name, const std::vector<MapOutcome>& maps, const BallVolumeConfig& cfg,
                            std::size_t n) {
  stats::MeanAccumulator acc;
  for (const auto& m : maps) {
    for (double s : m.slopes) acc.add(s);
  }
  EstimateReport r;
  r.name = std::move(name);
  r.estimate = acc.mean();
  r.stderr_ = acc.stderr_of_mean();
  r.n = acc.count();
  r.seed = cfg.seed;
  r.params = {{"n", n},
              {"maps", cfg.maps},
              {"centers", cfg.centers},
              {"landmarks", cfg.landmarks},
              {"r_lo", cfg.r_lo},
              {"r_hi", cfg.r_hi},
              {"variant", to_string(cfg.variant)}};
  return r;
}

}  // namespace

void BallVolumeConfig::validate() const {
  if (maps == 0 || centers == 0 || radii < 2) throw std::invalid_argument("ball_volume_suite: empty design");
  if (n < 2 || n_coarse < 2) throw std::invalid_argument("ball_volume_suite: n must be >= 2");
  if (landmarks < 4 || landmarks > 2 * n_coarse) throw std::invalid_argument("ball_volume_suite: landmarks must lie in [4, 2 n_coarse]");
  if (!(r_lo > 0 && r_hi > r_lo && r_hi <= 1)) throw std::invalid_argument("ball_volume_suite: need 0 < r_lo < r_hi <= 1");
}

BallVolumeResult ball_volume_suite(const BallVolumeConfig& cfg) {
  cfg.validate();
  BallVolumeResult out;
  const auto fine = run_maps(cfg, cfg.n, true);
  const auto coarse = run_maps(cfg, cfg.n_coarse, false);

  EstimateReport fine_slope = slope_report("ball_volume_slope", fine, cfg, cfg.n);
  stats::MeanAccumulator root, half, diam;
  std::size_t violations = 0, undercuts = 0;
  for (const auto& m : fine) {
    root.add(m.root_slope);
    diam.add(m.diameter);
    for (double s : m.coarse_landmark_slopes) half.add(s);
    violations += m.axiom_violations;
    undercuts += m.root_undercuts;
  }
  fine_slope.params["root_profile_slope"] = root.mean();
  fine_slope.params["root_profile_stderr"] = root.stderr_of_mean();
  fine_slope.params["half_landmark_slope"] = half.mean();
  fine_slope.params["m_refinement_delta"] = fine_slope.estimate - half.mean();
  fine_slope.params["mean_diameter"] = diam.mean();
  out.reports.push_back(fine_slope);
  const EstimateReport coarse_slope = slope_report("ball_volume_slope_coarse", coarse, cfg, cfg.n_coarse);
  out.reports.push_back(coarse_slope);

  EstimateReport drift;
  drift.name = "ball_volume_slope_drift";
  drift.estimate = std::abs(fine_slope.estimate - coarse_slope.estimate);
  drift.stderr_ = std::hypot(fine_slope.stderr_, coarse_slope.stderr_);
  drift.n = fine_slope.n + coarse_slope.n;
  drift.seed = cfg.seed;
  drift.params = {{"n", cfg.n}, {"n_coarse", cfg.n_coarse}};
  out.reports.push_back(drift);

  EstimateReport axioms;
  axioms.name = "pseudometric_violations";
  axioms.estimate = static_cast<double>(violations);
  axioms.n = cfg.maps;
  axioms.seed = cfg.seed;
  axioms.params = {{"triples_per_map", cfg.triples}, {"landmarks", cfg.landmarks + 1}};
  out.reports.push_back(axioms);

  EstimateReport identity;
  identity.name = "root_identity_undercuts";
  identity.estimate = static_cast<double>(undercuts);
  identity.n = cfg.maps * (cfg.landmarks + 1);
  identity.seed = cfg.seed;
  identity.params = {{"tolerance", 1e-9}};
  out.reports.push_back(identity);

  const auto fractions = stats::geomspace(cfg.r_lo, cfg.r_hi, cfg.radii);
  for (const auto* set : {&coarse, &fine}) {
    const double n = static_cast<double>(set == &fine ? cfg.n : cfg.n_coarse);
    for (std::size_t i = 0; i < fractions.size(); ++i) {
      double mean = 0;
      for (const auto& m : *set) mean += m.mean_fraction[i] / static_cast<double>(set->size());
      out.curve.add_row({n, fractions[i], mean});
    }
  }
  return out;
}

}  // namespace lqg::bmap
