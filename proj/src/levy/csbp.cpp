#include "lqg/levy/csbp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lqg/common/parallel.hpp"
#include "lqg/common/stats.hpp"

namespace lqg::levy {

namespace {

// Clock increment int ds / X over a step on which X is linear from a to b.
double clock_step(double ds, double a, double b) {
  const double d = b - a;
  if (std::abs(d) <= 1e-12 * a) return ds / a * (1 - 0.5 * d / a);
  return ds * std::log(b / a) / d;
}

// Inverse: int Y dtheta over a geometric segment from a to b of length dtheta.
double levy_step(double dtheta, double a, double b) {
  const double d = b - a;
  if (std::abs(d) <= 1e-12 * a) return dtheta * a * (1 + 0.5 * d / a);
  return dtheta * d / std::log(b / a);
}

// Builds knots from a sequence of driver values; the final segment creeps to 0.
class KnotBuilder {
public:
  explicit KnotBuilder(CsbpPath& out, double y0) : out_(out) {
    out_.knot_time.assign(1, 0.0);
    out_.knot_value.assign(1, y0);
  }

  // Returns false once the path is absorbed.
  // Absorb after `remaining` driver time creeping down from the last knot.
  void absorb(double remaining) { extinguish(3 * remaining / out_.knot_value.back()); }

  // Extinction after `clock` more CSBP time.
  void extinguish(double clock) {
    out_.extinction_time = out_.knot_time.back() + clock;
    out_.knot_time.push_back(out_.extinction_time);
    out_.knot_value.push_back(0.0);
  }

  bool push(double ds, double next) {
    const double a = out_.knot_value.back();
    const double theta = out_.knot_time.back();
    if (next > 0) {
      out_.knot_time.push_back(theta + clock_step(ds, a, next));
      out_.knot_value.push_back(next);
      return true;
    }
    absorb(ds * a / (a - next));  // driver time to the crossing
    return false;
  }

  double theta() const { return out_.knot_time.back(); }

private:
  CsbpPath& out_;
};

void fill_uniform_grid(CsbpPath& path, double theta_horizon) {
  if (!(path.dt > 0)) throw std::invalid_argument("CSBP output step must be positive");
  const double end = theta_horizon > 0 ? theta_horizon : path.knot_time.back();
  const auto steps = static_cast<std::size_t>(std::floor(end / path.dt + 1e-9));
  path.values.resize(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) path.values[i] = path.value_at(path.dt * static_cast<double>(i));
}

}  // namespace

double CsbpPath::value_at(double theta) const {
  if (theta <= 0) return y0;
  if (extinction_time != kNever && theta >= extinction_time) return 0.0;
  const auto it = std::upper_bound(knot_time.begin(), knot_time.end(), theta);
  if (it == knot_time.end()) return knot_value.back();
  const std::size_t k = static_cast<std::size_t>(it - knot_time.begin()) - 1;
  const double a = knot_value[k], b = knot_value[k + 1];
  const double span = knot_time[k + 1] - knot_time[k];
  const double w = (theta - knot_time[k]) / span;
  if (b == 0) return a * (1 - w) * (1 - w);
  return a * std::pow(b / a, w);
}

CsbpPath lamperti_to_csbp(const LevyPath& path, double c, double dt_out, double theta_horizon) {
  if (path.values.empty() || !(path.x0() > 0)) throw std::invalid_argument("lamperti_to_csbp: y0 must be positive");
  CsbpPath out;
  out.y0 = path.x0();
  out.c = c;
  out.dt = dt_out;
  KnotBuilder knots(out, out.y0);
  for (std::size_t k = 1; k < path.values.size(); ++k) {
    if (!knots.push(path.dt, path.values[k])) break;
  }
  fill_uniform_grid(out, theta_horizon);
  return out;
}

LevyPath lamperti_to_levy(const CsbpPath& path, double dt) {
  if (!(dt > 0)) throw std::invalid_argument("lamperti_to_levy: dt must be positive");
  // Driver times s_i of the knots (or of the uniform grid when no knots exist).
  std::vector<double> s, y;
  if (!path.knot_time.empty()) {
    y = path.knot_value;
    s.assign(y.size(), 0.0);
    for (std::size_t k = 1; k < y.size(); ++k) {
      const double span = path.knot_time[k] - path.knot_time[k - 1];
      s[k] = s[k - 1] + (y[k] == 0 ? y[k - 1] * span / 3 : levy_step(span, y[k - 1], y[k]));
    }
  } else {
    y = path.values;
    s.assign(y.size(), 0.0);
    for (std::size_t k = 1; k < y.size(); ++k) s[k] = s[k - 1] + 0.5 * path.dt * (y[k - 1] + y[k]);
  }
  LevyPath out;
  out.dt = dt;
  const double total = s.back();
  if (total <= 0) {
    out.values = {y.empty() ? 0.0 : y.front()};
    return out;
  }
  const auto steps = static_cast<std::size_t>(std::floor(total / dt + 1e-9));
  out.values.resize(steps + 1);
  std::size_t k = 0;
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = dt * static_cast<double>(i);
    while (k + 2 < s.size() && s[k + 1] <= t) ++k;
    const double span = s[k + 1] - s[k];
    const double w = span > 0 ? std::clamp((t - s[k]) / span, 0.0, 1.0) : 1.0;
    out.values[i] = y[k] + w * (y[k + 1] - y[k]);
  }
  return out;
}

CsbpPath sample_csbp(double y0, double c, double horizon, double dt_out, std::uint64_t seed,
                     std::uint64_t stream, const CsbpScheme& scheme) {
  if (!(y0 >= 0) || !(c > 0) || !(horizon > 0) || !(dt_out > 0))
    throw std::invalid_argument("sample_csbp: need y0 >= 0 and c, horizon, dt_out > 0");
  CsbpPath out;
  out.y0 = y0;
  out.c = c;
  out.dt = dt_out;
  if (y0 == 0) {
    out.values.assign(static_cast<std::size_t>(std::llround(horizon / dt_out)) + 1, 0.0);
    out.extinction_time = 0;
    return out;
  }
  KnotBuilder knots(out, y0);
  StableIncrements source(seed, stream, +1);
  double x = y0;
  while (knots.theta() < horizon) {
    if (x < scheme.floor * y0) {
      // The remaining extinction time from x has P(zeta <= s) = exp(-x / (c s)^2).
      RandomStream terminal(seed, stream | (1ull << 62));
      knots.extinguish(std::sqrt(x / terminal.exponential()) / c);
      break;
    }
    const double ds = std::min(scheme.dtheta_max * x, std::pow(scheme.eta * x, 1.5) / (2 * c));
    x += std::pow(2 * c * ds, 2.0 / 3.0) * source.next();
    if (!knots.push(ds, x)) break;
  }
  fill_uniform_grid(out, horizon);
  return out;
}

double csbp_survival_exact(double y0, double c, double alpha, double t) {
  if (!(y0 > 0 && c > 0 && t > 0) || !(alpha > 1 && alpha < 2)) {
    throw std::domain_error("csbp_survival_exact: need y0, c, t > 0 and alpha in (1, 2)");
  }
  return -std::expm1(-y0 * std::pow(c * t, 1 / (1 - alpha)));
}

double csbp_laplace_exact(double y0, double c, double alpha, double t, double lambda) {
  if (!(y0 > 0 && c > 0 && t > 0 && lambda > 0) || !(alpha > 1 && alpha < 2)) {
    throw std::domain_error("csbp_laplace_exact: need positive arguments and alpha in (1, 2)");
  }
  const double u = std::pow(std::pow(lambda, 1 - alpha) + c * t, 1 / (1 - alpha));
  return std::exp(-y0 * u);
}

namespace {

template <class Stat>
stats::MeanAccumulator csbp_mean(double y0, double c, double t, std::size_t n, std::uint64_t seed,
                                 unsigned workers, const CsbpScheme& scheme, Stat stat) {
  constexpr std::size_t kTask = 1000;
  const std::size_t tasks = (n + kTask - 1) / kTask;
  std::vector<stats::MeanAccumulator> parts(tasks);
  parallel_for(tasks, workers, [&](std::size_t task) {
    for (std::size_t i = task * kTask; i < std::min(n, (task + 1) * kTask); ++i) {
      const CsbpPath p = sample_csbp(y0, c, t, t, seed, i, scheme);
      parts[task].add(stat(p.value_at(t)));
    }
  });
  stats::MeanAccumulator total;
  for (const auto& part : parts) total.merge(part);
  return total;
}

}  // namespace

EstimateReport csbp_laplace_check(double y0, double c, double alpha, double t, double lambda,
                                  std::size_t n_samples, std::uint64_t seed, unsigned workers,
                                  const CsbpScheme& scheme) {
  if (alpha != kAlpha) throw std::domain_error("csbp_laplace_check: only alpha = 3/2 is simulated");
  const double exact = csbp_laplace_exact(y0, c, alpha, t, lambda);
  const auto acc = csbp_mean(y0, c, t, n_samples, seed, workers, scheme,
                             [&](double y) { return std::exp(-lambda * y); });
  EstimateReport r;
  r.name = "csbp_laplace";
  r.estimate = acc.mean();
  r.stderr_ = acc.stderr_of_mean();
  r.n = acc.count();
  r.seed = seed;
  r.params = {{"y0", y0}, {"c", c}, {"alpha", alpha}, {"t", t}, {"lambda", lambda}, {"exact", exact},
              {"eta", scheme.eta}, {"dtheta_max", scheme.dtheta_max}};
  return r;
}

EstimateReport csbp_survival_check(double y0, double c, double t, std::size_t n_samples,
                                   std::uint64_t seed, unsigned workers, const CsbpScheme& scheme) {
  const double exact = csbp_survival_exact(y0, c, kAlpha, t);
  const auto acc = csbp_mean(y0, c, t, n_samples, seed, workers, scheme,
                             [](double y) { return y > 0 ? 1.0 : 0.0; });
  EstimateReport r;
  r.name = "csbp_survival";
  r.estimate = acc.mean();
  r.stderr_ = stats::binomial_stderr(acc.mean(), acc.count());
  r.n = acc.count();
  r.seed = seed;
  r.params = {{"y0", y0}, {"c", c}, {"t", t}, {"exact", exact}, {"eta", scheme.eta}, {"dtheta_max", scheme.dtheta_max}};
  return r;
}

}  // namespace lqg::levy
