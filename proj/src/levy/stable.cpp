#include "lqg/levy/stable.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lqg/simd/kernels.hpp"

namespace lqg::levy {

namespace {

constexpr std::size_t kBlock = 1024;
constexpr std::uint64_t kSpareStreamBit = 1ull << 63;

// sigma = 2^{-1/3} gives E exp(lambda X) = exp(lambda^{3/2}) for skew -1.
const simd::StableParams kUnit{kAlpha, -1.0, std::cbrt(0.5)};

}  // namespace

double levy_measure_tail(double u) { return std::pow(u, -1.5) / (2 * std::sqrt(std::numbers::pi)); }

StableIncrements::StableIncrements(std::uint64_t seed, std::uint64_t stream, int direction)
    : rng_(seed, stream),
      spare_(seed, stream | kSpareStreamBit),
      sign_(direction < 0 ? 1.0 : -1.0),
      u_angle_(kBlock),
      u_exp_(kBlock),
      block_(kBlock),
      pos_(kBlock) {}

void StableIncrements::refill() {
  rng_.fill_uniform(u_angle_);
  rng_.fill_uniform(u_exp_);
  simd::stable_from_uniforms(u_angle_, u_exp_, block_, kUnit);
  for (std::size_t i = 0; i < kBlock; ++i) {
    while (!std::isfinite(block_[i])) {
      double ua[1] = {spare_.uniform()}, ue[1] = {spare_.uniform()};
      simd::scalar::stable_from_uniforms(ua, ue, std::span<double>(&block_[i], 1), kUnit);
      ++resampled_;
    }
    block_[i] *= sign_;
  }
  pos_ = 0;
}

LevyPath sample_levy(double horizon, double dt, double x0, std::uint64_t seed, std::uint64_t stream,
                     const LevyOptions& options) {
  if (!(dt > 0) || !(horizon > dt)) throw std::invalid_argument("sample_levy: need horizon > dt > 0");
  const auto steps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
  StableIncrements source(seed, stream, options.direction);
  const double scale = std::pow(options.rate * dt, 2.0 / 3.0);
  const double threshold = -options.jump_threshold * std::pow(dt, 2.0 / 3.0);
  LevyPath path;
  path.dt = dt;
  path.values.resize(steps + 1);
  path.values[0] = x0;
  for (std::size_t k = 1; k <= steps; ++k) {
    const double dx = scale * source.next();
    path.values[k] = path.values[k - 1] + dx;
    if (options.log_jumps && options.direction < 0 && dx < threshold) {
      path.jump_log.push_back({path.time(k), dx});
    }
  }
  path.resampled = source.resampled();
  return path;
}

Extrema running_extrema(const LevyPath& path) {
  if (path.values.empty()) throw std::invalid_argument("running_extrema: empty path");
  Extrema e;
  e.inf.resize(path.values.size());
  e.sup.resize(path.values.size());
  e.inf[0] = e.sup[0] = path.values[0];
  for (std::size_t i = 1; i < path.values.size(); ++i) {
    e.inf[i] = std::min(e.inf[i - 1], path.values[i]);
    e.sup[i] = std::max(e.sup[i - 1], path.values[i]);
  }
  return e;
}

double hit_tolerance(double dt) { return 3.0 * std::pow(dt, 2.0 / 3.0); }

std::size_t first_return_index(const LevyPath& path, double tol, double t_start) {
  const auto start = static_cast<std::size_t>(std::ceil(t_start / path.dt - 1e-9));
  double inf = path.values[0];
  for (std::size_t i = 0; i < path.values.size(); ++i) {
    inf = std::min(inf, path.values[i]);
    if (i >= start && path.values[i] - inf <= tol) return i;
  }
  return static_cast<std::size_t>(-1);
}

StoppingRecord stopping_record(const LevyPath& p1, const LevyPath& p2, double tol) {
  if (p1.dt != p2.dt || p1.values.size() != p2.values.size()) {
    throw std::invalid_argument("stopping_record: paths must share one grid");
  }
  if (p1.horizon() < 1.0 - 1e-12) throw std::invalid_argument("stopping_record: horizon must be >= 1");
  StoppingRecord rec;
  const std::size_t npos = static_cast<std::size_t>(-1);
  const std::size_t k1 = first_return_index(p1, tol), k2 = first_return_index(p2, tol);
  if (k1 != npos) rec.tau1 = p1.time(k1);
  if (k2 != npos) rec.tau2 = p2.time(k2);
  rec.tau = std::min(rec.tau1, rec.tau2);
  const std::size_t k = std::min(k1, k2);
  const LevyPath* paths[2] = {&p1, &p2};
  for (int j = 0; j < 2; ++j) {
    rec.X_tau[j] = rec.I_tau[j] = rec.S_tau[j] = std::nan("");
    if (k == npos) continue;
    const auto& v = paths[j]->values;
    rec.X_tau[j] = v[k];
    rec.I_tau[j] = *std::min_element(v.begin(), v.begin() + k + 1);
    rec.S_tau[j] = *std::max_element(v.begin(), v.begin() + k + 1);
  }
  return rec;
}

StoppingRecord sample_stopping_record(double dt, double initial_horizon, int max_doublings,
                                      std::uint64_t seed, std::uint64_t stream) {
  LevyOptions opts;
  opts.log_jumps = false;
  double horizon = std::max(initial_horizon, 1.0);
  for (int d = 0;; ++d) {
    const LevyPath p1 = sample_levy(horizon, dt, 0.0, seed, 2 * stream, opts);
    const LevyPath p2 = sample_levy(horizon, dt, 0.0, seed, 2 * stream + 1, opts);
    const StoppingRecord rec = stopping_record(p1, p2, hit_tolerance(dt));
    if (!rec.censored() || d >= max_doublings) return rec;
    horizon *= 2;
  }
}

}  // namespace lqg::levy
