#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "lqg/common/rng.hpp"

namespace lqg::levy {

inline constexpr double kAlpha = 1.5;
inline constexpr double kNever = std::numeric_limits<double>::infinity();

/// Tail of the Levy measure of the unit process: Pi((-inf, -u)) = u^{-3/2} / (2 sqrt(pi)).
double levy_measure_tail(double u);

/// Stream of standard 3/2-stable variates X_1 with E exp(lambda X_1) = exp(lambda^{3/2})
/// (direction -1, downward jumps) or its negative (direction +1). Draws come in
/// fixed blocks from one counter-based stream, so a longer run always extends
/// a shorter one with the same (seed, stream).
class StableIncrements {
public:
  StableIncrements(std::uint64_t seed, std::uint64_t stream, int direction = -1);

  double next() {
    if (pos_ == block_.size()) refill();
    return block_[pos_++];
  }
  std::size_t resampled() const { return resampled_; }

private:
  void refill();

  RandomStream rng_;
  RandomStream spare_;
  double sign_;
  std::vector<double> u_angle_, u_exp_, block_;
  std::size_t pos_ = 0;
  std::size_t resampled_ = 0;
};

struct Jump {
  double time;
  double size;  // < 0
};

struct LevyPath {
  double alpha = kAlpha;
  double dt = 0.0;
  std::vector<double> values;  // values[i] = X at time i dt
  std::vector<Jump> jump_log;
  std::size_t resampled = 0;

  double x0() const { return values.front(); }
  double horizon() const { return dt * static_cast<double>(values.size() - 1); }
  double time(std::size_t i) const { return dt * static_cast<double>(i); }
};

struct LevyOptions {
  int direction = -1;               // -1: downward jumps only, +1: upward only
  double rate = 1.0;                // run the unit process at speed `rate`
  double jump_threshold = 10.0;     // log increments below -threshold dt^{2/3}
  bool log_jumps = true;
};

LevyPath sample_levy(double horizon, double dt, double x0, std::uint64_t seed,
                     std::uint64_t stream = 0, const LevyOptions& options = {});

struct Extrema {
  std::vector<double> inf, sup;
};

Extrema running_extrema(const LevyPath& path);

/// 3 dt^{2/3}: grid tolerance for "X = I".
double hit_tolerance(double dt);

/// First grid index with time >= t_start and X - I <= tol, or npos.
std::size_t first_return_index(const LevyPath& path, double tol, double t_start = 1.0);

struct StoppingRecord {
  double tau1 = kNever, tau2 = kNever, tau = kNever;
  // Values of (X, I, S) for each coordinate at tau; NaN when tau is censored.
  double X_tau[2], I_tau[2], S_tau[2];
  bool censored() const { return tau == kNever; }
};

StoppingRecord stopping_record(const LevyPath& p1, const LevyPath& p2, double tol);

/// Sample both coordinates with horizon doubling (up to 2^max_doublings times
/// the initial horizon) until tau is realised.
StoppingRecord sample_stopping_record(double dt, double initial_horizon, int max_doublings,
                                      std::uint64_t seed, std::uint64_t stream);

}  // namespace lqg::levy
