#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lqg/common/rng.hpp"
#include "lqg/gmc/field.hpp"
#include "lqg/gmc/lfpp.hpp"

namespace lqg::gmc {

struct WalkState {
  std::size_t position = 0;
  double clock = 0;  // Liouville time
  std::uint64_t steps = 0;

  bool operator==(const WalkState&) const = default;
};

/// Continuous-time nearest-neighbour walk reversible for mu: each edge out of
/// x fires at rate 1 / (2 mu(x)), so the holding time at a vertex with k
/// neighbours has mean 2 mu(x) / k (mu(x) / 2 on the torus, the Liouville
/// time a planar Brownian motion spends per lattice step).
class LiouvilleWalk {
public:
  LiouvilleWalk(const LatticeField& field, const GmcMeasure& measure, std::size_t start, std::uint64_t seed,
                std::uint64_t stream, bool exponential_holding = true);

  const WalkState& state() const { return state_; }
  /// Holding time at the current vertex; the jump happens at the end of it.
  double draw_hold();
  /// Jump to a uniformly chosen neighbour.
  void jump();
  /// draw_hold() followed by jump(); returns the holding time.
  double step() { return step_with(draw_hold()); }
  /// Spend a holding time obtained from draw_hold(), then jump.
  double step_with(double hold) {
    state_.clock += hold;
    jump();
    return hold;
  }

private:
  const LatticeField* field_;
  const GmcMeasure* measure_;
  RandomStream rng_;
  bool exponential_;
  WalkState state_;
  std::array<std::size_t, 4> nb_{};
  std::size_t degree_ = 0;
  std::uint64_t pending_ = 0;  // bits of the last holding draw; the low two pick the jump
};

/// Trajectory of states up to Liouville time `budget`; the last state is the
/// position held at `budget` with its clock truncated to it.
std::vector<WalkState> liouville_walk(const LatticeField& field, const GmcMeasure& measure, std::size_t start,
                                      double budget, std::uint64_t seed, std::uint64_t stream = 0,
                                      bool exponential_holding = true);

struct ExitCurve {
  std::vector<double> radii, mean, stderr_;
  std::size_t walks = 0;
};

/// Mean Liouville exit time from the LFPP balls B(center, r). One walk serves
/// all radii since the balls are nested. Radii must be sorted, at most a quarter
/// of the eccentricity of the center, and (on a box) keep the ball off the boundary.
ExitCurve exit_time_curve(const LatticeField& field, const GmcMeasure& measure, std::span<const double> distances,
                          std::span<const double> radii, std::size_t n_walks, std::uint64_t seed, unsigned workers = 1,
                          bool exponential_holding = true);

}  // namespace lqg::gmc
