#include "lqg/gmc/walk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lqg/common/parallel.hpp"
#include "lqg/common/stats.hpp"

namespace lqg::gmc {

LiouvilleWalk::LiouvilleWalk(const LatticeField& field, const GmcMeasure& measure, std::size_t start,
                             std::uint64_t seed, std::uint64_t stream, bool exponential_holding)
    : field_(&field), measure_(&measure), rng_(seed, stream), exponential_(exponential_holding) {
  if (start >= field.size()) throw std::out_of_range("LiouvilleWalk: start out of range");
  if (measure.cell_mass.size() != field.size()) throw std::invalid_argument("LiouvilleWalk: measure does not match field");
  state_.position = start;
  degree_ = lattice_neighbors(field.n, field.periodic, start, nb_);
}

double LiouvilleWalk::draw_hold() {
  const double mean = 2 * measure_->cell_mass[state_.position] / static_cast<double>(degree_);
  const std::uint64_t bits = rng_();
  pending_ = bits;
  if (!exponential_) return mean;
  const double u = (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
  return -mean * std::log(u);
}

void LiouvilleWalk::jump() {
  // The holding uniform uses only the top 53 bits of the draw.
  const std::size_t pick = degree_ == 4 ? static_cast<std::size_t>(pending_ & 3)
                                        : std::min(degree_ - 1, static_cast<std::size_t>(rng_.uniform() * static_cast<double>(degree_)));
  state_.position = nb_[pick];
  ++state_.steps;
  degree_ = lattice_neighbors(field_->n, field_->periodic, state_.position, nb_);
}

std::vector<WalkState> liouville_walk(const LatticeField& field, const GmcMeasure& measure, std::size_t start,
                                      double budget, std::uint64_t seed, std::uint64_t stream,
                                      bool exponential_holding) {
  if (!(budget > 0)) throw std::invalid_argument("liouville_walk: budget must be positive");
  LiouvilleWalk walk(field, measure, start, seed, stream, exponential_holding);
  std::vector<WalkState> out{walk.state()};
  for (;;) {
    WalkState held = walk.state();
    const double h = walk.draw_hold();
    if (held.clock + h >= budget) {
      held.clock = budget;
      out.push_back(held);
      return out;
    }
    walk.step_with(h);
    out.push_back(walk.state());
  }
}

ExitCurve exit_time_curve(const LatticeField& field, const GmcMeasure& measure, std::span<const double> distances,
                          std::span<const double> radii, std::size_t n_walks, std::uint64_t seed, unsigned workers,
                          bool exponential_holding) {
  if (distances.size() != field.size()) throw std::invalid_argument("exit_time_curve: distance table does not match field");
  if (radii.empty() || !std::is_sorted(radii.begin(), radii.end()))
    throw std::invalid_argument("exit_time_curve: radii must be non-empty and sorted");
  const auto center = static_cast<std::size_t>(std::min_element(distances.begin(), distances.end()) - distances.begin());
  const double eccentricity = *std::max_element(distances.begin(), distances.end());
  const double r_max = radii.back();
  if (r_max > eccentricity / 4)
    throw std::invalid_argument("exit_time_curve: radius exceeds a quarter of the eccentricity");
  if (!field.periodic) {
    const std::size_t n = field.n;
    for (std::size_t v = 0; v < field.size(); ++v) {
      const std::size_t i = v / n, j = v % n;
      if ((i == 0 || j == 0 || i + 1 == n || j + 1 == n) && distances[v] <= r_max)
        throw std::invalid_argument("exit_time_curve: ball touches the domain boundary");
    }
  }
  constexpr std::size_t kTask = 50;
  const std::size_t tasks = (n_walks + kTask - 1) / kTask;
  std::vector<std::vector<stats::MeanAccumulator>> parts(tasks, std::vector<stats::MeanAccumulator>(radii.size()));
  parallel_for(tasks, workers, [&](std::size_t task) {
    for (std::size_t w = task * kTask; w < std::min(n_walks, (task + 1) * kTask); ++w) {
      LiouvilleWalk walk(field, measure, center, seed, w, exponential_holding);
      std::size_t next = 0;
      for (;;) {
        const WalkState& s = walk.state();
        while (next < radii.size() && distances[s.position] > radii[next]) parts[task][next++].add(s.clock);
        if (next == radii.size()) break;
        walk.step();
      }
    }
  });
  ExitCurve out;
  out.walks = n_walks;
  out.radii.assign(radii.begin(), radii.end());
  for (std::size_t r = 0; r < radii.size(); ++r) {
    stats::MeanAccumulator total;
    for (const auto& p : parts) total.merge(p[r]);
    out.mean.push_back(total.mean());
    out.stderr_.push_back(total.stderr_of_mean());
  }
  return out;
}

}  // namespace lqg::gmc
