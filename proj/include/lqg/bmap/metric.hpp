#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lqg/bmap/contour.hpp"
#include "lqg/bmap/snake.hpp"

namespace lqg::bmap {

/// O(1) evaluation of d_circ and m_X on one snake.
class SnakeMetric {
public:
  explicit SnakeMetric(const SnakeSample& sample);

  /// Y_s + Y_t - 2 max(min_{[s, t]} Y, min_{[t, s]} Y), the second interval circular.
  double d_circ(std::size_t s, std::size_t t) const;
  double m_X(std::size_t s, std::size_t t) const;

  const SnakeSample& sample() const { return *sample_; }
  const std::vector<std::size_t>& vertex() const { return vertex_; }
  /// Contour indices of each tree vertex.
  const std::vector<std::vector<std::size_t>>& representatives() const { return reps_; }

private:
  const SnakeSample* sample_;
  RangeMin y_min_, x_min_;
  std::vector<double> prefix_min_, suffix_min_;
  std::vector<std::size_t> vertex_;
  std::vector<std::vector<std::size_t>> reps_;
};

struct LandmarkDistances {
  std::vector<std::size_t> landmarks;  // contour index of each landmark; the root is last
  std::vector<double> edge;            // m x m, min of d_circ over representatives
  std::vector<double> chain;           // m x m, all-pairs shortest paths over `edge`

  std::size_t size() const { return landmarks.size(); }
  double edge_at(std::size_t a, std::size_t b) const { return edge[a * size() + b]; }
  double chain_at(std::size_t a, std::size_t b) const { return chain[a * size() + b]; }
  std::size_t root() const { return size() - 1; }
  double diameter() const;
};

/// m evenly spaced contour indices plus the root. Throws std::length_error
/// naming the largest m that fits when the two m x m tables exceed
/// memory_budget bytes.
LandmarkDistances map_distance_matrix(const SnakeMetric& metric, std::size_t m,
                                      std::size_t memory_budget = std::size_t{1} << 30);

/// Chain distances on an explicit landmark list.
LandmarkDistances landmark_distances(const SnakeMetric& metric, std::vector<std::size_t> landmarks);

/// Upper bound on d(center, x) for every contour index x < n:
/// min over landmarks l of chain(center, l) + min over representatives of d_circ(l, x).
std::vector<double> distances_from(const SnakeMetric& metric, const LandmarkDistances& lm,
                                   std::size_t center);

struct BallVolumeCurve {
  std::vector<double> radii, fraction;
};

/// Fraction of contour mass within distance r of landmark `center`.
BallVolumeCurve ball_volume_curve(const SnakeMetric& metric, const LandmarkDistances& lm,
                                  std::size_t center, std::span<const double> radii);

}  // namespace lqg::bmap
