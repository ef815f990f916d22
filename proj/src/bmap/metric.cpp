#include "lqg/bmap/metric.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace lqg::bmap {

SnakeMetric::SnakeMetric(const SnakeSample& sample)
    : sample_(&sample), y_min_(sample.Y), x_min_(sample.contour.X), vertex_(tree_vertices(sample.contour)) {
  const auto& Y = sample.Y;
  if (Y.size() != sample.contour.X.size()) throw std::invalid_argument("SnakeMetric: label/contour size mismatch");
  prefix_min_.resize(Y.size());
  suffix_min_.resize(Y.size());
  for (std::size_t i = 0; i < Y.size(); ++i) prefix_min_[i] = i ? std::min(prefix_min_[i - 1], Y[i]) : Y[i];
  for (std::size_t i = Y.size(); i-- > 0;)
    suffix_min_[i] = i + 1 < Y.size() ? std::min(suffix_min_[i + 1], Y[i]) : Y[i];
  reps_.resize(*std::max_element(vertex_.begin(), vertex_.end()) + 1);
  for (std::size_t i = 0; i < vertex_.size(); ++i) reps_[vertex_[i]].push_back(i);
}

double SnakeMetric::d_circ(std::size_t s, std::size_t t) const {
  if (s == t) return 0;
  const auto [lo, hi] = std::minmax(s, t);
  const double inner = y_min_.min(lo, hi);
  const double outer = std::min(prefix_min_[lo], suffix_min_[hi]);
  const auto& Y = sample_->Y;
  return Y[s] + Y[t] - 2 * std::max(inner, outer);
}

double SnakeMetric::m_X(std::size_t s, std::size_t t) const {
  const auto [lo, hi] = std::minmax(s, t);
  const auto& X = sample_->contour.X;
  return X[s] + X[t] - 2 * x_min_.min(lo, hi);
}

double LandmarkDistances::diameter() const { return chain.empty() ? 0.0 : *std::max_element(chain.begin(), chain.end()); }

LandmarkDistances landmark_distances(const SnakeMetric& metric, std::vector<std::size_t> landmarks) {
  LandmarkDistances out;
  out.landmarks = std::move(landmarks);
  const std::size_t m = out.size();
  const auto& reps = metric.representatives();
  const auto& vertex = metric.vertex();
  out.edge.assign(m * m, 0.0);
  for (std::size_t a = 0; a < m; ++a) {
    const auto& ra = reps[vertex[out.landmarks[a]]];
    for (std::size_t b = a + 1; b < m; ++b) {
      const auto& rb = reps[vertex[out.landmarks[b]]];
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i : ra) {
        for (std::size_t j : rb) best = std::min(best, metric.d_circ(i, j));
      }
      out.edge[a * m + b] = out.edge[b * m + a] = best;
    }
  }
  out.chain = out.edge;
  auto& d = out.chain;
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t i = 0; i < m; ++i) {
      const double dik = d[i * m + k];
      double* row = &d[i * m];
      const double* via = &d[k * m];
      for (std::size_t j = 0; j < m; ++j) row[j] = std::min(row[j], dik + via[j]);
    }
  }
  return out;
}

LandmarkDistances map_distance_matrix(const SnakeMetric& metric, std::size_t m, std::size_t memory_budget) {
  const std::size_t n = metric.sample().contour.n;
  if (m == 0 || m > n) throw std::invalid_argument("map_distance_matrix: need 1 <= m <= n");
  const std::size_t per_entry = 2 * sizeof(double);
  if ((m + 1) * (m + 1) * per_entry > memory_budget) {
    std::size_t fit = 1;
    while ((fit + 2) * (fit + 2) * per_entry <= memory_budget) ++fit;
    throw std::length_error("map_distance_matrix: m = " + std::to_string(m) + " exceeds the memory budget; use m <= " +
                            std::to_string(fit));
  }
  std::vector<std::size_t> landmarks;
  for (std::size_t k = 0; k < m; ++k) landmarks.push_back(k * n / m);
  landmarks.push_back(metric.sample().root);
  return landmark_distances(metric, std::move(landmarks));
}

std::vector<double> distances_from(const SnakeMetric& metric, const LandmarkDistances& lm, std::size_t center) {
  const auto& sample = metric.sample();
  const auto& Y = sample.Y;
  const std::size_t n = sample.contour.n;
  const auto& reps = metric.representatives();
  const auto& vertex = metric.vertex();
  std::vector<double> prefix(n + 1), suffix(n + 1);
  for (std::size_t i = 0; i <= n; ++i) prefix[i] = i ? std::min(prefix[i - 1], Y[i]) : Y[i];
  for (std::size_t i = n + 1; i-- > 0;) suffix[i] = i < n ? std::min(suffix[i + 1], Y[i]) : Y[i];

  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  for (std::size_t l = 0; l < lm.size(); ++l) {
    const double base = lm.chain_at(center, l);
    for (std::size_t r : reps[vertex[lm.landmarks[l]]]) {
      // Sweep away from r so the inner minimum is a running minimum.
      double inner = Y[r];
      for (std::size_t x = r; x < n; ++x) {
        inner = std::min(inner, Y[x]);
        const double d = Y[r] + Y[x] - 2 * std::max(inner, std::min(prefix[r], suffix[x]));
        dist[x] = std::min(dist[x], base + d);
      }
      inner = Y[r];
      for (std::size_t x = std::min(r, n); x-- > 0;) {
        inner = std::min(inner, Y[x]);
        const double d = Y[r] + Y[x] - 2 * std::max(inner, std::min(prefix[x], suffix[r]));
        dist[x] = std::min(dist[x], base + d);
      }
    }
  }
  std::vector<double> by_vertex(reps.size(), std::numeric_limits<double>::infinity());
  for (std::size_t x = 0; x < n; ++x) by_vertex[vertex[x]] = std::min(by_vertex[vertex[x]], dist[x]);
  for (std::size_t x = 0; x < n; ++x) dist[x] = by_vertex[vertex[x]];
  return dist;
}

BallVolumeCurve ball_volume_curve(const SnakeMetric& metric, const LandmarkDistances& lm, std::size_t center,
                                  std::span<const double> radii) {
  auto dist = distances_from(metric, lm, center);
  std::sort(dist.begin(), dist.end());
  BallVolumeCurve out;
  out.radii.assign(radii.begin(), radii.end());
  for (double r : radii) {
    const auto inside = std::upper_bound(dist.begin(), dist.end(), r) - dist.begin();
    out.fraction.push_back(static_cast<double>(inside) / static_cast<double>(dist.size()));
  }
  return out;
}

}  // namespace lqg::bmap
