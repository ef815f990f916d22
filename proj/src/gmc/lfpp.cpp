#include "lqg/gmc/lfpp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace lqg::gmc {

std::size_t lattice_neighbors(std::size_t n, bool periodic, std::size_t v, std::array<std::size_t, 4>& out) {
  const std::size_t i = v / n, j = v % n;
  std::size_t k = 0;
  if (periodic) {
    out[k++] = ((i + n - 1) % n) * n + j;
    out[k++] = ((i + 1) % n) * n + j;
    out[k++] = i * n + (j + n - 1) % n;
    out[k++] = i * n + (j + 1) % n;
    return k;
  }
  if (i > 0) out[k++] = v - n;
  if (i + 1 < n) out[k++] = v + n;
  if (j > 0) out[k++] = v - 1;
  if (j + 1 < n) out[k++] = v + 1;
  return k;
}

LfppMetric::LfppMetric(const LatticeField& field, double xi) : n_(field.n), periodic_(field.periodic), xi_(xi) {
  if (field.h.size() != field.size()) throw std::invalid_argument("LfppMetric: malformed field");
  weight_.resize(field.size());
  const double root = std::sqrt(1 / static_cast<double>(n_));
  for (std::size_t v = 0; v < field.size(); ++v) weight_[v] = std::exp(0.5 * xi * field.h[v]) * root;
}

double LfppMetric::edge_length(std::size_t u, std::size_t v) const { return weight_[u] * weight_[v]; }

std::vector<double> LfppMetric::distances_from(std::size_t source) const {
  const std::size_t size = n_ * n_;
  if (source >= size) throw std::out_of_range("LfppMetric: source out of range");
  std::vector<double> dist(size, std::numeric_limits<double>::infinity());
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  dist[source] = 0;
  queue.emplace(0.0, source);
  std::array<std::size_t, 4> nb;
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    const std::size_t k = lattice_neighbors(n_, periodic_, u, nb);
    for (std::size_t e = 0; e < k; ++e) {
      const std::size_t v = nb[e];
      const double candidate = d + weight_[u] * weight_[v];
      if (candidate < dist[v]) {
        dist[v] = candidate;
        queue.emplace(candidate, v);
      }
    }
  }
  return dist;
}

double LfppMetric::distance(std::size_t a, std::size_t b) const { return distances_from(a).at(b); }

std::vector<std::size_t> LfppMetric::ball(std::size_t source, double r) const {
  const auto dist = distances_from(source);
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < dist.size(); ++v) {
    if (dist[v] <= r) out.push_back(v);
  }
  std::stable_sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
  return out;
}

VolumeCurve ball_mass_curve(std::span<const double> distances, const GmcMeasure& measure,
                            std::span<const double> radii) {
  if (distances.size() != measure.cell_mass.size()) throw std::invalid_argument("ball_mass_curve: size mismatch");
  std::vector<std::size_t> order(distances.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return distances[a] < distances[b]; });
  VolumeCurve out;
  out.radii.assign(radii.begin(), radii.end());
  std::vector<double> sorted_r(radii.begin(), radii.end());
  std::sort(sorted_r.begin(), sorted_r.end());
  std::size_t k = 0;
  double mass = 0;
  std::vector<double> at_sorted;
  for (double r : sorted_r) {
    while (k < order.size() && distances[order[k]] <= r) mass += measure.cell_mass[order[k++]];
    at_sorted.push_back(mass);
  }
  for (double r : radii) {
    const auto pos = std::lower_bound(sorted_r.begin(), sorted_r.end(), r) - sorted_r.begin();
    out.mass.push_back(at_sorted[static_cast<std::size_t>(pos)]);
  }
  return out;
}

}  // namespace lqg::gmc
