#include "lqg/bmap/contour.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "lqg/common/rng.hpp"

namespace lqg::bmap {

std::string to_string(ContourVariant v) { return v == ContourVariant::dyck ? "dyck" : "brownian"; }

ContourVariant parse_variant(const std::string& name) {
  if (name == "dyck") return ContourVariant::dyck;
  if (name == "brownian") return ContourVariant::brownian;
  throw std::invalid_argument("unknown contour variant '" + name + "'");
}

namespace {

std::vector<double> vervaat_bridge(std::size_t n, RandomStream& rng) {
  std::vector<double> w(n + 1, 0.0);
  const double sd = 1 / std::sqrt(static_cast<double>(n));
  for (std::size_t k = 1; k <= n; ++k) w[k] = w[k - 1] + sd * rng.normal();
  const double end = w[n];
  for (std::size_t k = 0; k <= n; ++k) w[k] -= end * static_cast<double>(k) / static_cast<double>(n);
  const auto m = static_cast<std::size_t>(std::min_element(w.begin(), w.end() - 1) - w.begin());
  std::vector<double> x(n + 1);
  for (std::size_t k = 0; k < n; ++k) x[k] = w[(m + k) % n] - w[m];
  x[n] = 0;
  return x;
}

// Cycle lemma: a uniform arrangement of h up-steps and h + 1 down-steps has
// exactly one rotation whose partial sums stay >= 0 before the final step;
// it starts right after the first global minimum.
std::vector<double> dyck_path(std::size_t h, RandomStream& rng) {
  std::vector<int> steps(2 * h + 1, -1);
  std::fill(steps.begin(), steps.begin() + static_cast<std::ptrdiff_t>(h), 1);
  for (std::size_t i = steps.size() - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i + 1));
    std::swap(steps[i], steps[std::min(j, i)]);
  }
  long sum = 0, best = 0;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    sum += steps[i];
    if (sum < best) {
      best = sum;
      arg = i + 1;
    }
  }
  const double scale = 1 / std::sqrt(static_cast<double>(h));
  std::vector<double> x(2 * h + 1, 0.0);
  long height = 0;
  for (std::size_t k = 0; k < 2 * h; ++k) {
    height += steps[(arg + k) % steps.size()];
    x[k + 1] = static_cast<double>(height) * scale;
  }
  return x;
}

}  // namespace

ContourExcursion sample_contour(std::size_t n, ContourVariant variant, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("sample_contour: n must be >= 2");
  RandomStream rng(seed, static_cast<std::uint64_t>(variant));
  ContourExcursion c;
  c.n = 2 * n;
  c.variant = variant;
  c.X = variant == ContourVariant::dyck ? dyck_path(n, rng) : vervaat_bridge(2 * n, rng);
  return c;
}

RangeMin::RangeMin(std::span<const double> values) {
  if (values.empty()) return;
  levels_.emplace_back(values.begin(), values.end());
  for (std::size_t w = 1; 2 * w <= values.size(); w *= 2) {
    const auto& prev = levels_.back();
    std::vector<double> next(prev.size() - w);
    for (std::size_t i = 0; i < next.size(); ++i) next[i] = std::min(prev[i], prev[i + w]);
    levels_.push_back(std::move(next));
  }
}

double RangeMin::min(std::size_t i, std::size_t j) const {
  const auto level = static_cast<std::size_t>(std::bit_width(j - i + 1) - 1);
  const auto& row = levels_[level];
  return std::min(row[i], row[j + 1 - (std::size_t{1} << level)]);
}

double tree_pseudometric(const ContourExcursion& contour, std::size_t s, std::size_t t) {
  const auto [lo, hi] = std::minmax(s, t);
  const double m = *std::min_element(contour.X.begin() + static_cast<std::ptrdiff_t>(lo),
                                     contour.X.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
  return contour.X[s] + contour.X[t] - 2 * m;
}

std::vector<std::size_t> tree_vertices(const ContourExcursion& contour) {
  std::vector<std::size_t> id(contour.X.size());
  std::vector<std::pair<double, std::size_t>> stack;
  std::size_t next = 0;
  for (std::size_t k = 0; k < contour.X.size(); ++k) {
    const double x = contour.X[k];
    while (!stack.empty() && stack.back().first > x) stack.pop_back();
    if (stack.empty() || stack.back().first < x) stack.emplace_back(x, next++);
    id[k] = stack.back().second;
  }
  return id;
}

}  // namespace lqg::bmap
