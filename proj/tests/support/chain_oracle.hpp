#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <vector>

#include "lqg/bmap/snake.hpp"

namespace oracle {

// Direct O(n) evaluation of d_circ from the definition.
inline double d_circ(const lqg::bmap::SnakeSample& s, std::size_t a, std::size_t b) {
  const auto& Y = s.Y;
  const auto lo = std::min(a, b), hi = std::max(a, b);
  double inner = Y[lo], outer = Y[hi];
  for (std::size_t i = lo; i <= hi; ++i) inner = std::min(inner, Y[i]);
  for (std::size_t i = 0; i <= lo; ++i) outer = std::min(outer, Y[i]);
  for (std::size_t i = hi; i < Y.size(); ++i) outer = std::min(outer, Y[i]);
  return Y[a] + Y[b] - 2 * std::max(inner, outer);
}

// All contour indices identified with i in the tree.
inline std::vector<std::size_t> same_point(const lqg::bmap::SnakeSample& s, std::size_t i) {
  const auto& X = s.contour.X;
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < X.size(); ++j) {
    const auto lo = std::min(i, j), hi = std::max(i, j);
    if (X[j] == X[i] && *std::min_element(X.begin() + lo, X.begin() + hi + 1) == X[i]) out.push_back(j);
  }
  return out;
}

// Minimum over every chain of distinct landmarks from a to b of the summed
// one-link values, by exhaustive enumeration.
inline std::vector<double> chain_infimum(const lqg::bmap::SnakeSample& s, const std::vector<std::size_t>& landmarks) {
  const std::size_t m = landmarks.size();
  std::vector<double> w(m * m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i : same_point(s, landmarks[a]))
        for (std::size_t j : same_point(s, landmarks[b])) best = std::min(best, d_circ(s, i, j));
      w[a * m + b] = best;
    }
  }
  std::vector<double> out(m * m, std::numeric_limits<double>::infinity());
  std::vector<bool> used(m, false);
  std::function<void(std::size_t, std::size_t, double)> walk = [&](std::size_t start, std::size_t at, double len) {
    out[start * m + at] = std::min(out[start * m + at], len);
    for (std::size_t next = 0; next < m; ++next) {
      if (used[next]) continue;
      used[next] = true;
      walk(start, next, len + w[at * m + next]);
      used[next] = false;
    }
  };
  for (std::size_t a = 0; a < m; ++a) {
    used.assign(m, false);
    used[a] = true;
    walk(a, a, 0.0);
  }
  return out;
}

}  // namespace oracle
