#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace lqg::bmap {

enum class ContourVariant : std::uint64_t { brownian = 0, dyck = 1 };

std::string to_string(ContourVariant v);
ContourVariant parse_variant(const std::string& name);

/// Excursion sampled at times i / n, i = 0..n.
struct ContourExcursion {
  std::size_t n = 0;  // contour steps
  ContourVariant variant = ContourVariant::dyck;
  std::vector<double> X;

  double time(std::size_t i) const { return static_cast<double>(i) / static_cast<double>(n); }
};

/// Both variants have 2n contour steps.
/// brownian: normalized excursion, the Vervaat transform of a Gaussian bridge.
/// dyck: uniform Dyck path of length 2n, heights scaled by n^{-1/2}.
ContourExcursion sample_contour(std::size_t n, ContourVariant variant, std::uint64_t seed);

/// Sparse-table range minimum over a fixed array, O(1) per query.
class RangeMin {
public:
  RangeMin() = default;
  explicit RangeMin(std::span<const double> values);

  /// Minimum over the closed index range [i, j], i <= j.
  double min(std::size_t i, std::size_t j) const;
  std::size_t size() const { return levels_.empty() ? 0 : levels_[0].size(); }

private:
  std::vector<std::vector<double>> levels_;
};

/// m_X(s, t) = X_s + X_t - 2 min_{[s ^ t, s v t]} X.
double tree_pseudometric(const ContourExcursion& contour, std::size_t s, std::size_t t);

/// Tree vertex of every contour index: indices i, j share a vertex when
/// X_i = X_j = min_{[i, j]} X. Ids are assigned in order of first visit.
std::vector<std::size_t> tree_vertices(const ContourExcursion& contour);

}  // namespace lqg::bmap
