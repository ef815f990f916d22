#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "lqg/bmap/contour.hpp"

namespace lqg::bmap {

struct SnakeSample {
  ContourExcursion contour;
  std::vector<double> Y;
  std::size_t root = 0;  // argmin of Y
  std::uint64_t seed = 0;
};

/// Labels with cov(Y_s, Y_t) = min_{[s, t]} X, sampled exactly on the grid:
/// the labels along the current ancestral line are kept on a stack, fresh
/// branch points get Brownian increments and points revealed by descending
/// inside a segment get Brownian-bridge values.
SnakeSample snake_labels(const ContourExcursion& contour, std::uint64_t seed);

/// First index of the minimum.
std::size_t root_index(std::span<const double> Y);

/// Header (n, variant, seed) as u64, then X and Y as f64, little-endian.
void save_snake(const SnakeSample& sample, const std::filesystem::path& path);
SnakeSample load_snake(const std::filesystem::path& path);

}  // namespace lqg::bmap
