#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace lqg::gmc {

inline constexpr double kGamma = 1.6329931618554521;  // sqrt(8/3)
inline constexpr double kDimension = 4.0;
inline constexpr double kXi = kGamma / kDimension;

/// Discrete GFF on an n x n lattice of the unit square, vertex (i, j) at
/// index i n + j, normalized so that Cov(h(x), h(y)) ~ -log|x - y|.
struct LatticeField {
  std::size_t n = 0;
  bool periodic = true;
  std::uint64_t seed = 0;
  std::vector<double> h;
  std::vector<double> variance;  // exact E[h(x)^2]

  std::size_t size() const { return n * n; }
  std::size_t index(std::size_t i, std::size_t j) const { return i * n + j; }
};

/// Spectral synthesis with variance 2 pi / lambda per Laplacian eigenmode:
/// FFT on the torus (zero mode removed) or DST-I with Dirichlet boundary.
LatticeField sample_gff(std::size_t n, bool periodic, std::uint64_t seed);

/// h = 0 with zero variance: the flat control.
LatticeField flat_field(std::size_t n, bool periodic = true);

struct GmcMeasure {
  double gamma = kGamma;
  std::vector<double> cell_mass;
  double total = 0;
};

/// exp(gamma h - gamma^2 Var h / 2) times the cell area 1 / n^2.
GmcMeasure gmc_mass(const LatticeField& field, double gamma = kGamma);

/// Header (n: u64, gamma: f64, xi: f64, seed: u64), then h, variance and
/// cell masses as f64, little-endian.
void save_field(const LatticeField& field, const GmcMeasure& measure, double xi, const std::filesystem::path& path);

struct StoredField {
  LatticeField field;
  GmcMeasure measure;
  double xi = kXi;
};

StoredField load_field(const std::filesystem::path& path);

}  // namespace lqg::gmc
