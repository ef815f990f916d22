#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "lqg/gmc/field.hpp"

namespace lqg::gmc {

/// Nearest-neighbour lattice graph (torus or box). Neighbours of a vertex are
/// written to `out`; the count is returned.
std::size_t lattice_neighbors(std::size_t n, bool periodic, std::size_t v, std::array<std::size_t, 4>& out);

/// LFPP metric: edge (u, v) has length exp(xi (h(u) + h(v)) / 2) / n.
class LfppMetric {
public:
  LfppMetric(const LatticeField& field, double xi = kXi);

  /// Single-source shortest paths (Dijkstra).
  std::vector<double> distances_from(std::size_t source) const;
  double distance(std::size_t a, std::size_t b) const;
  /// Vertices within distance r of the source, by increasing distance.
  std::vector<std::size_t> ball(std::size_t source, double r) const;

  double edge_length(std::size_t u, std::size_t v) const;
  std::size_t n() const { return n_; }
  bool periodic() const { return periodic_; }
  double xi() const { return xi_; }

private:
  std::size_t n_;
  bool periodic_;
  double xi_;
  std::vector<double> weight_;  // exp(xi h / 2) / sqrt(n)
};

struct VolumeCurve {
  std::vector<double> radii, mass;
};

/// mu(B(center, r)) for each radius.
VolumeCurve ball_mass_curve(std::span<const double> distances, const GmcMeasure& measure,
                            std::span<const double> radii);

}  // namespace lqg::gmc
