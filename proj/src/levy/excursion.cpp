#include "lqg/levy/excursion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lqg::levy {

std::vector<ExcursionRecord> excursions(const LevyPath& path) {
  std::vector<ExcursionRecord> out;
  if (path.values.size() < 2) return out;
  double sup = path.values[0];
  std::size_t start = 0;
  double height = 0;
  for (std::size_t k = 1; k < path.values.size(); ++k) {
    const double x = path.values[k];
    if (x >= sup) {
      if (k > start + 1) out.push_back({sup - path.values[0], height, path.dt * static_cast<double>(k - start)});
      sup = x;
      start = k;
      height = 0;
    } else {
      height = std::max(height, sup - x);
    }
  }
  return out;
}

namespace {

ExcursionLaw finish(ExcursionLaw law, double min_count) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < law.thresholds.size(); ++i) {
    law.rate[i] = law.local_time > 0 ? law.counts[i] / law.local_time : 0.0;
    if (law.counts[i] >= min_count) {
      xs.push_back(law.thresholds[i]);
      ys.push_back(law.rate[i]);
    }
  }
  law.inconclusive = xs.size() < 3;
  if (!law.inconclusive) law.fit = stats::loglog_fit(xs, ys);
  return law;
}

}  // namespace

ExcursionLaw excursion_height_law(std::span<const LevyPath> paths, std::span<const double> thresholds,
                                  double min_count) {
  ExcursionLaw law;
  law.thresholds.assign(thresholds.begin(), thresholds.end());
  law.counts.assign(thresholds.size(), 0.0);
  law.rate.assign(thresholds.size(), 0.0);
  for (const LevyPath& path : paths) {
    const auto ex = excursions(path);
    law.n_excursions += ex.size();
    law.local_time += *std::max_element(path.values.begin(), path.values.end()) - path.values[0];
    for (const auto& e : ex) {
      for (std::size_t i = 0; i < thresholds.size(); ++i) {
        if (e.height > thresholds[i]) law.counts[i] += 1;
      }
    }
  }
  return finish(std::move(law), min_count);
}

ExcursionLaw excursion_height_law(const LevyPath& path, std::span<const double> thresholds, double min_count) {
  return excursion_height_law(std::span<const LevyPath>(&path, 1), thresholds, min_count);
}

double disk_area_density(double ell, double a, bool weighted) {
  if (!(ell > 0) || !(a > 0)) throw std::domain_error("disk_area_density: need ell, a > 0");
  const double base = std::exp(-ell * ell / (2 * a)) / std::sqrt(2 * std::numbers::pi * a * a * a);
  return weighted ? ell * base : ell * ell * ell * base / a;
}

}  // namespace lqg::levy
