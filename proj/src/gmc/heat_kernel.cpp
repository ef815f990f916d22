#include "lqg/gmc/heat_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lqg/common/parallel.hpp"
#include "lqg/gmc/walk.hpp"

namespace lqg::gmc {

namespace {

// Signed offset a - b on a ring of size n, in [-n/2, n/2).
long ring_offset(std::size_t a, std::size_t b, std::size_t n) {
  const long d = static_cast<long>(a) - static_cast<long>(b);
  const long m = static_cast<long>(n);
  return ((d + m / 2) % m + m) % m - m / 2;
}

bool in_bin(std::size_t v, std::size_t center, std::size_t n, bool periodic, std::size_t b) {
  const long lo = -static_cast<long>(b / 2), hi = lo + static_cast<long>(b);
  const std::size_t vi = v / n, vj = v % n, ci = center / n, cj = center % n;
  const long di = periodic ? ring_offset(vi, ci, n) : static_cast<long>(vi) - static_cast<long>(ci);
  const long dj = periodic ? ring_offset(vj, cj, n) : static_cast<long>(vj) - static_cast<long>(cj);
  return di >= lo && di < hi && dj >= lo && dj < hi;
}

double bin_mass(const LatticeField& f, const GmcMeasure& m, std::size_t center, std::size_t b) {
  double total = 0;
  const long n = static_cast<long>(f.n);
  const long lo = -static_cast<long>(b / 2);
  const long ci = static_cast<long>(center / f.n), cj = static_cast<long>(center % f.n);
  for (long di = lo; di < lo + static_cast<long>(b); ++di) {
    for (long dj = lo; dj < lo + static_cast<long>(b); ++dj) {
      long i = ci + di, j = cj + dj;
      if (f.periodic) {
        i = (i % n + n) % n;
        j = (j % n + n) % n;
      } else if (i < 0 || j < 0 || i >= n || j >= n) {
        continue;
      }
      total += m.cell_mass[static_cast<std::size_t>(i * n + j)];
    }
  }
  return total;
}

}  // namespace

HeatKernelEstimate heat_kernel_profile(const LatticeField& field, const GmcMeasure& measure, std::size_t source,
                                       std::span<const std::size_t> targets, std::span<const double> distance,
                                       std::span<const double> times, std::size_t n_walks, std::uint64_t seed,
                                       const HeatKernelOptions& opt) {
  if (targets.empty() || targets[0] != source) throw std::invalid_argument("heat_kernel_profile: targets[0] must be the source");
  if (distance.size() != targets.size()) throw std::invalid_argument("heat_kernel_profile: one distance per target");
  if (times.empty() || !std::is_sorted(times.begin(), times.end()) || !(times.front() > 0))
    throw std::invalid_argument("heat_kernel_profile: times must be positive and sorted");
  if (opt.bin == 0 || opt.bin > field.n) throw std::invalid_argument("heat_kernel_profile: bad bin size");
  const std::size_t T = times.size(), Y = targets.size();
  std::vector<std::size_t> side(T * Y, opt.bin);
  std::vector<double> mass(T * Y);
  for (std::size_t y = 0; y < Y; ++y) {
    std::size_t b = opt.bin;
    double m = bin_mass(field, measure, targets[y], b);
    for (std::size_t k = 0; k < T; ++k) {
      while (m < opt.bin_fraction * times[k] && b < field.n / 4) m = bin_mass(field, measure, targets[y], ++b);
      side[k * Y + y] = b;
      mass[k * Y + y] = m;
    }
  }

  constexpr std::size_t kTask = 100;
  const std::size_t tasks = (n_walks + kTask - 1) / kTask;
  std::vector<std::vector<double>> counts(tasks, std::vector<double>(T * Y, 0.0));
  parallel_for(tasks, opt.workers, [&](std::size_t task) {
    auto& c = counts[task];
    for (std::size_t w = task * kTask; w < std::min(n_walks, (task + 1) * kTask); ++w) {
      LiouvilleWalk walk(field, measure, source, seed, w, opt.exponential_holding);
      std::size_t k = 0;
      while (k < T) {
        const double h = walk.draw_hold();
        const double clock = walk.state().clock;
        while (k < T && clock + h > times[k]) {
          const std::size_t pos = walk.state().position;
          for (std::size_t y = 0; y < Y; ++y) {
            if (in_bin(pos, targets[y], field.n, field.periodic, side[k * Y + y])) c[k * Y + y] += 1;
          }
          ++k;
        }
        if (k < T) walk.step_with(h);
      }
    }
  });

  HeatKernelEstimate est;
  est.times.assign(times.begin(), times.end());
  est.targets.assign(targets.begin(), targets.end());
  est.distance.assign(distance.begin(), distance.end());
  est.walks = n_walks;
  est.min_hits = opt.min_hits;
  est.bin_mass.assign(T, std::vector<double>(Y));
  est.bin_side.assign(T, std::vector<std::size_t>(Y));
  const double N = static_cast<double>(n_walks);
  est.p.assign(T, std::vector<double>(Y));
  est.stderr_ = est.hits = est.p;
  for (std::size_t k = 0; k < T; ++k) {
    for (std::size_t y = 0; y < Y; ++y) {
      double hits = 0;
      for (const auto& c : counts) hits += c[k * Y + y];
      const double q = hits / N;
      const double m = mass[k * Y + y];
      est.bin_mass[k][y] = m;
      est.bin_side[k][y] = side[k * Y + y];
      est.hits[k][y] = hits;
      est.p[k][y] = q / m;
      est.stderr_[k][y] = std::sqrt(q * (1 - q) / N) / m;
      if (hits < opt.min_hits) ++est.dropped;
    }
  }
  est.inconclusive = 2 * est.dropped > T * Y;
  return est;
}

stats::LinearFit on_diagonal_fit(const HeatKernelEstimate& est) {
  std::vector<double> x, y;
  for (std::size_t k = 0; k < est.times.size(); ++k) {
    if (!est.kept(k, 0)) continue;
    x.push_back(std::log(est.times[k]));
    y.push_back(std::log(est.p[k][0]));
  }
  if (x.size() < 2) return {};
  return stats::linear_fit(x, y);
}

StretchFit stretch_exponent_fit(const HeatKernelEstimate& est) {
  StretchFit out;
  double c_sum = 0;
  std::size_t c_count = 0;
  for (std::size_t k = 0; k < est.times.size(); ++k) {
    if (!est.kept(k, 0)) continue;
    c_sum += est.times[k] * est.p[k][0];
    ++c_count;
  }
  if (c_count == 0) {
    out.inconclusive = true;
    return out;
  }
  out.C = c_sum / static_cast<double>(c_count);
  std::vector<double> x, y;
  for (std::size_t k = 0; k < est.times.size(); ++k) {
    for (std::size_t t = 1; t < est.targets.size(); ++t) {
      if (!est.kept(k, t)) continue;
      const double z = -std::log(est.p[k][t] * est.times[k] / out.C);
      if (!(z > 0)) continue;
      x.push_back(std::log(std::pow(est.distance[t], 4) / est.times[k]));
      y.push_back(std::log(z));
    }
  }
  out.points = x.size();
  if (x.size() < 3) {
    out.inconclusive = true;
    return out;
  }
  const auto fit = stats::linear_fit(x, y);
  out.exponent = fit.slope;
  out.stderr_ = fit.slope_stderr;
  out.inconclusive = est.inconclusive;
  return out;
}

double premixing_time(const LatticeField& field, const GmcMeasure& measure, std::size_t start, std::uint64_t seed,
                      std::size_t partition, double level) {
  const std::size_t n = field.n;
  if (partition == 0 || n % partition) throw std::invalid_argument("premixing_time: partition must divide n");
  const std::size_t side = n / partition, blocks = partition * partition;
  auto block_of = [&](std::size_t v) { return (v / n / side) * partition + (v % n) / side; };
  std::vector<double> mu(blocks, 0.0), occ(blocks, 0.0);
  for (std::size_t v = 0; v < field.size(); ++v) mu[block_of(v)] += measure.cell_mass[v] / measure.total;
  auto entropy = [](const std::vector<double>& p, double total) {
    double h = 0;
    for (double x : p) {
      if (x > 0) h -= x / total * std::log(x / total);
    }
    return h;
  };
  const double target = level * entropy(mu, 1.0);
  LiouvilleWalk walk(field, measure, start, seed, 0x6d6978);
  const std::uint64_t check = field.size() / 4 + 1;
  const std::uint64_t cap = 400 * static_cast<std::uint64_t>(field.size());
  while (walk.state().steps < cap) {
    const std::size_t b = block_of(walk.state().position);
    occ[b] += walk.step();
    if (walk.state().steps % check == 0 && entropy(occ, walk.state().clock) >= target) break;
  }
  return walk.state().clock;
}

}  // namespace lqg::gmc
